"""The truncated Bessel moments ``int_0^x (x^mu - t^mu)^lam t^alpha J_beta(t) dt``.

Two independent routes are provided: adaptive quadrature with algebraic
endpoint weights (:func:`integral_direct`) and hypergeometric closed forms
(:func:`integral_closed`) for ``lam = 0``, ``mu = 1`` and ``mu = 2``.
:func:`scan_positivity` combines them into a sign certificate on a grid.
"""
from __future__ import annotations

import enum
import math
import os
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np
from scipy import integrate, optimize
from scipy import special as sc

from .exceptions import ConvergenceError, DomainError
from .regions import IntegralParams, RegionId, certifying_region
from .special import EvalResult, beta_fn, bessel_j, hyper_pfq

__all__ = [
    "QuadResult",
    "VerdictKind",
    "PositivityVerdict",
    "KernelKind",
    "integral_direct",
    "integral_closed",
    "closed_form_result",
    "kernel_value",
    "scan_positivity",
    "bessel_second_zero",
    "alpha_star",
    "SCAN_DEFAULTS",
]

#: documented defaults of :func:`scan_positivity`
SCAN_DEFAULTS = {"x_max": 50.0, "step": 0.05, "tol": 1e-10}
_SIGN_MARGIN = 10.0
_QUAD_LIMIT = 1000
_QUAD_RTOL = 1e-13
# below this relative error an absolute tolerance is not attainable in doubles
_QUAD_FLOOR = 1e-10
# relative rounding budget of gamma, beta and pow prefactors in closed forms
_PREFACTOR_RTOL = 1e-14


@dataclass(frozen=True)
class QuadResult:
    value: float
    abs_err_est: float
    subdivisions: int


class VerdictKind(str, enum.Enum):
    CERTIFIED = "CertifiedByRegion"
    POSITIVE = "NumericallyPositive"
    REFUTED = "Refuted"


@dataclass(frozen=True)
class PositivityVerdict:
    """Outcome of :func:`scan_positivity`.

    Exactly one group of fields is populated, according to ``kind``:
    ``region`` for a certificate, ``min_value``/``argmin`` for a numerically
    positive scan, ``x``/``value``/``err`` for a refutation witness.
    """

    kind: VerdictKind
    region: RegionId | None = None
    min_value: float | None = None
    argmin: float | None = None
    x: float | None = None
    value: float | None = None
    err: float | None = None

    @classmethod
    def certified(cls, region):
        return cls(VerdictKind.CERTIFIED, region=RegionId(region))

    @classmethod
    def positive(cls, min_value, argmin):
        return cls(VerdictKind.POSITIVE, min_value=float(min_value), argmin=float(argmin))

    @classmethod
    def refuted(cls, x, value, err):
        if not value + err < 0:
            raise ValueError("a refutation needs value + err < 0")
        return cls(VerdictKind.REFUTED, x=float(x), value=float(value), err=float(err))

    @property
    def is_refuted(self) -> bool:
        return self.kind is VerdictKind.REFUTED

    def to_dict(self) -> dict:
        out = {k: v for k, v in asdict(self).items() if v is not None}
        out["kind"] = self.kind.value
        if self.region is not None:
            out["region"] = self.region.value
        return out


def _reduced_bessel(beta: float, z: float) -> float:
    """``J_beta(z) / z**beta``, finite at ``z = 0``."""
    if z < 1.0:
        return float(sc.hyp0f1(beta + 1.0, -z * z / 4.0) / (2.0 ** beta * sc.gamma(beta + 1.0)))
    return float(sc.jv(beta, z) / z ** beta)


def _power_ratio(u: float, mu: float) -> float:
    """``(1 - u**mu) / (1 - u)`` on ``[0, 1]``, smooth up to ``u = 1``."""
    if u >= 1.0:
        return mu
    if u <= 0.0:
        return 1.0
    return -math.expm1(mu * math.log(u)) / (1.0 - u)


def _as_params(p) -> IntegralParams:
    if isinstance(p, IntegralParams):
        return p
    return IntegralParams(*p)


def integral_direct(p, x: float, tol: float = 1e-10, *, rtol: float = _QUAD_RTOL) -> QuadResult:
    """Quadrature of the Bessel moment on ``(0, x)``.

    After ``t = x u`` the integrand is
    ``u**(alpha+beta) (1-u)**lam * g(u)`` with ``g`` smooth on ``[0, 1]``;
    both algebraic endpoint factors go into the quadrature weight
    (QUADPACK's QAWS rule), so neither ``alpha + beta`` near ``-1`` nor a
    fractional ``lam`` slows convergence.

    Raises
    ------
    ConvergenceError
        If the error estimate exceeds ``max(tol, 1e-10 * |value|)``; the
        relative floor matters only for large integrals where an absolute
        ``tol`` is below double-precision resolution.
    """
    p = _as_params(p)
    if not x > 0:
        raise DomainError(f"x must be > 0, got {x}")
    if not tol > 0:
        raise DomainError(f"tol must be > 0, got {tol}")
    mu, lam, alpha, beta = p.mu, p.lam, p.alpha, p.beta
    scale = x ** (mu * lam + alpha + beta + 1.0)

    if lam == 0:
        def g(u):
            return _reduced_bessel(beta, x * u)
    else:
        def g(u):
            return _power_ratio(u, mu) ** lam * _reduced_bessel(beta, x * u)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        out = integrate.quad(
            g, 0.0, 1.0,
            weight="alg", wvar=(alpha + beta, lam),
            epsabs=tol / scale, epsrel=rtol, limit=_QUAD_LIMIT, full_output=1,
        )
    value, err = scale * out[0], scale * out[1]
    if not (math.isfinite(value) and err <= max(tol, _QUAD_FLOOR * abs(value))):
        raise ConvergenceError(
            f"quadrature did not converge for {p} at x={x}: error estimate {err:.3g}"
        )
    return QuadResult(value, err, int(out[2]["last"]))


def _closed_form(p: IntegralParams, x):
    """Vectorized closed form: ``(value, err, precision_loss)`` or ``None``."""
    mu, lam, alpha, beta = p.mu, p.lam, p.alpha, p.beta
    x = np.asarray(x, dtype=float)
    s = alpha + beta + 1.0
    A = s / 2.0
    if lam == 0 and alpha == 0.5 and beta == 0.5:
        value = 2.0 * math.sqrt(2.0) / math.sqrt(math.pi) * np.sin(x / 2.0) ** 2
        return value, 4e-16 * (np.abs(value) + 1.0), np.zeros(x.shape, dtype=bool)
    if mu == 2 and lam > 0 and alpha == beta == lam + 0.5:
        nu = lam + 0.5
        series = hyper_pfq((), (nu + 1.0,), x / 2.0)
        # J_nu(x/2) = (x/4)^nu * 0F1(nu+1; -x^2/16) / Gamma(nu+1)
        jscale = (x / 4.0) ** nu / sc.gamma(nu + 1.0)
        pref = math.sqrt(math.pi) * sc.gamma(lam + 1.0) * (2.0 * x * x) ** nu / 2.0 * jscale ** 2
        value = pref * series.value ** 2
        err = pref * (2.0 * np.abs(series.value) * series.abs_err_est + series.abs_err_est ** 2)
        return value, err + _PREFACTOR_RTOL * np.abs(value), series.precision_loss
    if lam == 0:
        series = hyper_pfq((A,), (beta + 1.0, A + 1.0), x)
        pref = x ** s / (2.0 ** beta * sc.gamma(beta + 1.0) * s)
    elif mu == 2:
        series = hyper_pfq((A,), (beta + 1.0, lam + 1.0 + A), x)
        pref = beta_fn(lam + 1.0, A) * x ** (2.0 * lam + s) / (2.0 ** (beta + 1.0) * sc.gamma(beta + 1.0))
    elif mu == 1:
        series = hyper_pfq(
            (A, (alpha + beta + 2.0) / 2.0),
            (beta + 1.0, (alpha + beta + lam + 2.0) / 2.0, (alpha + beta + lam + 3.0) / 2.0),
            x,
        )
        pref = beta_fn(s, lam + 1.0) * x ** (lam + s) / (2.0 ** beta * sc.gamma(beta + 1.0))
    else:
        return None
    value = pref * series.value
    err = pref * series.abs_err_est + _PREFACTOR_RTOL * np.abs(value)
    return value, err, series.precision_loss


def closed_form_result(p, x) -> EvalResult | None:
    """Closed-form value with its error estimate, or ``None`` if no closed form applies."""
    p = _as_params(p)
    out = _closed_form(p, x)
    if out is None:
        return None
    value, err, loss = out
    if np.ndim(value) == 0:
        return EvalResult(float(value), float(err), 0, bool(loss))
    return EvalResult(value, err, 0, loss)


def integral_closed(p, x):
    """Hypergeometric closed form of the integral, or ``None``.

    Applies for ``lam = 0`` (any ``mu``), ``mu = 2`` and ``mu = 1``,
    including the two exceptional parameter sets with elementary
    or squared-Bessel values.
    """
    res = closed_form_result(p, x)
    return None if res is None else res.value


class KernelKind(str, enum.Enum):
    PHI = "Phi"
    PSI = "Psi"
    K = "K"


def kernel_value(kind, alpha: float, beta: float, x, lam: float | None = None):
    """Hypergeometric kernel whose sign governs the integral.

    ``Phi`` is ``1F2(A; beta+1, A+1)``, ``Psi`` is ``1F2(A; beta+1, lam+1+A)``
    and ``K`` is ``2F3(A, A+1/2; beta+1, A+1, A+3/2)``, all at ``-x^2/4``
    with ``A = (alpha+beta+1)/2``.
    """
    kind = KernelKind(kind)
    if not (beta > -1 and alpha + beta + 1 > 0):
        raise DomainError("kernel requires beta > -1 and alpha + beta + 1 > 0")
    A = (alpha + beta + 1.0) / 2.0
    if kind is KernelKind.PHI:
        return hyper_pfq((A,), (beta + 1.0, A + 1.0), x).value
    if kind is KernelKind.PSI:
        if lam is None:
            raise DomainError("Psi kernel requires lambda")
        return hyper_pfq((A,), (beta + 1.0, lam + 1.0 + A), x).value
    return hyper_pfq((A, A + 0.5), (beta + 1.0, A + 1.0, A + 1.5), x).value


def _thread_count(n_jobs):
    if n_jobs is not None:
        return max(1, int(n_jobs))
    env = os.environ.get("BESSELPOS_THREADS")
    return max(1, int(env)) if env else 1


def scan_positivity(
    p,
    x_max: float = SCAN_DEFAULTS["x_max"],
    step: float = SCAN_DEFAULTS["step"],
    tol: float = SCAN_DEFAULTS["tol"],
    *,
    certify: bool = True,
    n_jobs: int | None = None,
    chunk: int = 200,
) -> PositivityVerdict:
    """Check the sign of the integral on ``step, 2 step, ..., x_max``.

    With ``certify=True`` a region theorem is consulted first. Otherwise the
    closed form is used where it exists and keeps its precision, quadrature
    elsewhere. A grid point refutes positivity only when
    ``value + 10 * err < 0``.
    """
    p = _as_params(p)
    if not (x_max > 0 and step > 0):
        raise DomainError("x_max and step must be > 0")
    if certify:
        region = certifying_region(p.mu, p.lam, p.alpha, p.beta)
        if region is not None:
            return PositivityVerdict.certified(region)

    count = int(math.floor(x_max / step + 1e-9))
    grid = step * np.arange(1, count + 1)
    workers = _thread_count(n_jobs)
    has_closed = _closed_form(p, grid[:1]) is not None

    def quad_at(x):
        r = integral_direct(p, float(x), tol)
        return r.value, r.abs_err_est

    best_value, best_x = math.inf, math.nan
    with ThreadPoolExecutor(max_workers=workers) as pool:
        for start in range(0, count, chunk):
            xs = grid[start:start + chunk]
            if has_closed:
                values, errs, loss = _closed_form(p, xs)
                values = np.array(values, dtype=float)
                errs = np.array(errs, dtype=float)
                redo = np.flatnonzero(loss | ~np.isfinite(values))
            else:
                values = np.empty_like(xs)
                errs = np.empty_like(xs)
                redo = np.arange(xs.size)
            for i, (v, e) in zip(redo, pool.map(quad_at, xs[redo])):
                values[i], errs[i] = v, e
            bad = np.flatnonzero(values + _SIGN_MARGIN * errs < 0)
            if bad.size:
                i = bad[0]
                return PositivityVerdict.refuted(xs[i], values[i], _SIGN_MARGIN * errs[i])
            j = int(np.argmin(values))
            if values[j] < best_value:
                best_value, best_x = float(values[j]), float(xs[j])
    return PositivityVerdict.positive(best_value, best_x)


def bessel_second_zero(beta: float, *, xtol: float = 1e-14, maxiter: int = 200) -> float:
    """Second positive zero of ``J_beta``.

    Sign changes are located on a ``pi/4`` ladder (``J_beta > 0`` just right
    of the origin), then refined by Brent's method on :func:`bessel_j`.
    """
    if not beta > -1:
        raise DomainError(f"beta must be > -1, got {beta}")
    h = math.pi / 4.0
    prev_x, prev_sign = 0.0, 1.0
    found = 0
    k = 1
    while k < 400:
        x = k * h
        v = bessel_j(beta, x)
        sign = math.copysign(1.0, v) if v != 0 else 0.0
        if sign == 0.0:
            found += 1
            if found == 2:
                return x
            prev_x, prev_sign = x, -prev_sign
            k += 1
            continue
        if sign != prev_sign:
            found += 1
            if found == 2:
                try:
                    return optimize.brentq(
                        lambda t: bessel_j(beta, t), prev_x, x, xtol=xtol, maxiter=maxiter
                    )
                except RuntimeError as exc:  # pragma: no cover - brentq convergence
                    raise ConvergenceError(str(exc)) from exc
        prev_x, prev_sign = x, sign
        k += 1
    raise ConvergenceError(f"no second zero of J_{beta} found below {k * h}")


def alpha_star(beta: float, tol: float = 1e-10, *, eps: float = 1e-6, expansions: int = 5) -> float:
    """Exponent ``alpha`` at which ``int_0^{j_{beta,2}} t^alpha J_beta(t) dt`` vanishes.

    Root-found by Brent's method on ``(-beta-1+eps, beta+2]``; the upper end
    is pushed out (doubling the bracket width) up to ``expansions`` times.
    """
    if not -1 < beta < 0.5:
        raise DomainError(f"alpha_star is defined for -1 < beta < 1/2, got {beta}")
    zero = bessel_second_zero(beta)

    def moment(alpha):
        return integral_direct(IntegralParams(1.0, 0.0, alpha, beta), zero, tol=1e-13).value

    lo = -beta - 1.0 + eps
    hi = beta + 2.0
    f_lo = moment(lo)
    f_hi = moment(hi)
    tries = 0
    while f_lo * f_hi > 0:
        if tries >= expansions:
            raise ConvergenceError(
                f"no sign change of the moment on ({lo}, {hi}] for beta={beta}"
            )
        hi = lo + 2.0 * (hi - lo)
        f_hi = moment(hi)
        tries += 1
    return optimize.brentq(moment, lo, hi, xtol=tol, rtol=4 * np.finfo(float).eps, maxiter=200)
