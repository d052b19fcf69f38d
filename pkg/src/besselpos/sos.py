"""Sums-of-squares expansions of the ``2F3`` family

    Omega(x) = 2F3(a, a+1/2; c+1, a+b, a+b+1/2; -x^2/4)

as series of squared Bessel functions ``J_{nu+n}(x/2)^2``. The coefficients
``C(n, nu)`` are terminating balanced series; they are computed in exact
rational arithmetic by three independent routes, because the direct
``5F4`` sum cancels catastrophically (about 22 digits at ``n = 30``).
"""
from __future__ import annotations

import enum
import functools
import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import special as sc

from . import _rational
from .exceptions import DomainError, PoleError
from .special import EvalResult, beta_fn, hyper_pfq, pochhammer

__all__ = [
    "OmegaParams",
    "CoeffMethod",
    "OmegaMethod",
    "TruncationWarning",
    "nu_saalschutz",
    "coeff_C",
    "coeff_C_boundary",
    "coeff_A",
    "omega_value",
    "boundary_g7",
    "g7_coefficients",
    "is_saalschutzian",
]

_HALF = Fraction(1, 2)
_QUARTER = Fraction(1, 4)


class TruncationWarning(UserWarning):
    """A truncated expansion left a tail above the requested tolerance."""


class CoeffMethod(str, enum.Enum):
    DIRECT = "direct"
    GASPER = "gasper"
    WHIPPLE = "whipple"


class OmegaMethod(str, enum.Enum):
    SERIES = "series"
    INTEGRAL = "integral"
    SOS = "sos"


@dataclass(frozen=True)
class OmegaParams:
    a: float
    b: float
    c: float

    def __post_init__(self):
        if not (self.a > 0 and self.b > 0 and self.c > -1):
            raise DomainError(
                f"Omega needs a > 0, b > 0, c > -1; got a={self.a}, b={self.b}, c={self.c}"
            )

    @property
    def nu(self) -> float:
        return nu_saalschutz(self.b, self.c)

    def exact(self):
        """``(a, b, c, nu)`` as exact rationals."""
        a, b, c = Fraction(self.a), Fraction(self.b), Fraction(self.c)
        return a, b, c, b + c / 2 - _QUARTER

    def numerators(self):
        return (self.a, self.a + 0.5)

    def denominators(self):
        return (self.c + 1.0, self.a + self.b, self.a + self.b + 0.5)


def nu_saalschutz(b: float, c: float) -> float:
    """Order ``nu = b + c/2 - 1/4`` that makes every ``C(n, nu)`` balanced."""
    if not b + c / 2 + 0.25 > 0:
        raise DomainError(f"need b + c/2 + 1/4 > 0, got {b + c / 2 + 0.25}")
    return b + c / 2 - 0.25


def is_saalschutzian(numerators, denominators) -> bool:
    """Exact check that the numerator sum plus one equals the denominator sum."""
    return sum(Fraction(p) for p in numerators) + 1 == sum(Fraction(q) for q in denominators)


class _Scaled:
    """``a, b, c/2, nu`` and the constants ``1, 1/2, 1/4`` as integers over
    one common denominator ``d``, so inner loops never touch ``Fraction``."""

    def __init__(self, a, b, c, nu):
        d = 4
        for f in (a, b, c / 2, nu):
            d = d * f.denominator // math.gcd(d, f.denominator)
        self.d = d
        self.a, self.b = int(a * d), int(b * d)
        self.ch, self.nu = int(c / 2 * d), int(nu * d)
        self.one, self.half, self.quarter = d, d // 2, d // 4


@functools.lru_cache(maxsize=64)
def _scaled(a, b, c, nu):
    return _Scaled(a, b, c, nu)


def _direct_params(n, s):
    d, a, b, nu = s.d, s.a, s.b, s.nu
    num = [-n * d, n * d + 2 * nu, nu + d, a, a + s.half]
    den = [nu + s.half, 2 * s.ch + d, a + b, a + b + s.half]
    return num, den


def _coeff_direct(n, s):
    return _rational.terminating_scaled(n, *_direct_params(n, s), s.d)


def _inner_saalschutz(k, n, s):
    d, a, b, ch, nu = s.d, s.a, s.b, s.ch, s.nu
    kd = k * d
    num = [(k - n) * d, kd + n * d + 2 * nu, kd + a, kd + a + s.half]
    den = [2 * kd + 2 * a + b - ch - s.quarter, kd + nu + s.half, kd + 2 * ch + d]
    return _rational.terminating_scaled(n - k, num, den, d)


def _inner_whipple(k, n, s):
    d, a, b, ch, nu = s.d, s.a, s.b, s.ch, s.nu
    m, kd, md = n - k, k * d, (n - k) * d
    pre = _rational.mul(
        _rational.poch_scaled(nu + s.half - a, m, d),
        _rational.poch_scaled(2 * ch + d - a, m, d),
    )
    pre = _rational.div(pre, _rational.poch_scaled(kd + nu + s.half, m, d))
    pre = _rational.div(pre, _rational.poch_scaled(kd + 2 * ch + d, m, d))
    num = [-md, -md + 2 * a - b - 3 * ch + s.quarter, kd + a + b - ch - 3 * s.quarter, kd + a]
    den = [-md + a - b - ch + 3 * s.quarter, -md + a - 2 * ch, 2 * kd + 2 * a + b - ch - s.quarter]
    return _rational.mul(pre, _rational.terminating_scaled(m, num, den, d))


def _coeff_expanded(n, s, inner):
    """``sum_k w_k A_k`` in Horner form ``A_0 + r_0 (A_1 + r_1 (...))``,
    where ``r_k = w_{k+1} / w_k``."""
    d, a, b, ch, nu = s.d, s.a, s.b, s.ch, s.nu
    p = 2 * a + b - ch - 5 * s.quarter
    q = a - ch - 3 * s.quarter
    r = a - ch - s.quarter
    big = n * d + 2 * nu
    acc = inner(n, n, s)
    for k in range(n - 1, -1, -1):
        kd = k * d
        top = (n - k) * (p + kd) * (q + kd) * (r + kd) * (big + kd) * (a + kd) * (a + s.half + kd)
        bot = (
            (k + 1) * (p + 2 * kd) * (p + 2 * kd + d)
            * (a + b + kd) * (2 * ch + d + kd) * (a + b + s.half + kd) * (nu + s.half + kd)
        )
        acc = _rational.reduce(_rational.add(inner(k, n, s), _rational.mul((top, bot), acc)))
    return acc


def coeff_C(n: int, p: OmegaParams, method="direct", *, exact: bool = False):
    """Coefficient ``C(n, nu)`` of the sums-of-squares expansion.

    Parameters
    ----------
    n : int
        Index, ``n >= 0``.
    p : OmegaParams
    method : {"direct", "gasper", "whipple"}
        ``direct`` sums the balanced ``5F4`` at unit argument. ``gasper``
        uses Gasper's expansion into balanced ``4F3`` blocks ``A_k``;
        ``whipple`` does the same with every ``A_k`` rewritten by Whipple's
        transformation, where all terms are positive on the interior of the
        positivity region.
    exact : bool
        Return the exact :class:`~fractions.Fraction`.
    """
    if n < 0 or int(n) != n:
        raise DomainError(f"n must be a non-negative integer, got {n}")
    method = CoeffMethod(method)
    a, b, c, nu = p.exact()
    if not nu + _HALF > 0:
        raise DomainError("need b + c/2 + 1/4 > 0")
    s = _scaled(a, b, c, nu)
    try:
        if method is CoeffMethod.DIRECT:
            value = _coeff_direct(int(n), s)
        elif method is CoeffMethod.GASPER:
            value = _coeff_expanded(int(n), s, _inner_saalschutz)
        else:
            value = _coeff_expanded(int(n), s, _inner_whipple)
        value = _rational.to_fraction(value)
    except ZeroDivisionError as exc:
        if isinstance(exc, PoleError):
            raise
        raise PoleError(f"pole in C({n}, nu) by the {method.value} route at {p}") from exc
    return value if exact else float(value)


def coeff_A(k: int, n: int, p: OmegaParams, *, transformed: bool = True, exact: bool = False):
    """Balanced block ``A_k(a, b, c)`` of Gasper's expansion of ``C(n, nu)``.

    ``transformed=True`` evaluates the Whipple-transformed form (prefactor
    times a ``4F3`` whose terms alternate only through ``(k-n)_j``);
    ``transformed=False`` evaluates the defining ``4F3``.
    """
    if not 0 <= k <= n:
        raise DomainError(f"need 0 <= k <= n, got k={k}, n={n}")
    a, b, c, nu = p.exact()
    inner = _inner_whipple if transformed else _inner_saalschutz
    try:
        value = _rational.to_fraction(inner(int(k), int(n), _scaled(a, b, c, nu)))
    except ZeroDivisionError as exc:
        raise PoleError(f"pole in A_{k} for n={n} at {p}") from exc
    return value if exact else float(value)


def coeff_C_boundary(n: int, b: float, c: float, *, exact: bool = False):
    """``C(n, nu)`` on the edge ``a = b + c/2 + 1/4`` via a single Whipple step.

    Equals ``coeff_C(n, OmegaParams(b + c/2 + 1/4, b, c))``; on the edge
    ``1/2 < b <= c/2 + 1/4``, ``c > 1/2`` it is manifestly positive.
    """
    b, c = Fraction(b), Fraction(c)
    pre = pochhammer(b - _HALF, n) * pochhammer(b, n)
    pre /= pochhammer(2 * b + c / 2 + _QUARTER, n) * pochhammer(2 * b + c / 2 + 3 * _QUARTER, n)
    num = [Fraction(-n), -n - 2 * b + 3 * _HALF, -b + c / 2 + _QUARTER, b + c / 2 + 3 * _QUARTER]
    den = [-n - b + 3 * _HALF, -n - b + 1, c + 1]
    try:
        value = pre * _rational.to_fraction(_rational.terminating_pair(num, den))
    except ZeroDivisionError as exc:
        raise PoleError(f"pole in boundary C({n}) at b={b}, c={c}") from exc
    return value if exact else float(value)


def _check_two_nu(nu: float):
    two_nu = Fraction(nu) * 2
    if two_nu < 0 and (two_nu.denominator == 1 or abs(float(two_nu) - round(float(two_nu))) < 1e-12):
        raise DomainError(f"2 nu = {float(two_nu)} must not be a negative integer")


def _squared_bessel_sum(coeffs, nu: float, x, tol: float):
    """``sum_n coeffs[n] / ((nu+1)_n)^2 (x/4)^(2n) calJ_{nu+n}(x/2)^2`` with tail.

    This is ``Gamma(nu+1)^2 (x/4)^(-2 nu) sum_n coeffs[n] J_{nu+n}(x/2)^2``
    rewritten so that it stays finite at ``x = 0``.
    """
    x = np.asarray(x, dtype=float)
    total = np.zeros_like(x)
    log_x4 = np.log(np.where(x > 0, x / 4.0, 1.0))
    last = np.zeros_like(x)
    for n, coef in enumerate(coeffs):
        if coef == 0:
            last = np.zeros_like(x)
            continue
        jn = hyper_pfq((), (nu + n + 1.0,), x / 2.0).value
        log_poch = sc.gammaln(nu + n + 1.0) - sc.gammaln(nu + 1.0)
        if n == 0:
            scale = np.ones_like(x)
        else:
            scale = np.where(x > 0, np.exp(2 * n * log_x4 - 2 * log_poch), 0.0)
        last = coef * scale * jn * jn
        total = total + last
    tail = np.abs(last)
    if np.any(tail > tol * np.maximum(1.0, np.abs(total))):
        warnings.warn(
            f"truncated squared-Bessel expansion has tail {float(np.max(tail)):.3g}",
            TruncationWarning,
            stacklevel=3,
        )
    return total, tail


def _sos_weights(nu: float, count: int):
    """``(2n+2nu)/(n+2nu) * (2nu+1)_n / n!`` for ``n < count``; the ``n = 0`` weight is 1."""
    out = [1.0]
    poch_over_fact = 1.0
    for n in range(1, count):
        poch_over_fact *= (2 * nu + n) / n
        out.append((2 * n + 2 * nu) / (n + 2 * nu) * poch_over_fact)
    return out


def omega_value(p: OmegaParams, x, method="series", *, n_terms: int = 60,
                tol: float = 1e-12, jacobi_nodes: int = 64) -> EvalResult:
    """``Omega(x)`` by power series, Beta-integral representation or sums of squares.

    ``integral`` applies Gauss-Jacobi quadrature to
    ``int_0^1 0F1(c+1; -x^2 t^2/4) (1-t)^(2b-1) t^(2a-1) dt / B(2a, 2b)``
    and doubles the node count until two rules agree to ``tol``.
    ``sos`` sums ``n_terms`` terms of the squared-Bessel expansion and reports
    the last term as ``abs_err_est``.
    """
    method = OmegaMethod(method)
    scalar = np.ndim(x) == 0
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(xa < 0):
        raise DomainError("Omega is evaluated for x >= 0")

    if method is OmegaMethod.SERIES:
        res = hyper_pfq(p.numerators(), p.denominators(), xa)
        value, err, used = res.value, res.abs_err_est, res.terms_used
    elif method is OmegaMethod.INTEGRAL:
        value, err, used = _omega_integral(p, xa, tol, jacobi_nodes)
    else:
        nu = p.nu
        _check_two_nu(nu)
        coeffs = [c * w for c, w in zip(
            (coeff_C(n, p) for n in range(n_terms)), _sos_weights(nu, n_terms))]
        value, err = _squared_bessel_sum(coeffs, nu, xa, tol)
        used = n_terms
    if scalar:
        return EvalResult(float(value[0]), float(err[0]), used)
    return EvalResult(value, err, used)


def _omega_integral(p: OmegaParams, x, tol, nodes):
    a, b, c = p.a, p.b, p.c
    norm = beta_fn(2 * a, 2 * b) * 2.0 ** (2 * a + 2 * b - 1)

    def rule(m):
        s, w = sc.roots_jacobi(m, 2 * b - 1, 2 * a - 1)
        t = (1.0 + s) / 2.0
        vals = hyper_pfq((), (c + 1.0,), np.outer(x, t)).value
        return vals @ w / norm

    prev = rule(nodes)
    m = nodes
    while True:
        m *= 2
        cur = rule(m)
        diff = np.abs(cur - prev)
        if np.all(diff <= tol * np.maximum(1.0, np.abs(cur))) or m >= 1024:
            return cur, diff, m
        prev = cur


def g7_coefficients(a: float, b: float, n_terms: int):
    """Summand weights of the squared-Bessel expansion of
    ``1F2(a; b, 3a+1/2-b; -x^2/4)``:
    ``(2n+2a-1)/(n+2a-1) (2a)_n/n! (2a-b)_n (b-a-1/2)_n / ((b)_n (3a+1/2-b)_n)``.
    """
    out = []
    for n in range(n_terms):
        if n == 0:
            out.append(1.0)
            continue
        w = (2 * n + 2 * a - 1) / (n + 2 * a - 1)
        w *= math.prod((2 * a + j) / (j + 1) for j in range(n))
        w *= pochhammer(2 * a - b, n) * pochhammer(b - a - 0.5, n)
        w /= pochhammer(b, n) * pochhammer(3 * a + 0.5 - b, n)
        out.append(w)
    return out


def boundary_g7(a: float, b: float, x, n_terms: int = 60, *, tol: float = 1e-12) -> EvalResult:
    """``1F2(a; b, 3a+1/2-b; -x^2/4)`` on the lower edge of its Newton diagram.

    Evaluated as
    ``Gamma(a+1/2)^2 (x/4)^(1-2a) sum_n g_n J_{n+a-1/2}(x/2)^2`` with the
    weights of :func:`g7_coefficients`; every weight is non-negative when
    ``b`` lies between ``a + 1/2`` and ``2a``.
    """
    if not a > 0:
        raise DomainError(f"a must be > 0, got {a}")
    lo, hi = sorted((a + 0.5, 2 * a))
    if not lo <= b <= hi:
        raise DomainError(f"b must lie between a+1/2 and 2a, got b={b}")
    scalar = np.ndim(x) == 0
    xa = np.atleast_1d(np.asarray(x, dtype=float))
    value, tail = _squared_bessel_sum(g7_coefficients(a, b, n_terms), a - 0.5, xa, tol)
    if scalar:
        return EvalResult(float(value[0]), float(tail[0]), n_terms)
    return EvalResult(value, tail, n_terms)
