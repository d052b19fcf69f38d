"""Buhmann's compactly supported radial basis functions.

``W(r) = int (1 - r^2/t)_+^lam t^alpha (1 - t^delta)_+^rho dt`` on ``R^n``,
its radial Fourier transform, closed-form family members, Gram matrices and
interpolation.
"""
from __future__ import annotations

import enum
import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np
from scipy import integrate, linalg
from scipy import special as sc
from scipy.spatial.distance import cdist, pdist, squareform

from .exceptions import (
    ConvergenceError,
    DomainError,
    NotPositiveDefiniteError,
    PrecisionLossError,
)
from .integrals import _power_ratio, _thread_count, integral_direct
from .regions import IntegralParams, RegionId, rbf_region_contains
from .special import EvalResult, bessel_j

__all__ = [
    "RbfSpec",
    "PointSet",
    "SpecialKind",
    "w_value",
    "w_values",
    "w_hat",
    "w_hat_result",
    "special_w",
    "special_w_hat",
    "special_spec",
    "certify_spec",
    "gram",
    "cholesky_pivots",
    "is_positive_definite",
    "fit_interpolant",
    "evaluate_interpolant",
]

_QUAD_LIMIT = 500
_QUAD_RTOL = 1e-13
_QUAD_FLOOR = 1e-10


@dataclass(frozen=True)
class RbfSpec:
    """Parameters ``(n, delta, rho, lam, alpha)`` of the kernel on ``R^n``.

    Requires ``delta > 0``, ``rho >= 0``, ``lam > -1`` and
    ``alpha > -n/2 - 1``.
    """

    n: int
    delta: float
    rho: float
    lam: float
    alpha: float

    def __post_init__(self):
        if isinstance(self.n, bool) or int(self.n) != self.n or self.n < 1:
            raise DomainError(f"need integer n >= 1, got n={self.n}")
        object.__setattr__(self, "n", int(self.n))
        for name in ("delta", "rho", "lam", "alpha"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v}")
            object.__setattr__(self, name, v)
        broken = []
        if not self.delta > 0:
            broken.append(f"delta > 0 (delta={self.delta})")
        if not self.rho >= 0:
            broken.append(f"rho >= 0 (rho={self.rho})")
        if not self.lam > -1:
            broken.append(f"lambda > -1 (lambda={self.lam})")
        if not self.alpha > -self.n / 2 - 1:
            broken.append(f"alpha > -n/2 - 1 = {-self.n / 2 - 1} (alpha={self.alpha})")
        if broken:
            raise DomainError("RbfSpec violates " + "; ".join(broken))

    @property
    def finite_at_origin(self) -> bool:
        """``W(0) = int_0^1 t^alpha (1 - t^delta)^rho dt`` is finite."""
        return self.alpha > -1

    def integral_params(self) -> IntegralParams:
        """Bessel-moment parameters whose integral gives the Fourier transform."""
        half = self.n / 2
        return IntegralParams(
            mu=2 * self.delta,
            lam=self.rho,
            alpha=2 * self.alpha + 1 - self.lam + half,
            beta=self.lam + half,
        )


@dataclass(frozen=True)
class PointSet:
    """``m`` points in ``R^n`` stored as an ``(m, n)`` float array."""

    points: np.ndarray
    distinct: bool = True

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim == 1:
            pts = pts[:, None]
        if pts.ndim != 2 or pts.shape[0] == 0:
            raise DomainError(f"points must be a non-empty (m, n) array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise DomainError("points must be finite")
        if self.distinct and pts.shape[0] > 1 and np.min(pdist(pts)) == 0:
            raise DomainError("points must be pairwise distinct")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]


def _quad_raw(f, a, b, wvar, tol):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        if wvar is None:
            out = integrate.quad(f, a, b, epsabs=tol, epsrel=_QUAD_RTOL, limit=_QUAD_LIMIT, full_output=1)
        else:
            out = integrate.quad(
                f, a, b, weight="alg", wvar=wvar,
                epsabs=tol, epsrel=_QUAD_RTOL, limit=_QUAD_LIMIT, full_output=1,
            )
    return out[0], out[1]


def _accept(value, err, tol):
    if not (math.isfinite(value) and err <= max(tol, _QUAD_FLOOR * abs(value))):
        raise ConvergenceError(f"quadrature error estimate {err:.3g} for value {value:.6g}")
    return value, err


def _quad_alg(g, a, b, wvar, tol):
    return _accept(*_quad_raw(g, a, b, wvar, tol), tol)


def w_value(spec: RbfSpec, r: float, *, tol: float = 1e-13) -> float:
    """Kernel value at radius ``r >= 0``; zero for ``r >= 1``.

    The integrand lives on ``t in [r^2, 1]``. Both endpoint factors
    ``(t - r^2)^lam`` and ``(1 - t)^rho`` are quadrature weights. For small
    ``r`` the interval is cut at ``r^2 4^k`` so that ``t^alpha`` and
    ``t^delta`` stay smooth on every piece.

    Raises
    ------
    DomainError
        At ``r = 0`` when ``alpha <= -1``, where ``W(0)`` diverges.
    """
    if not r >= 0:
        raise DomainError(f"radius must be >= 0, got {r}")
    if r >= 1:
        return 0.0
    delta, rho, lam, alpha = spec.delta, spec.rho, spec.lam, spec.alpha
    if r == 0:
        if not spec.finite_at_origin:
            raise DomainError(f"W(0) diverges: need alpha > -1, got alpha={alpha}")
        if rho == 0:
            return 1.0 / (alpha + 1.0)
        return _quad_alg(lambda t: _power_ratio(t, delta) ** rho, 0.0, 1.0, (alpha, rho), tol)[0]
    r2 = r * r
    power = alpha - lam

    def head(t):  # times (t - r^2)^lam
        return t ** power * (-math.expm1(delta * math.log(t))) ** rho

    def body(t):
        return (1.0 - r2 / t) ** lam * t ** alpha * (-math.expm1(delta * math.log(t))) ** rho

    def tail(t):  # times (1 - t)^rho
        return (1.0 - r2 / t) ** lam * t ** alpha * _power_ratio(t, delta) ** rho

    if 4.0 * r2 >= 1.0:
        return _quad_alg(lambda t: t ** power * _power_ratio(t, delta) ** rho, r2, 1.0, (lam, rho), tol)[0]
    edges = [r2]
    while 4.0 * edges[-1] < 1.0:
        edges.append(4.0 * edges[-1])
    share = tol / len(edges)
    total, err = _quad_raw(head, edges[0], edges[1], (lam, 0.0), share)
    for a, b in zip(edges[1:-1], edges[2:]):
        v, e = _quad_raw(body, a, b, None, share)
        total, err = total + v, err + e
    v, e = _quad_raw(tail, edges[-1], 1.0, (0.0, rho), share)
    return _accept(total + v, err + e, tol)[0]


def w_values(spec: RbfSpec, r, *, tol: float = 1e-13, n_jobs: int | None = None) -> np.ndarray:
    """:func:`w_value` over an array, evaluating each distinct radius once."""
    r = np.asarray(r, dtype=float)
    uniq, inverse = np.unique(r, return_inverse=True)
    out = np.zeros(uniq.shape)
    inside = np.flatnonzero(uniq < 1)
    workers = _thread_count(n_jobs)
    if workers > 1 and inside.size > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            out[inside] = list(pool.map(lambda x: w_value(spec, float(x), tol=tol), uniq[inside]))
    else:
        for i in inside:
            out[i] = w_value(spec, float(uniq[i]), tol=tol)
    return out[inverse].reshape(r.shape)


def _hat_prefactor(spec: RbfSpec, s: float) -> float:
    n, lam = spec.n, spec.lam
    power = n + 2 + 2 * spec.delta * spec.rho + 2 * spec.alpha
    log_pref = (n / 2) * math.log(2 * math.pi) + (lam + 1) * math.log(2) + sc.gammaln(lam + 1) - power * math.log(s)
    return math.exp(log_pref)


def w_hat_result(spec: RbfSpec, s: float, *, tol: float = 1e-12) -> EvalResult:
    """Radial Fourier transform ``omega(s)`` with an error estimate.

    ``omega(s) = (2 pi)^(n/2) 2^(lam+1) Gamma(lam+1) s^-(n+2+2 delta rho+2 alpha)
    * I(s)`` where ``I`` is the Bessel moment with
    ``mu = 2 delta``, ``lam' = rho``, ``alpha' = 2 alpha + 1 - lam + n/2`` and
    ``beta' = lam + n/2``, evaluated by :func:`integral_direct`.
    The convention is ``W_hat(xi) = int W(|x|) exp(-i xi.x) dx``.
    """
    if not s > 0:
        raise DomainError(f"frequency must be > 0, got {s}")
    pref = _hat_prefactor(spec, s)
    q = integral_direct(spec.integral_params(), float(s), tol / pref)
    return EvalResult(pref * q.value, pref * q.abs_err_est, q.subdivisions)


def w_hat(spec: RbfSpec, s: float, *, tol: float = 1e-12) -> float:
    """Radial Fourier transform ``omega(s)``; see :func:`w_hat_result`."""
    return w_hat_result(spec, s, tol=tol).value


class SpecialKind(str, enum.Enum):
    """Family members with a closed form or a one-line integral."""

    EXCEPTIONAL_N1 = "exceptional-n1"
    EXCEPTIONAL_N2 = "exceptional-n2"
    WENDLAND = "wendland"
    EUCLID_HAT = "euclid-hat"
    DELTA1_EXCEPTIONAL = "delta1-exceptional"


def _need(name, value):
    if value is None:
        raise DomainError(f"special kernel needs {name}")
    return value


def special_spec(kind, *, n: int | None = None, sigma: float | None = None,
                 alpha: float | None = None, rho: float | None = None) -> RbfSpec:
    """The :class:`RbfSpec` a special kernel belongs to.

    ``EXCEPTIONAL_N1`` and ``EXCEPTIONAL_N2`` take ``delta = 1`` (any value
    gives the same kernel since ``rho = 0``).
    """
    kind = SpecialKind(kind)
    if kind is SpecialKind.EXCEPTIONAL_N1:
        return RbfSpec(1, 1.0, 0.0, 0.0, -0.5)
    if kind is SpecialKind.EXCEPTIONAL_N2:
        return RbfSpec(2, 1.0, 0.0, -0.5, -1.0)
    n = int(_need("n", n))
    if kind is SpecialKind.WENDLAND:
        sigma, alpha = float(_need("sigma", sigma)), float(_need("alpha", alpha))
        if sigma < 0:
            raise DomainError(f"need sigma >= 0, got {sigma}")
        return RbfSpec(n, 0.5, (n + 1) / 2 + sigma, alpha, alpha)
    if kind is SpecialKind.EUCLID_HAT:
        rho = (n - 1) / 2
    else:
        rho = float(_need("rho", rho))
        if not 1 <= n <= math.floor(2 * rho + 3):
            raise DomainError(f"need 1 <= n <= floor(2 rho + 3) = {math.floor(2 * rho + 3)}, got n={n}")
    return RbfSpec(n, 1.0, rho, rho - (n - 1) / 2, rho - n / 2)


def special_w(kind, r: float, *, n: int | None = None, sigma: float | None = None,
              alpha: float | None = None, rho: float | None = None, tol: float = 1e-13) -> float:
    """Closed-form or one-dimensional-integral value of a special kernel.

    Parameters
    ----------
    kind : SpecialKind
        ``EXCEPTIONAL_N1``: ``2 (1 - r)``.
        ``EXCEPTIONAL_N2``: ``2 log((1 + sqrt(1 - r^2)) / r)``.
        ``WENDLAND``: ``2 int_r^1 (t^2 - r^2)^alpha t (1 - t)^((n+1)/2 + sigma) dt``.
        ``EUCLID_HAT``: ``2 int_r^1 (1 - t^2)^((n-1)/2) dt`` via the
        incomplete beta function.
        ``DELTA1_EXCEPTIONAL``: ``2 int_r^1 (t^2 - r^2)^(rho + 1/2 - n/2) (1 - t^2)^rho dt``.
    r : float
        Radius ``>= 0``.
    """
    kind = SpecialKind(kind)
    spec = special_spec(kind, n=n, sigma=sigma, alpha=alpha, rho=rho)
    if not r >= 0:
        raise DomainError(f"radius must be >= 0, got {r}")
    if r >= 1:
        return 0.0
    if kind is SpecialKind.EXCEPTIONAL_N1:
        return 2.0 * (1.0 - r)
    if kind is SpecialKind.EXCEPTIONAL_N2:
        if r == 0:
            raise DomainError("the n = 2 exceptional kernel diverges at r = 0")
        return 2.0 * math.log((1.0 + math.sqrt((1.0 - r) * (1.0 + r))) / r)
    if kind is SpecialKind.EUCLID_HAT:
        b = spec.rho + 1.0
        return float(sc.beta(0.5, b) * sc.betaincc(0.5, b, r * r))
    if not spec.finite_at_origin and r == 0:
        raise DomainError(f"W(0) diverges: need alpha > -1, got alpha={spec.alpha}")
    lam, rh = spec.lam, spec.rho
    if kind is SpecialKind.WENDLAND:
        def g(t):
            return (t + r) ** lam * t
    else:
        def g(t):
            return (t + r) ** lam * (1.0 + t) ** rh
    return 2.0 * _quad_alg(g, r, 1.0, (lam, rh), tol / 2)[0]


def special_w_hat(kind, s: float, *, n: int | None = None, rho: float | None = None) -> float:
    """Closed-form Fourier transform of the exceptional kernels.

    ``EXCEPTIONAL_N1/N2``: ``2 pi^((n-1)/2) Gamma((3-n)/2) sinc^2``;
    ``EUCLID_HAT`` and ``DELTA1_EXCEPTIONAL``:
    ``pi^((n+1)/2) Gamma(rho+1) Gamma((2 rho+3-n)/2) J_(rho+1/2)(s/2)^2 / (s/2)^(2 rho+1)``.
    """
    kind = SpecialKind(kind)
    if kind is SpecialKind.WENDLAND:
        raise DomainError("no closed-form transform for Wendland kernels; use w_hat")
    if not s > 0:
        raise DomainError(f"frequency must be > 0, got {s}")
    spec = special_spec(kind, n=n, rho=rho)
    h = s / 2.0
    if kind in (SpecialKind.EXCEPTIONAL_N1, SpecialKind.EXCEPTIONAL_N2):
        nn = spec.n
        return 2.0 * math.pi ** ((nn - 1) / 2) * math.gamma((3 - nn) / 2) * (math.sin(h) / h) ** 2
    nn, rh = spec.n, spec.rho
    nu = rh + 0.5
    pref = math.pi ** ((nn + 1) / 2) * math.gamma(rh + 1) * math.gamma((2 * rh + 3 - nn) / 2)
    return pref * float(bessel_j(nu, h)) ** 2 / h ** (2 * rh + 1)


_RBF_ORDER = (RegionId.B_n, RegionId.P_n, RegionId.O_n, RegionId.R_n, RegionId.S_n)


def certify_spec(spec: RbfSpec) -> RegionId | None:
    """First region theorem proving the kernel positive definite on ``R^n``.

    ``B_n`` and ``P_n`` need ``0 < delta <= 1/2``, ``rho >= 1``; ``O_n``
    needs ``delta = 1/2``, ``rho >= 1``; ``R_n`` any ``delta``; ``S_n``
    needs ``delta = 1``.
    """
    d, rho = spec.delta, spec.rho
    applies = {
        RegionId.B_n: d <= 0.5 and rho >= 1,
        RegionId.P_n: d <= 0.5 and rho >= 1,
        RegionId.O_n: d == 0.5 and rho >= 1,
        RegionId.R_n: True,
        RegionId.S_n: d == 1,
    }
    for region in _RBF_ORDER:
        if applies[region] and rbf_region_contains(region, spec.n, spec.lam, spec.alpha, rho):
            return region
    return None


def _as_points(pts, spec: RbfSpec | None = None) -> PointSet:
    if not isinstance(pts, PointSet):
        pts = PointSet(np.asarray(pts, dtype=float))
    if spec is not None and pts.dim != spec.n:
        raise DomainError(f"points have dimension {pts.dim}, spec has n={spec.n}")
    return pts


def gram(spec: RbfSpec, pts, *, n_jobs: int | None = None) -> np.ndarray:
    """Symmetric Gram matrix ``G[i, j] = W(|p_i - p_j|)``.

    Distinct distances are evaluated once, optionally on
    ``n_jobs`` threads (default from ``BESSELPOS_THREADS``).
    """
    pts = _as_points(pts, spec)
    if not pts.distinct:
        pts = PointSet(pts.points, distinct=True)
    if not spec.finite_at_origin:
        raise DomainError(f"Gram diagonal W(0) diverges: need alpha > -1, got alpha={spec.alpha}")
    d = squareform(pdist(pts.points)) if len(pts) > 1 else np.zeros((1, 1))
    return w_values(spec, d, n_jobs=n_jobs)


def _check_square_symmetric(G) -> np.ndarray:
    G = np.asarray(G, dtype=float)
    if G.ndim != 2 or G.shape[0] != G.shape[1]:
        raise ValueError(f"matrix must be square, got shape {G.shape}")
    if not np.all(np.isfinite(G)):
        raise ValueError("matrix has non-finite entries")
    if not np.allclose(G, G.T, rtol=1e-12, atol=0.0):
        raise ValueError("matrix is not symmetric")
    return G


def cholesky_pivots(G, tol: float = 1e-13):
    """Unpivoted Cholesky with a relative pivot floor.

    Returns
    -------
    L : ndarray or None
        Lower factor, or ``None`` when some pivot is ``<= tol * max(diag)``.
    pivot : float
        Smallest pivot met (the failing one when ``L`` is ``None``).
    index : int
        Row of that pivot.
    """
    G = _check_square_symmetric(G)
    m = G.shape[0]
    if m == 0:
        return np.zeros((0, 0)), math.inf, -1
    floor = tol * max(float(np.max(np.diag(G))), 0.0)
    L = np.zeros_like(G)
    best, where = math.inf, -1
    for j in range(m):
        piv = G[j, j] - L[j, :j] @ L[j, :j]
        if piv < best:
            best, where = float(piv), j
        if not piv > floor:
            return None, float(piv), j
        L[j, j] = math.sqrt(piv)
        L[j + 1:, j] = (G[j + 1:, j] - L[j + 1:, :j] @ L[j, :j]) / L[j, j]
    return L, best, where


def is_positive_definite(G, tol: float = 1e-13) -> bool:
    """True iff unpivoted Cholesky succeeds with every pivot ``> tol * max(diag)``."""
    return cholesky_pivots(G, tol)[0] is not None


def fit_interpolant(spec: RbfSpec, pts, values, *, tol: float = 1e-13,
                    n_jobs: int | None = None) -> np.ndarray:
    """Coefficients ``c`` with ``sum_i c_i W(|p_j - p_i|) = values_j``.

    Raises
    ------
    NotPositiveDefiniteError
        With the smallest pivot when the Gram matrix fails the Cholesky test.
    PrecisionLossError
        If ``|G c - values|_inf > 1e-8 |values|_inf``.
    """
    pts = _as_points(pts, spec)
    values = np.asarray(values, dtype=float).ravel()
    if values.shape[0] != len(pts):
        raise DomainError(f"{values.shape[0]} values for {len(pts)} points")
    G = gram(spec, pts, n_jobs=n_jobs)
    L, pivot, index = cholesky_pivots(G, tol)
    if L is None:
        raise NotPositiveDefiniteError(
            f"Gram matrix not positive definite: pivot {pivot:.3g} at row {index}", pivot, index
        )
    coef = linalg.cho_solve((L, True), values)
    resid = float(np.max(np.abs(G @ coef - values)))
    bound = 1e-8 * float(np.max(np.abs(values)))
    if resid > bound:
        raise PrecisionLossError(f"interpolation residual {resid:.3g} exceeds {bound:.3g}")
    return coef


def evaluate_interpolant(spec: RbfSpec, centers, coef, x, *, n_jobs: int | None = None) -> np.ndarray:
    """``sum_i coef_i W(|x - centers_i|)`` at each row of ``x``."""
    centers = _as_points(centers, spec)
    x = _as_points(PointSet(x, distinct=False), spec)
    d = cdist(x.points, centers.points)
    return w_values(spec, d, n_jobs=n_jobs) @ np.asarray(coef, dtype=float)
