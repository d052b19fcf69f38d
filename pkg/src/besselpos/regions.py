"""Membership tests for the parameter regions on which positivity is proved.

Every predicate transcribes its inequalities with the printed strictness and
no tolerance. Use :func:`fuzzy_contains` to probe boundaries with slack.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass

from .exceptions import DomainError, MissingParameterError

__all__ = [
    "RegionId",
    "Thm3Class",
    "IntegralParams",
    "onef2_necessity",
    "newton_contains",
    "integral_region_contains",
    "thm3_classify",
    "corollary1_contains",
    "rbf_region_contains",
    "fuzzy_contains",
    "certifying_region",
]


class RegionId(str, enum.Enum):
    """Named positivity regions.

    ``A, R, S, P, O`` live in the ``(beta, alpha)`` plane of the Bessel
    integral; the ``*_n`` regions live in the ``(lambda, alpha)`` plane of the
    radial basis functions on ``R^n``.
    """

    A = "A"
    R = "R"
    S = "S"
    P = "P"
    O = "O"  # noqa: E741
    B_n = "B_n"
    P_n = "P_n"
    O_n = "O_n"
    R_n = "R_n"
    S_n = "S_n"
    NEWTON = "newton"
    NECESSITY = "necessity"
    THM3 = "thm3"
    COROLLARY1 = "corollary1"

    @property
    def needs_lambda(self) -> bool:
        return self in (RegionId.S, RegionId.O)

    @property
    def needs_rho(self) -> bool:
        return self in (RegionId.O_n, RegionId.S_n)

    @property
    def is_integral_region(self) -> bool:
        return self in _INTEGRAL_REGIONS

    @property
    def is_rbf_region(self) -> bool:
        return self in _RBF_REGIONS


_INTEGRAL_REGIONS = frozenset({RegionId.A, RegionId.R, RegionId.S, RegionId.P, RegionId.O})
_RBF_REGIONS = frozenset({RegionId.B_n, RegionId.P_n, RegionId.O_n, RegionId.R_n, RegionId.S_n})


class Thm3Class(str, enum.Enum):
    INTERIOR = "Interior"
    BOUNDARY_A = "BoundaryA"
    BOUNDARY_C = "BoundaryC"
    NONNEG_ONLY = "NonnegOnly"
    OUTSIDE = "Outside"

    @property
    def positive(self) -> bool:
        return self in (Thm3Class.INTERIOR, Thm3Class.BOUNDARY_A, Thm3Class.BOUNDARY_C)


@dataclass(frozen=True)
class IntegralParams:
    """Parameters of ``int_0^x (x^mu - t^mu)^lam t^alpha J_beta(t) dt``."""

    mu: float
    lam: float
    alpha: float
    beta: float

    def __post_init__(self):
        problems = []
        if not self.mu > 0:
            problems.append(f"mu > 0 (mu={self.mu})")
        if not self.lam >= 0:
            problems.append(f"lambda >= 0 (lambda={self.lam})")
        if not self.beta > -1:
            problems.append(f"beta > -1 (beta={self.beta})")
        if not self.alpha + self.beta + 1 > 0:
            problems.append(f"alpha + beta + 1 > 0 (alpha+beta+1={self.alpha + self.beta + 1})")
        if problems:
            raise DomainError("violated: " + "; ".join(problems))


def _standing(beta: float, alpha: float) -> bool:
    return beta > -1 and alpha + beta + 1 > 0


def onef2_necessity(a: float, b: float, c: float) -> bool:
    """Necessary condition for ``1F2(a; b, c; -x^2/4) >= 0``."""
    return b > a and c > a and b + c >= 3 * a + 0.5


def newton_contains(a: float, b: float, c: float) -> bool:
    """Whether ``(b, c)`` lies in the Newton diagram anchored at
    ``(a + 1/2, 2a)`` and ``(2a, a + 1/2)``.

    Both anchors sit on the line ``b + c = 3a + 1/2``, so the closed hull is
    cut out by two coordinate bounds and that line.
    """
    low = min(a + 0.5, 2 * a)
    return b >= low and c >= low and b + c >= 3 * a + 0.5


def _region_a(beta, alpha):
    return beta > -0.5 and -beta - 1 < alpha <= min(beta, 1.5)


def _region_r(beta, alpha):
    return (beta > -1 and -beta - 1 < alpha <= 0) or (beta > 0 and 0 < alpha <= min(beta, 0.5))


def _region_s(beta, alpha, lam):
    return (beta > -1 and -beta - 1 < alpha <= 0) or (beta > 0 and alpha <= min(beta, lam + 0.5))


def _region_p(beta, alpha):
    return beta > -1 and -beta - 1 < alpha <= min(beta + 1, (beta + 1.5) / 2, 1.5)


def _region_o(beta, alpha, lam):
    if lam < 1:
        return beta > -1 and -beta + 1 - lam < alpha <= min((beta + lam + 0.5) / 2, lam + 0.5)
    return beta > -1 and -beta - 1 < alpha <= min(beta + 1, (beta + lam + 0.5) / 2, lam + 0.5)


def integral_region_contains(region, beta: float, alpha: float, lam: float | None = None) -> bool:
    """Membership of ``(beta, alpha)`` in one of the regions ``A, R, S, P, O``.

    ``S`` and ``O`` depend on ``lam``. Points violating the standing
    convergence assumptions ``beta > -1, alpha + beta + 1 > 0`` are never
    members.
    """
    region = RegionId(region)
    if not region.is_integral_region:
        raise DomainError(f"{region.value} is not a Bessel-integral region")
    if region.needs_lambda and lam is None:
        raise MissingParameterError(f"region {region.value} requires lambda")
    if not _standing(beta, alpha):
        return False
    if region is RegionId.A:
        return _region_a(beta, alpha)
    if region is RegionId.R:
        return _region_r(beta, alpha)
    if region is RegionId.S:
        return _region_s(beta, alpha, lam)
    if region is RegionId.P:
        return _region_p(beta, alpha)
    return _region_o(beta, alpha, lam)


def thm3_classify(a: float, b: float, c: float) -> Thm3Class:
    """Classify ``(a, b, c)`` for positivity of
    ``2F3(a, a+1/2; c+1, a+b, a+b+1/2; -x^2/4)``."""
    if not (a > 0 and b > 0 and c > -1):
        return Thm3Class.OUTSIDE
    interior = (
        c / 2 + 0.75 <= a < min(c + 1, b + c / 2 + 0.25)
        and -b + c / 2 + 1.25 < 2 * a <= b + 1.5 * c + 0.75
    )
    if interior:
        return Thm3Class.INTERIOR
    if a == b + c / 2 + 0.25 and 0.5 < b <= c / 2 + 0.25 and c > 0.5:
        return Thm3Class.BOUNDARY_A
    if c == a - 1:
        if a == 0.5 and b == 1:
            return Thm3Class.NONNEG_ONLY
        if b >= max(1.0, (a + 1.5) / 2):
            return Thm3Class.BOUNDARY_C
    return Thm3Class.OUTSIDE


def corollary1_contains(a: float, c: float) -> bool:
    """The ``b = 1`` specialization of :func:`thm3_classify`, as three cases."""
    if not (a > 0 and c > -1):
        return False
    strip = c / 2 + 0.75 <= a < min(c + 1, c / 2 + 1.25) and c / 2 + 0.25 < 2 * a <= 1.5 * c + 1.75
    edge = a == c / 2 + 1.25 and c >= 1.5
    diagonal = c == a - 1 and 0 < a <= 0.5
    return strip or edge or diagonal


def _b_n(n, lam, alpha):
    if n == 1:
        return lam > -0.5 and -1 < alpha <= min(lam - 0.5, lam / 2)
    if n == 2:
        return lam > -0.5 and -1 < alpha <= min((lam - 0.5) / 2, lam - 0.5)
    if n == 3:
        return lam >= 0 and -1 < alpha <= (lam - 1) / 2
    return lam > (n - 5) / 2 and -1 < alpha <= (lam - (n - 1) / 2) / 2


def _p_n(n, lam, alpha):
    top = min((3 * lam - (n + 1) / 2) / 4, (lam - (n - 1) / 2) / 2)
    return lam > -1 and -(n + 2) / 2 < alpha <= top


def _p_n_simplified(n, lam, alpha):
    # valid for n >= 5, where the second bound is always the smaller one
    return lam > -1 and -(n + 2) / 2 < alpha <= (lam - (n - 1) / 2) / 2


def _o_n(n, lam, alpha, rho):
    top = min(lam, (3 * lam - (n + 3) / 2 + rho) / 4, (lam - (n + 1) / 2 + rho) / 2)
    return lam > -1 and -(n + 2) / 2 < alpha <= top


def _r_n(n, lam, alpha):
    if n == 1:
        low = lam > -1 and -1.5 < alpha <= (lam - 1.5) / 2
        high = lam > -0.5 and (lam - 1.5) / 2 < alpha <= min(lam - 0.5, (lam - 1) / 2)
        return low or high
    return lam > -1 and -(n + 2) / 2 < alpha <= min(lam - 0.5, (lam - (n + 1) / 2) / 2)


def _s_n(n, lam, alpha, rho):
    if n == 1:
        low = lam > -1 and -1.5 < alpha <= (lam - 1.5) / 2
        high = lam > -0.5 and (lam - 1.5) / 2 < alpha <= min(lam - 0.5, (lam - 1 + rho) / 2)
        return low or high
    return lam > -1 and -(n + 2) / 2 < alpha <= min(lam - 0.5, (lam - (n + 1) / 2 + rho) / 2)


def rbf_region_contains(region, n: int, lam: float, alpha: float, rho: float | None = None) -> bool:
    """Membership of ``(lam, alpha)`` in ``B_n, P_n, O_n, R_n`` or ``S_n``.

    Each region certifies positive definiteness of the radial basis function
    on ``R^n`` for its own range of ``(delta, rho)``; see
    :func:`besselpos.rbf.certify_spec`.
    """
    region = RegionId(region)
    if not region.is_rbf_region:
        raise DomainError(f"{region.value} is not a radial-basis-function region")
    if int(n) != n or n < 1:
        raise DomainError(f"dimension n must be an integer >= 1, got {n}")
    n = int(n)
    if region.needs_rho and rho is None:
        raise MissingParameterError(f"region {region.value} requires rho")
    if region is RegionId.B_n:
        return _b_n(n, lam, alpha)
    if region is RegionId.P_n:
        return _p_n(n, lam, alpha)
    if region is RegionId.O_n:
        return _o_n(n, lam, alpha, rho)
    if region is RegionId.R_n:
        return _r_n(n, lam, alpha)
    return _s_n(n, lam, alpha, rho)


def fuzzy_contains(predicate, *args, slack: float = 1e-12, **kwargs) -> str:
    """Classify a point as ``"inside"``, ``"outside"`` or ``"boundary"``.

    The predicate is probed at every corner of the box of half-width
    ``slack`` around the point. Only ``float`` positional arguments are
    perturbed; integers such as a dimension ``n`` stay fixed.
    """
    numeric = [i for i, v in enumerate(args) if isinstance(v, float)]
    votes = set()
    for mask in range(1 << len(numeric)):
        shifted = list(args)
        for bit, i in enumerate(numeric):
            shifted[i] = args[i] + (slack if mask >> bit & 1 else -slack)
        votes.add(bool(predicate(*shifted, **kwargs)))
    if votes == {True}:
        return "inside"
    if votes == {False}:
        return "outside"
    return "boundary"


def certifying_region(mu: float, lam: float, alpha: float, beta: float) -> RegionId | None:
    """First region whose theorem proves strict positivity of the integral.

    Exceptional parameter sets where the integral only stays non-negative are
    never certified.
    """
    if not _standing(beta, alpha):
        return None
    exceptional_r = lam == 0 and alpha == 0.5 and beta == 0.5
    if mu > 0 and lam >= 0 and not exceptional_r and _region_r(beta, alpha):
        return RegionId.R
    if mu == 2 and lam > 0 and not (alpha == beta == lam + 0.5) and _region_s(beta, alpha, lam):
        return RegionId.S
    if mu == 1 and lam > 0 and _region_o(beta, alpha, lam):
        return RegionId.O
    if 0 < mu <= 1 <= lam:
        if _region_p(beta, alpha):
            return RegionId.P
        if _region_a(beta, alpha):
            return RegionId.A
    return None
