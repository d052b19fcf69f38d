"""Gamma-type primitives, Bessel functions and hypergeometric series.

The alternating series ``pFq(...; -x**2/4)`` lose about ``x / ln(10)``
decimal digits to cancellation, so they are summed in double-double
arithmetic. That keeps roughly 15 correct digits up to ``x ~ 40`` and a
usable sign up to ``x ~ 60``; beyond that the cancellation guard flags the
result.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Real
from typing import Sequence

import numpy as np
from scipy import special as sc

from . import _dd, _rational
from .exceptions import DomainError, PoleError, PrecisionLossError

__all__ = [
    "EvalResult",
    "OneF2Params",
    "TwoF3Params",
    "pochhammer",
    "gamma_fn",
    "beta_fn",
    "hyper_pfq",
    "hyper_0f1",
    "hyper_1f2",
    "hyper_2f3",
    "bessel_j",
    "normalized_bessel",
    "terminating_hyper_unit",
    "asymptotic_1f2",
]

MAX_TERMS = 10_000
_RUN_LENGTH = 3
_REL_STOP = 1e-17
_ABS_STOP = 1e-300
# Cancellation guard: a partial sum this much larger than the result leaves
# fewer than ~4 significant digits in double-double.
_LOSS_RATIO = 1e-4 / _dd.EPS


@dataclass(frozen=True)
class EvalResult:
    """Value of a series together with an error estimate.

    ``value`` and ``abs_err_est`` are floats for scalar input and arrays for
    array input. ``precision_loss`` is set when the cancellation guard fired.
    """

    value: float | np.ndarray
    abs_err_est: float | np.ndarray
    terms_used: int
    precision_loss: bool | np.ndarray = False

    def __float__(self) -> float:
        return float(self.value)


@dataclass(frozen=True)
class OneF2Params:
    a: float
    b: float
    c: float

    def __post_init__(self):
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if not v > 0:
                raise DomainError(f"1F2 parameter {name} must be > 0, got {v}")


@dataclass(frozen=True)
class TwoF3Params:
    a1: float
    a2: float
    b1: float
    b2: float
    b3: float

    def __post_init__(self):
        for name in ("b1", "b2", "b3"):
            v = getattr(self, name)
            if not v > 0:
                raise DomainError(f"2F3 denominator {name} must be > 0, got {v}")


def pochhammer(alpha, k: int):
    """Rising factorial ``alpha (alpha+1) ... (alpha+k-1)``; ``(alpha)_0 = 1``.

    Works for floats, ints and :class:`fractions.Fraction` (exactly).
    """
    if k < 0:
        raise DomainError(f"Pochhammer index must be >= 0, got {k}")
    out = 1 if isinstance(alpha, (int, Fraction)) else 1.0
    for j in range(k):
        out *= alpha + j
    return out


def gamma_fn(x):
    """Gamma function, with reflection for negative non-integers.

    Raises :class:`PoleError` at non-positive integers.
    """
    if isinstance(x, Real) and x <= 0 and float(x) == math.floor(x):
        raise PoleError(f"gamma has a pole at {x}")
    return float(sc.gamma(float(x)))


def beta_fn(p: float, q: float) -> float:
    """Euler's beta function ``B(p, q) = Gamma(p) Gamma(q) / Gamma(p + q)``."""
    if not (p > 0 and q > 0):
        raise DomainError(f"beta requires p > 0 and q > 0, got p={p}, q={q}")
    return float(sc.beta(p, q))


def _check_denominators(denominators):
    for b in denominators:
        if b <= 0 and float(b) == math.floor(b):
            raise PoleError(f"denominator parameter {b} is a non-positive integer")


def _ratio_dd(numerators, denominators, k):
    """Double-double value of prod(a_i + k) / (prod(b_j + k) * (k + 1))."""
    nh, nl = 1.0, 0.0
    for a in numerators:
        sh, sl = _dd.two_sum(float(a), float(k))
        nh, nl = _dd.mul(nh, nl, sh, sl)
    dh, dl = float(k + 1), 0.0
    for b in denominators:
        sh, sl = _dd.two_sum(float(b), float(k))
        dh, dl = _dd.mul(dh, dl, sh, sl)
    if nh == 0.0:
        return 0.0, 0.0
    return _dd.div(nh, nl, dh, dl)


def _series_scalar(numerators, denominators, x, max_terms):
    x = float(x)
    zh, zl = _dd.two_prod(x, x)
    zh, zl = -0.25 * zh, -0.25 * zl
    th, tl = 1.0, 0.0
    sh, sl = 1.0, 0.0
    sum_abs = 1.0
    peak = 1.0
    run = 0
    k = 0
    while k < max_terms:
        rh, rl = _ratio_dd(numerators, denominators, k)
        th, tl = _dd.mul(th, tl, rh, rl)
        th, tl = _dd.mul(th, tl, zh, zl)
        sh, sl = _dd.add(sh, sl, th, tl)
        k += 1
        at = abs(th)
        sum_abs += at
        if abs(sh) > peak:
            peak = abs(sh)
        if at < _REL_STOP * abs(sh) + _ABS_STOP:
            run += 1
            if run >= _RUN_LENGTH:
                break
        else:
            run = 0
    value = sh + sl
    err = 8.0 * (k + 1) * _dd.EPS * sum_abs + abs(th) + 2.0 ** -53 * abs(value)
    loss = peak > _LOSS_RATIO * abs(value)
    if loss:
        err = max(err, peak * _dd.EPS * 1e4)
    return value, err, k + 1, loss


def _series_array(numerators, denominators, x, max_terms):
    x = np.asarray(x, dtype=float)
    zh, zl = _dd.two_prod(x, x)
    zh, zl = -0.25 * zh, -0.25 * zl
    th = np.ones_like(x)
    tl = np.zeros_like(x)
    sh = np.ones_like(x)
    sl = np.zeros_like(x)
    sum_abs = np.ones_like(x)
    peak = np.ones_like(x)
    run = np.zeros(x.shape, dtype=int)
    k = 0
    while k < max_terms:
        rh, rl = _ratio_dd(numerators, denominators, k)
        th, tl = _dd.mul(th, tl, rh, rl)
        th, tl = _dd.mul(th, tl, zh, zl)
        sh, sl = _dd.add(sh, sl, th, tl)
        k += 1
        at = np.abs(th)
        sum_abs += at
        np.maximum(peak, np.abs(sh), out=peak)
        small = at < _REL_STOP * np.abs(sh) + _ABS_STOP
        run = np.where(small, run + 1, 0)
        if np.all(run >= _RUN_LENGTH):
            break
    value = sh + sl
    err = 8.0 * (k + 1) * _dd.EPS * sum_abs + np.abs(th) + 2.0 ** -53 * np.abs(value)
    loss = peak > _LOSS_RATIO * np.abs(value)
    err = np.where(loss, np.maximum(err, peak * _dd.EPS * 1e4), err)
    return value, err, k + 1, loss


def hyper_pfq(
    numerators: Sequence[float],
    denominators: Sequence[float],
    x,
    *,
    max_terms: int = MAX_TERMS,
    strict: bool = False,
) -> EvalResult:
    """Evaluate ``pFq(numerators; denominators; -x**2/4)`` by its power series.

    Parameters
    ----------
    numerators, denominators : sequence of float
        Pochhammer parameters. Denominators must avoid non-positive integers.
    x : float or array_like
        Argument; the series variable is ``-x**2/4``.
    max_terms : int
        Hard cap on the number of terms.
    strict : bool
        Raise :class:`PrecisionLossError` instead of flagging it.

    Returns
    -------
    EvalResult
    """
    _check_denominators(denominators)
    if np.ndim(x) == 0:
        value, err, used, loss = _series_scalar(numerators, denominators, x, max_terms)
        value, err, loss = float(value), float(err), bool(loss)
    else:
        value, err, used, loss = _series_array(numerators, denominators, x, max_terms)
    if strict and np.any(loss):
        raise PrecisionLossError(
            f"cancellation in {len(numerators)}F{len(denominators)} series exceeded "
            "the working precision"
        )
    return EvalResult(value, err, used, loss)


def hyper_0f1(c: float, x, **kw) -> EvalResult:
    """``0F1(c; -x**2/4)``, the normalized Bessel function of order ``c - 1``."""
    if not c > 0:
        raise DomainError(f"0F1 parameter must be > 0, got {c}")
    return hyper_pfq((), (c,), x, **kw)


def hyper_1f2(p: OneF2Params, x, **kw) -> EvalResult:
    """``1F2(a; b, c; -x**2/4)``."""
    return hyper_pfq((p.a,), (p.b, p.c), x, **kw)


def hyper_2f3(p: TwoF3Params, x, **kw) -> EvalResult:
    """``2F3(a1, a2; b1, b2, b3; -x**2/4)``."""
    return hyper_pfq((p.a1, p.a2), (p.b1, p.b2, p.b3), x, **kw)


def normalized_bessel(nu: float, x):
    """``Gamma(nu+1) (x/2)**(-nu) J_nu(x) = 0F1(nu+1; -x**2/4)`` as a float/array."""
    if not nu > -1:
        raise DomainError(f"Bessel order must be > -1, got {nu}")
    return hyper_pfq((), (nu + 1.0,), x).value


def bessel_j(nu: float, x, *, strict: bool = False):
    """Bessel function of the first kind via ``(x/2)**nu 0F1(nu+1; -x**2/4) / Gamma(nu+1)``.

    Accepts scalar or array ``x >= 0``. For ``nu < 0`` the value at ``x = 0``
    is ``inf``.
    """
    if not nu > -1:
        raise DomainError(f"Bessel order must be > -1, got {nu}")
    if np.any(np.asarray(x) < 0):
        raise DomainError("bessel_j is defined here for x >= 0")
    series = hyper_pfq((), (nu + 1.0,), x, strict=strict).value
    with np.errstate(divide="ignore"):
        scale = np.power(np.asarray(x, dtype=float) / 2.0, nu) / sc.gamma(nu + 1.0)
    out = scale * series
    return float(out) if np.ndim(out) == 0 else out


def terminating_hyper_unit(numerators, denominators, *, exact: bool = False):
    """Terminating ``pFq(-n, ...; ...; 1)`` summed in exact rational arithmetic.

    The first numerator must be ``-n`` for an integer ``n >= 0``. Float
    parameters are converted to the rationals they represent, so the only
    rounding is the final conversion. Pass ``exact=True`` to get the
    :class:`~fractions.Fraction` itself.

    Raises
    ------
    PoleError
        If a denominator Pochhammer symbol vanishes for some ``k <= n``.
    """
    num = [Fraction(p) for p in numerators]
    den = [Fraction(q) for q in denominators]
    if not num or num[0].denominator != 1 or num[0] > 0:
        raise DomainError("first numerator must be -n with n a non-negative integer")
    n = -int(num[0])
    for q in den:
        if q.denominator == 1 and q <= 0 and -q < n:
            raise PoleError(f"denominator {q} vanishes before the series terminates")
    pair = _rational.terminating_pair(num, den)
    return _rational.to_fraction(pair) if exact else _rational.to_float(pair)


def asymptotic_1f2(p: OneF2Params, x: float) -> float:
    """Two-term large-``x`` expansion of ``1F2(a; b, c; -x**2/4)``.

    ``G(b)G(c)/(G(b-a)G(c-a)) (x/2)**(-2a)
    + G(b)G(c)/(sqrt(pi) G(a)) (x/2)**(-sigma) cos(x - pi sigma / 2)``
    with ``sigma = b + c - a - 1/2``. Relative corrections are ``O(x**-1)``.
    """
    a, b, c = p.a, p.b, p.c
    if not x > 0:
        raise DomainError(f"asymptotic expansion needs x > 0, got {x}")
    for d in (b - a, c - a):
        if d <= 0 and d == math.floor(d):
            raise PoleError(f"gamma pole at b-a or c-a = {d}")
    sigma = b + c - a - 0.5
    gbc = sc.gamma(b) * sc.gamma(c)
    half = x / 2.0
    algebraic = gbc / (sc.gamma(b - a) * sc.gamma(c - a)) * half ** (-2.0 * a)
    oscillatory = gbc / (math.sqrt(math.pi) * sc.gamma(a)) * half ** (-sigma) * math.cos(
        x - math.pi * sigma / 2.0
    )
    return float(algebraic + oscillatory)
