import math

import mpmath as mp
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special as sc

from besselpos import (
    ConvergenceError,
    DomainError,
    IntegralParams,
    PositivityVerdict,
    RegionId,
    VerdictKind,
    alpha_star,
    bessel_second_zero,
    closed_form_result,
    integral_closed,
    integral_direct,
    kernel_value,
    scan_positivity,
)

mp.mp.dps = 30

# 10^6-point composite Simpson on u = sqrt(t), cross-checked against mpmath
SIMPSON_GOLDEN = 1.0195734290950176
# first refutation of the (mu=1, lam=0, alpha=3/2, beta=-1/2) scan on the default grid
SCAN_WITNESS_X = 2.35
SCAN_WITNESS_VALUE = -0.024535506940770013
# mpmath findroot at 30 digits
ALPHA_STAR_GOLDEN = {
    -0.5: 0.191556220438013996965803049,
    -0.25: 0.2757051826514425657035948562,
    0.0: 0.3545096212448064163936185757,
}


def mp_moment(mu, lam, alpha, beta, x):
    # t = x s^m flattens the t^(alpha+beta) endpoint behaviour
    m = max(1.0, 1.0 / (alpha + beta + 1))
    x = mp.mpf(x)

    def f(s):
        t = x * s ** m
        return (x ** mu - t ** mu) ** lam * t ** alpha * mp.besselj(beta, t) * x * m * s ** (m - 1)

    return float(mp.quad(f, mp.linspace(0, 1, 9)))


# ---------------------------------------------------------------- quadrature

def test_direct_examples():
    r = integral_direct(IntegralParams(1, 0, 0.5, -0.5), math.pi / 2)
    assert r.value == pytest.approx(math.sqrt(2 / math.pi), rel=1e-12)
    assert r.abs_err_est <= 1e-10
    r = integral_direct(IntegralParams(1, 0, 0.5, 0.5), math.pi)
    assert r.value == pytest.approx(2 * math.sqrt(2) / math.sqrt(math.pi), rel=1e-12)
    assert 2 * math.sqrt(2) / math.sqrt(math.pi) == pytest.approx(1.595769, abs=1e-6)


def test_direct_simpson_golden():
    r = integral_direct(IntegralParams(1, 1, 0, -0.5), 1.0)
    assert r.value == pytest.approx(SIMPSON_GOLDEN, abs=1e-12)


def test_direct_accepts_tuple_and_validates():
    assert integral_direct((1, 0, 0.5, -0.5), 1.0).value == pytest.approx(math.sqrt(2 / math.pi) * math.sin(1))
    with pytest.raises(DomainError):
        integral_direct(IntegralParams(1, 0, 0.5, -0.5), -1.0)
    with pytest.raises(DomainError):
        integral_direct(IntegralParams(1, 0, 0.5, -0.5), 1.0, tol=0)


@pytest.mark.parametrize("p", [(1.0, 0.0, -0.95, 0.0), (0.5, 2.0, -1.3, 0.4), (3.0, 0.5, 1.2, 2.5)])
@pytest.mark.parametrize("x", [0.3, 4.0, 27.0])
def test_direct_matches_mpmath(p, x):
    r = integral_direct(IntegralParams(*p), x)
    assert r.value == pytest.approx(mp_moment(*p, x), abs=max(1e-10, 1e-10 * abs(r.value)))


# ---------------------------------------------------------------- closed forms

def test_closed_examples():
    assert integral_closed(IntegralParams(1, 0, 0.5, 0.5), 2 * math.pi) == pytest.approx(0.0, abs=1e-13)
    expected = math.sqrt(math.pi) * 8 ** 1.5 / 2 * sc.jv(1.5, 1.0) ** 2
    p = IntegralParams(2, 1, 1.5, 1.5)
    assert integral_closed(p, 2.0) == pytest.approx(expected, rel=1e-13)
    assert integral_direct(p, 2.0).value == pytest.approx(expected, rel=1e-11)
    assert integral_closed(IntegralParams(1.5, 1, 0, 0), 2.0) is None


def test_closed_mu_one_matches_mpmath():
    p = (1, 1.5, 0.3, 0.2)
    assert integral_closed(IntegralParams(*p), 6.0) == pytest.approx(mp_moment(*p, 6.0), rel=1e-11)


admissible = st.tuples(st.floats(-0.9, 3), st.floats(0, 3)).filter(lambda ba: ba[1] + ba[0] + 1 > 0.05)


@given(
    admissible.map(lambda ba: (ba[0], ba[1] - ba[0] - 1 + 0.05 if ba[1] - ba[0] - 1 + 0.05 > -ba[0] - 1 else ba[1])),
    st.sampled_from([(0.5, 0.0), (1.7, 0.0), (1.0, 0.0), (1.0, 1.5), (2.0, 0.5), (2.0, 2.0)]),
    st.floats(0.05, 40),
)
@settings(max_examples=60)
def test_closed_form_matches_quadrature(ba, mu_lam, x):
    beta, alpha = ba
    mu, lam = mu_lam
    p = IntegralParams(mu, lam, alpha, beta)
    closed = closed_form_result(p, x)
    assert closed is not None
    if closed.precision_loss:
        return
    direct = integral_direct(p, x)
    assert abs(closed.value - direct.value) <= 10 * (closed.abs_err_est + direct.abs_err_est)


# ---------------------------------------------------------------- kernels

def test_kernels():
    for kind in ("Phi", "Psi", "K"):
        assert kernel_value(kind, 0.3, 0.1, 0.0, lam=1.0) == 1.0
    x = 2.7
    got = kernel_value("K", 0.5, 0.5, x)
    ref = float(mp.hyper([1, 1.5], [1.5, 2, 2.5], -mp.mpf(x) ** 2 / 4))
    assert got == pytest.approx(ref, rel=1e-14)
    with pytest.raises(DomainError):
        kernel_value("Psi", 0.0, 0.0, 1.0)
    with pytest.raises(DomainError):
        kernel_value("Phi", -2.0, 0.0, 1.0)


@pytest.mark.parametrize("alpha, beta", [(0.5, 0.5), (-0.3, 0.1), (1.2, 2.0)])
def test_k_kernel_normalizes_linear_weight(alpha, beta):
    # K(x) = int_0^x (x - t) t^alpha J_beta(t) dt is the mu = 1, lam = 1 moment
    x = 4.5
    pref = sc.beta(alpha + beta + 1, 2) * x ** (alpha + beta + 2) / (2 ** beta * sc.gamma(beta + 1))
    direct = integral_direct(IntegralParams(1, 1, alpha, beta), x).value
    assert pref * kernel_value("K", alpha, beta, x) == pytest.approx(direct, rel=1e-10)


def test_psi_kernel_normalizes_mu_two_integral():
    # termwise integration: int_0^x (x^2-t^2)^lam t^(alpha+beta) dt times the leading
    # Bessel coefficient 1 / (2^beta Gamma(beta+1))
    alpha, beta, lam, x = 0.0, 0.0, 1.0, 3.0
    A = (alpha + beta + 1) / 2
    pref = x ** (2 * lam + alpha + beta + 1) * sc.beta(lam + 1, A) / 2 / (2 ** beta * sc.gamma(beta + 1))
    via_kernel = pref * kernel_value("Psi", alpha, beta, x, lam=lam)
    direct = integral_direct(IntegralParams(2, lam, alpha, beta), x).value
    assert via_kernel == pytest.approx(direct, abs=1e-8)
    assert direct == pytest.approx(mp_moment(2, lam, alpha, beta, x), rel=1e-11)


# ---------------------------------------------------------------- scans

def test_scan_certified_first():
    v = scan_positivity(IntegralParams(1, 1, 0, -0.5), 50)
    assert v.kind is VerdictKind.CERTIFIED
    assert v.region is RegionId.R


def test_scan_kuttner_case_without_certificate():
    v = scan_positivity(IntegralParams(1, 1, 0, -0.5), 50, step=0.25, certify=False)
    assert v.kind is VerdictKind.POSITIVE
    assert v.min_value > 0


def test_scan_refutes_with_frozen_witness():
    v = scan_positivity(IntegralParams(1, 0, 1.5, -0.5), 50)
    assert v.is_refuted
    assert v.x == pytest.approx(SCAN_WITNESS_X, abs=1e-12)
    assert v.value == pytest.approx(SCAN_WITNESS_VALUE, rel=1e-10)
    assert v.value + v.err < 0
    x = mp.mpf(v.x)
    ref = mp.sqrt(2 / mp.pi) * (x * mp.sin(x) + mp.cos(x) - 1)
    assert v.value == pytest.approx(float(ref), rel=1e-12)


def test_scan_exceptional_nonnegative():
    v = scan_positivity(IntegralParams(1, 0, 0.5, 0.5), 50, certify=False)
    assert v.kind is VerdictKind.POSITIVE
    # sin^2(x/2) vanishes at 2 pi k, which the 0.05 grid only approaches
    assert 0 <= v.min_value < 1e-4
    assert v.argmin / (2 * math.pi) == pytest.approx(round(v.argmin / (2 * math.pi)), abs=0.01)


def test_scan_parallel_matches_sequential():
    p = IntegralParams(0.5, 1.0, 0.2, 0.4)
    a = scan_positivity(p, 6, step=0.5, certify=False, n_jobs=1)
    b = scan_positivity(p, 6, step=0.5, certify=False, n_jobs=4)
    assert a == b


def test_scan_rejects_bad_grid():
    with pytest.raises(DomainError):
        scan_positivity(IntegralParams(1, 0, 0, 0), 0)


def test_refuted_verdict_requires_resolved_sign():
    with pytest.raises(ValueError):
        PositivityVerdict.refuted(1.0, -1e-12, 1e-11)
    assert PositivityVerdict.refuted(1.0, -1.0, 0.1).to_dict()["kind"] == "Refuted"


@pytest.mark.parametrize("region, mu, lam, beta, alpha", [
    ("R", 0.5, 2.5, 0.3, -0.6),
    ("S", 2.0, 2.0, 2.0, 1.5),
    ("P", 0.3, 1.0, 0.5, 0.9),
    ("O", 1.0, 0.5, 1.0, 0.6),
])
def test_theorem_regions_not_refuted(region, mu, lam, beta, alpha):
    from besselpos import integral_region_contains

    assert integral_region_contains(region, beta, alpha, lam)
    v = scan_positivity(IntegralParams(mu, lam, alpha, beta), 50, step=0.5, certify=False)
    assert not v.is_refuted


@pytest.mark.parametrize("alpha, beta", [(1.0, -0.5), (0.7, 0.5), (2.5, 1.0)])
def test_necessity_violators_refuted(alpha, beta):
    a, b, c = (alpha + beta + 1) / 2, beta + 1, (alpha + beta + 3) / 2
    assert not (b > a and c > a and b + c >= 3 * a + 0.5)
    v = scan_positivity(IntegralParams(1, 0, alpha, beta), 100, certify=False)
    assert v.is_refuted


# ---------------------------------------------------------------- zeros and alpha_*

def test_second_zero_examples():
    assert bessel_second_zero(0.5) == pytest.approx(2 * math.pi, abs=1e-12)
    assert bessel_second_zero(-0.5) == pytest.approx(1.5 * math.pi, abs=1e-12)
    assert bessel_second_zero(0.0) == pytest.approx(5.5200781, abs=1e-7)
    assert bessel_second_zero(0.0) == pytest.approx(float(mp.besseljzero(0, 2)), abs=1e-12)
    with pytest.raises(DomainError):
        bessel_second_zero(-1.0)


@given(st.floats(0, 5))
@settings(max_examples=25)
def test_second_zero_matches_mpmath(beta):
    z = bessel_second_zero(beta)
    assert z == pytest.approx(float(mp.besseljzero(beta, 2)), abs=1e-11)


@given(st.floats(-0.99, 0))
@settings(max_examples=25)
def test_second_zero_negative_order(beta):
    # mpmath's zero finder rejects negative order; check the root and its rank directly
    z = bessel_second_zero(beta)
    assert abs(float(mp.besselj(beta, z))) < 1e-13
    grid = [z * k / 400 for k in range(1, 400)]
    signs = [float(mp.besselj(beta, t)) > 0 for t in grid]
    assert sum(a != b for a, b in zip(signs, signs[1:])) == 1


def test_alpha_star_golden():
    for beta, ref in ALPHA_STAR_GOLDEN.items():
        assert alpha_star(beta) == pytest.approx(ref, abs=1e-9)


def test_alpha_star_defining_property():
    a = alpha_star(0.0)
    z = bessel_second_zero(0.0)
    assert abs(integral_direct(IntegralParams(1, 0, a, 0.0), z).value) < 1e-9
    assert alpha_star(-0.5) > -0.5


def test_alpha_star_domain():
    with pytest.raises(DomainError):
        alpha_star(0.5)
    with pytest.raises(DomainError):
        alpha_star(-1.0)


def test_convergence_error_is_exported():
    assert issubclass(ConvergenceError, Exception)
