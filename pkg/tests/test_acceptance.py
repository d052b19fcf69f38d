"""Acceptance suite: one PASS/FAIL line per criterion at its stated tolerance.

Run with ``pytest tests/test_acceptance.py -v`` (lines are printed even
without ``-s``) or directly with ``python tests/test_acceptance.py``.
"""
import math
import random
import sys
import time

import numpy as np
import pytest
from scipy import integrate
from scipy import special as sc

from besselpos import (
    IntegralParams,
    OmegaParams,
    OneF2Params,
    RbfSpec,
    Thm3Class,
    coeff_C,
    cholesky_pivots,
    gram,
    hyper_1f2,
    integral_direct,
    integral_region_contains,
    omega_value,
    rbf_region_contains,
    scan_positivity,
    special_spec,
    special_w,
    special_w_hat,
    thm3_classify,
    w_hat,
    w_value,
)

pytestmark = pytest.mark.acceptance


@pytest.fixture
def report(request):
    """Print one summary line, then fail the test if the criterion failed."""
    capman = request.config.pluginmanager.getplugin("capturemanager")

    def emit(number, title, ok, detail, elapsed, limit):
        ok = ok and elapsed < limit
        line = (f"ACCEPTANCE {number} {'PASS' if ok else 'FAIL'}: {title} | {detail} | "
                f"{elapsed:.2f}s (limit {limit:g}s)")
        if capman is not None:
            with capman.global_and_fixture_disabled():
                print("\n" + line, flush=True)
        else:  # pragma: no cover
            print(line)
        assert ok, line

    return emit


def _dyadic(rnd, lo, hi, grid=256):
    return round(rnd.uniform(lo, hi) * grid) / grid


def _interior_points(count, seed):
    rnd = random.Random(seed)
    out = []
    while len(out) < count:
        a, b, c = _dyadic(rnd, 0, 4), _dyadic(rnd, 0, 3), _dyadic(rnd, -1, 4)
        if a > 0 and b > 0 and c > -1 and thm3_classify(a, b, c) is Thm3Class.INTERIOR:
            out.append((a, b, c))
    return out


# ---------------------------------------------------------------- 1

def test_criterion_1_exceptional_closed_forms(report):
    t0 = time.perf_counter()
    worst1 = max(
        abs(integral_direct(IntegralParams(1, 0, 0.5, 0.5), x).value
            - 2 * math.sqrt(2) / math.sqrt(math.pi) * math.sin(x / 2) ** 2)
        for x in (1.0, math.pi, 2 * math.pi, 10.0)
    )
    worst2 = max(
        abs(integral_direct(IntegralParams(2, 1, 1.5, 1.5), x).value
            - math.sqrt(math.pi) * math.gamma(2) * (2 * x * x) ** 1.5 / 2 * sc.jv(1.5, x / 2) ** 2)
        for x in (1.0, 4.0)
    )
    ok = worst1 <= 1e-9 and worst2 <= 1e-8
    report(1, "exceptional closed forms", ok,
           f"lambda=0 max err {worst1:.2e} (tol 1e-9); mu=2 max err {worst2:.2e} (tol 1e-8)",
           time.perf_counter() - t0, 1)


# ---------------------------------------------------------------- 2

def test_criterion_2_coefficient_routes(report):
    t0 = time.perf_counter()
    rnd = random.Random(2)
    triples, worst, poles = 0, 0.0, 0
    while triples < 100:
        a, b, c = _dyadic(rnd, 0.05, 4), _dyadic(rnd, 0.05, 3), _dyadic(rnd, -0.95, 4)
        if not (a > 0 and b > 0 and c > -1):
            continue
        p = OmegaParams(a, b, c)
        try:
            for n in range(31):
                d = coeff_C(n, p)
                scale = max(1.0, abs(d))
                worst = max(worst, abs(coeff_C(n, p, "gasper") - d) / scale,
                            abs(coeff_C(n, p, "whipple") - d) / scale)
        except ArithmeticError:
            poles += 1
            continue
        triples += 1
    report(2, "C(n, nu) direct / Gasper / Whipple", worst <= 1e-9,
           f"100 triples x n<=30, max scaled diff {worst:.2e} (tol 1e-9), {poles} pole draws skipped",
           time.perf_counter() - t0, 10)


# ---------------------------------------------------------------- 3

def test_criterion_3_omega_routes(report):
    t0 = time.perf_counter()
    worst = 0.0
    for a, b, c in _interior_points(20, seed=3):
        p = OmegaParams(a, b, c)
        for x in (1.0, 5.0, 15.0):
            s = omega_value(p, x).value
            i = omega_value(p, x, "integral").value
            q = omega_value(p, x, "sos", n_terms=60).value
            worst = max(worst, abs(s - i), abs(s - q), abs(i - q))
    report(3, "Omega series / integral / sums of squares", worst <= 1e-7,
           f"20 interior points x 3 radii, max diff {worst:.2e} (tol 1e-7)",
           time.perf_counter() - t0, 30)


# ---------------------------------------------------------------- 4

SAMPLES_PER_SUITE = 5


def _region_samples(region, lam, count, seed):
    rnd = random.Random(seed)
    out = []
    while len(out) < count:
        beta, alpha = rnd.uniform(-1, 4), rnd.uniform(-3, 2)
        if integral_region_contains(region, beta, alpha, lam):
            out.append((beta, alpha))
    return out


def _soundness_suites():
    suites = []
    for beta, alpha in _region_samples("R", None, SAMPLES_PER_SUITE, 41):
        suites += [(mu, lam, alpha, beta) for mu in (0.5, 1, 2, 3) for lam in (0, 1, 2.5)]
    for lam in (0.5, 2):
        suites += [(2, lam, alpha, beta) for beta, alpha in _region_samples("S", lam, SAMPLES_PER_SUITE, 42)]
    for beta, alpha in _region_samples("P", None, SAMPLES_PER_SUITE, 43):
        suites += [(mu, lam, alpha, beta) for mu in (0.3, 1) for lam in (1, 2)]
    for lam in (0.5, 1, 2):
        suites += [(1, lam, alpha, beta) for beta, alpha in _region_samples("O", lam, SAMPLES_PER_SUITE, 44)]
    return suites


def test_criterion_4_region_soundness(report):
    t0 = time.perf_counter()
    suites = _soundness_suites()
    refuted = []
    for mu, lam, alpha, beta in suites:
        v = scan_positivity(IntegralParams(mu, lam, alpha, beta), 50, 0.05, 1e-10, certify=False)
        if v.is_refuted:
            refuted.append(((mu, lam, alpha, beta), v.x, v.value))
    detail = f"{len(suites)} scans to x=50, {len(refuted)} refuted"
    if refuted:
        detail += f"; first {refuted[0]}"
    report(4, "no refutation inside the positivity regions", not refuted, detail,
           time.perf_counter() - t0, 300)


# ---------------------------------------------------------------- 5

def test_criterion_5_necessity_witnesses(report):
    t0 = time.perf_counter()
    rnd = random.Random(5)
    points = []
    while len(points) < 20:
        beta, alpha = rnd.uniform(-0.95, 3), rnd.uniform(-1, 4)
        if alpha + beta + 1 <= 0.05:
            continue
        a, b, c = (alpha + beta + 1) / 2, beta + 1, (alpha + beta + 3) / 2
        if not (b > a and c > a and b + c >= 3 * a + 0.5):
            points.append((alpha, beta))
    missing = []
    last_x = 0.0
    for alpha, beta in points:
        v = scan_positivity(IntegralParams(1, 0, alpha, beta), 100, certify=False)
        if v.is_refuted:
            last_x = max(last_x, v.x)
        else:
            missing.append((alpha, beta))
    detail = f"20 violators, {20 - len(missing)} refuted, latest witness x={last_x:.2f}"
    if missing:
        detail += f"; no witness for {missing[:3]}"
    report(5, "sign change found for necessity violators", not missing, detail,
           time.perf_counter() - t0, 60)


# ---------------------------------------------------------------- 6

def test_criterion_6_squared_bessel_identity(report):
    t0 = time.perf_counter()
    xs = np.arange(1, 81) * 0.5
    worst = 0.0
    for a in (0.3, 0.5, 1.0, 2.5):
        lhs = hyper_1f2(OneF2Params(a, a + 0.5, 2 * a), xs).value
        nu, z = a - 0.5, xs / 2
        rhs = (sc.gamma(nu + 1) * (z / 2) ** (-nu) * sc.jv(nu, z)) ** 2
        worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    report(6, "1F2(a; a+1/2, 2a) equals a squared Bessel function", worst < 1e-9,
           f"4 values of a x 80 grid points, max err {worst:.2e} (tol 1e-9)",
           time.perf_counter() - t0, 5)


# ---------------------------------------------------------------- 7

def _sample_spec(region, n, rnd):
    while True:
        if region == "P_n":
            delta, rho = rnd.uniform(0.1, 0.5), rnd.uniform(1, 3)
        elif region == "O_n":
            delta, rho = 0.5, rnd.uniform(1, 3)
        elif region == "R_n":
            delta, rho = rnd.uniform(0.1, 2), rnd.uniform(0, 3)
        else:
            delta, rho = 1.0, rnd.uniform(0, 3)
        lam, alpha = rnd.uniform(-1, 5), rnd.uniform(-1, 3)
        if lam > -1 and alpha > -1 and rbf_region_contains(region, n, lam, alpha, rho):
            return RbfSpec(n, delta, rho, lam, alpha)


def test_criterion_7_rbf_positive_definite(report):
    t0 = time.perf_counter()
    rnd = random.Random(7)
    rng = np.random.default_rng(7)
    failures, smallest, count = [], math.inf, 0
    cross_specs = []
    for region in ("P_n", "O_n", "R_n", "S_n"):
        for n in (1, 2, 3):
            for _ in range(20):
                spec = _sample_spec(region, n, rnd)
                G = gram(spec, rng.uniform(0, 1, (30, n)))
                L, pivot, _ = cholesky_pivots(G)
                count += 1
                smallest = min(smallest, pivot / np.max(np.diag(G)))
                if L is None:
                    failures.append((region, spec))
                if n == 1 and len(cross_specs) < 8 and rnd.random() < 0.2:
                    cross_specs.append(spec)
    worst = 0.0
    for spec in cross_specs:
        for s in (1.0, 5.0, 10.0):
            direct, _ = integrate.quad(lambda r: w_value(spec, r), 0, 1, weight="cos", wvar=s, epsabs=1e-13)
            worst = max(worst, abs(2 * direct - w_hat(spec, s)))
    ok = not failures and worst <= 1e-6
    detail = (f"{count} Gram matrices, {len(failures)} failed Cholesky, min relative pivot {smallest:.2e}; "
              f"cosine cross-check on {len(cross_specs)} specs max err {worst:.2e} (tol 1e-6)")
    if failures:
        detail += f"; first failure {failures[0]}"
    report(7, "Gram matrices positive definite and transform cross-check", ok, detail,
           time.perf_counter() - t0, 120)


# ---------------------------------------------------------------- 8

def test_criterion_8_exceptional_rbf_pair(report):
    t0 = time.perf_counter()
    radii = (0.05, 0.2, 0.5, 0.7, 0.95)
    freqs = (0.5, 2.0, 5.0, 12.0, 30.0)
    n1, n2 = special_spec("exceptional-n1"), special_spec("exceptional-n2")
    errs = []
    for r in radii:
        errs.append(abs(w_value(n1, r) - 2 * (1 - r)))
        errs.append(abs(w_value(n2, r) - 2 * math.log((1 + math.sqrt(1 - r * r)) / r)))
    for s in freqs:
        h = s / 2
        for spec, n in ((n1, 1), (n2, 2)):
            expected = 2 * math.pi ** ((n - 1) / 2) * math.gamma((3 - n) / 2) * (math.sin(h) / h) ** 2
            errs.append(abs(w_hat(spec, s) - expected))
    for n, rho in ((1, 0.5), (2, 1.0), (3, 1.5)):
        spec = special_spec("delta1-exceptional", n=n, rho=rho)
        for s in freqs:
            h = s / 2
            expected = (math.pi ** ((n + 1) / 2) * math.gamma(rho + 1) * math.gamma((2 * rho + 3 - n) / 2)
                        * sc.jv(rho + 0.5, h) ** 2 / h ** (2 * rho + 1))
            errs.append(abs(w_hat(spec, s) - expected))
            errs.append(abs(special_w_hat("delta1-exceptional", s, n=n, rho=rho) - expected))
        for r in radii:
            errs.append(abs(special_w("delta1-exceptional", r, n=n, rho=rho) - w_value(spec, r)))
    worst = max(errs)
    report(8, "exceptional kernels and transforms", worst <= 1e-8,
           f"{len(errs)} comparisons, max err {worst:.2e} (tol 1e-8)",
           time.perf_counter() - t0, 5)


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
