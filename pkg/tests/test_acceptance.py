"""Acceptance criteria, one test each, at the stated tolerances and time limits.

Every criterion records a one-line verdict; the lines are printed in the
terminal summary (see conftest.py) and also when this file is run directly.
"""
import math
import random
import time
from fractions import Fraction

import numpy as np
import pytest

from maasskit.characters import character_group, cos_sin_decomposition_residual, gauss_sum, primitive_characters
from maasskit.cli import DEFAULT_POINTS, parse_points
from maasskit.corpus import convolve_exact, deconvolve_exact, divisor_sigma, eisenstein_spec, moebius_deconvolve
from maasskit.hyperbolic import (
    act,
    admissible_from_gamma,
    build_m,
    classify,
    default_pair,
    fixed_point,
    orbit_max_gap,
    sample_family,
    two_circles_test,
)
from maasskit.lseries import (
    CoeffSeq,
    circle_integral_residual,
    eisenstein_fe_residual,
    mellin_identity_reports,
    mellin_kcos,
    mellin_kcos_quadrature,
)
from maasskit.maassform import difference_identity_residual, involution_residual, twist_transform_residual
from maasskit.quotient import quotient_fe_epsilon_residual, quotient_gamma_residual
from maasskit.specfun import bessel_k, hyp2f1
from test_hyperbolic import random_admissible

RESULTS = []


def record(name, ok, detail, seconds):
    RESULTS.append(f"{name:5s} {'PASS' if ok else 'FAIL'}  {detail}  ({seconds:.2f} s)")
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def eisenstein():
    return {0.25: eisenstein_spec(0.25, 2000), 0.4j: eisenstein_spec(0.4j, 2000)}


def test_sf1_euler_identity():
    t0 = time.perf_counter()
    rng = random.Random(1)
    worst = 0.0
    for _ in range(100):
        a = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        b = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        c = complex(rng.uniform(0.5, 3), rng.uniform(-2, 2))
        z = 0.8 * math.sqrt(rng.random()) * complex(math.cos(t := 2 * math.pi * rng.random()), math.sin(t))
        lhs = hyp2f1(a, b, c, z)
        rhs = (1 - z) ** (c - a - b) * hyp2f1(c - a, c - b, c, z)
        worst = max(worst, abs(lhs - rhs) / abs(rhs))
    dt = time.perf_counter() - t0
    record("SF-1", worst < 1e-10 and dt < 5, f"max rel residual {worst:.2e} < 1e-10, 100 draws |z| <= 0.8", dt)


def test_sf2_continuation_vs_pfaff():
    t0 = time.perf_counter()
    worst = 0.0
    for nu, s, shift in ((0.25, 1.2 + 0.7j, 0), (0.4j, 2.5 - 3j, 1), (0.1, 0.6, 0)):
        a, b, c = (s + nu + shift) / 2, (s - nu + shift) / 2, 0.5 + shift
        for w in np.linspace(1.05, 5, 20):
            cont = hyp2f1(a, b, c, -w * w, method="continuation")
            pfaff = hyp2f1(a, b, c, -w * w, method="pfaff")
            worst = max(worst, abs(cont - pfaff) / abs(pfaff))
    dt = time.perf_counter() - t0
    record("SF-2", worst < 1e-8 and dt < 5, f"max rel disagreement {worst:.2e} < 1e-8, z = -w^2, w in [1.05, 5]", dt)


def test_sf3_bessel():
    t0 = time.perf_counter()
    u = np.linspace(0.1, 20, 50)
    exact = np.sqrt(np.pi / (2 * u)) * np.exp(-u)
    closed = float(np.max(np.abs(bessel_k(0.5, u) - exact) / exact))
    rng = random.Random(3)
    sym = 0.0
    for i in range(100):
        nu = rng.uniform(0, 0.49) if i % 2 else 1j * rng.uniform(0, 10)
        x = rng.uniform(0.05, 40)
        sym = max(sym, abs(bessel_k(nu, x) - bessel_k(-nu, x)) / abs(bessel_k(0.5, x)))
    dt = time.perf_counter() - t0
    record("SF-3", closed < 1e-10 and sym < 1e-10,
           f"K_1/2 rel err {closed:.2e}, K_nu - K_-nu {sym:.2e} (both < 1e-10)", dt)


def test_ch1_gauss_sums_and_decomposition():
    t0 = time.perf_counter()
    gauss = max(abs(abs(gauss_sum(psi)) - math.sqrt(q)) for q in range(2, 51) for psi in primitive_characters(q))
    dec = max(cos_sin_decomposition_residual(n, a, q, kind)
              for q in (3, 5, 7, 11, 13) for n in range(1, 201) for a in range(1, q) for kind in ("cos", "sin"))
    dt = time.perf_counter() - t0
    record("CH-1", gauss < 1e-10 and dec < 1e-12, f"||tau| - sqrt q| {gauss:.2e} < 1e-10, decomposition {dec:.2e} < 1e-12", dt)


def test_ml1_mellin_identity(eisenstein):
    t0 = time.perf_counter()
    pairs = [(w, alpha) for w in (0.0, 0.5) for alpha in (Fraction(0), Fraction(1, 5))]
    grid = [2.5 + 1j * t for t in np.linspace(-5, 5, 11)]
    reports = mellin_identity_reports(eisenstein[0.25], pairs, grid, tol=1e-6)
    worst = max(r.max_residual for r in reports)
    dt = time.perf_counter() - t0
    ok = all(r.passed for r in reports) and dt < 60
    record("ML-1", ok, f"max residual {worst:.2e} < 1e-6 over 4 (w, alpha) x 11 s", dt)


def test_ml2_kernel_closed_form():
    t0 = time.perf_counter()
    rng = random.Random(8)
    worst = 0.0
    for _ in range(20):
        nu = rng.uniform(0, 0.34) if rng.random() < 0.5 else 1j * rng.uniform(0, 5)
        eps, k = rng.randint(0, 1), rng.randint(0, 3)
        w = rng.uniform(0.05, 3)
        s = complex(rng.uniform(0.6, 3), rng.uniform(-5, 5))
        closed = mellin_kcos(nu, eps, k, w, s)
        quad = mellin_kcos_quadrature(nu, k, w, s)
        worst = max(worst, abs(closed - quad) / max(1.0, abs(quad)))
    dt = time.perf_counter() - t0
    record("ML-2", worst < 1e-7, f"closed form vs quadrature {worst:.2e} < 1e-7, 20 draws", dt)


def test_tr1_involution(eisenstein):
    t0 = time.perf_counter()
    pts = parse_points(DEFAULT_POINTS["involution"])
    assert len(pts) == 10 and min(p.imag for p in pts) >= 0.5
    reports = [involution_residual(spec, pts, tol=1e-7) for spec in eisenstein.values()]
    worst = max(r.max_residual for r in reports)
    dt = time.perf_counter() - t0
    record("TR-1", all(r.passed for r in reports) and dt < 30, f"max residual {worst:.2e} < 1e-7, nu in {{0.25, 0.4i}}", dt)


def test_tr2_twists_and_differences(eisenstein):
    t0 = time.perf_counter()
    spec = eisenstein[0.25]
    pts = parse_points(DEFAULT_POINTS["twist-transform"])
    reports = []
    for q in (5, 7):
        for psi in character_group(q).characters()[1:]:
            reports.append(twist_transform_residual(spec, psi, pts, tol=1e-6))
    twist = max(r.max_residual for r in reports)
    diffs = [difference_identity_residual(spec, q, a, b, pts, tol=1e-6) for q, a, b in ((5, 1, 2), (5, 2, 4), (7, 1, 2), (7, 3, 5))]
    diff = max(r.max_residual for r in diffs)
    dt = time.perf_counter() - t0
    ok = all(r.passed for r in reports + diffs) and dt < 180
    record("TR-2", ok, f"twist {twist:.2e}, difference {diff:.2e} (both < 1e-6), {len(reports)} characters", dt)


def test_fe1_twisted_functional_equation():
    t0 = time.perf_counter()
    grid = [0.5 + 1j * t for t in np.linspace(-10, 10, 21)]
    reports = [eisenstein_fe_residual(nu, psi, grid, tol=1e-7)
               for nu in (0.25, 0.4j) for q in (5, 7) for psi in primitive_characters(q)]
    worst = max(r.max_residual for r in reports)
    dt = time.perf_counter() - t0
    record("FE-1", all(r.passed for r in reports), f"max rel residual {worst:.2e} < 1e-7, {len(reports)} (nu, psi) pairs", dt)


def test_ci1_circle_integral(eisenstein):
    t0 = time.perf_counter()
    reports = [circle_integral_residual(eisenstein[0.25], z, tol=1e-7) for z in (1j, 2j, 0.5 + 1j)]
    worst = max(r.max_residual for r in reports)
    dt = time.perf_counter() - t0
    record("CI-1", all(r.passed for r in reports), f"max residual {worst:.2e} < 1e-7 at i, 2i, 1/2+i", dt)


def test_hy1_elliptic_matrices():
    t0 = time.perf_counter()
    rng = random.Random(21)
    ok = True
    worst = 0.0
    distinct = 0
    for _ in range(100):
        q, s, r, rt, N, (a, b, c, d, u, v) = random_admissible(rng)
        m = build_m(q, s, r, rt, N)
        ok &= m.det == 1 and abs(m.trace) < 2
        z = fixed_point(m)
        worst = max(worst, abs(act(m, z) - z))
        q2, s2, r2, rt2 = admissible_from_gamma(a, b, c, d, N, u + 1, v)
        if q2 != q and q2 * s2 >= 2:
            z2 = fixed_point(build_m(q2, s2, r2, rt2, N))
            ok &= abs(z2.real - z.real) > 1e-9
            distinct += 1
    dt = time.perf_counter() - t0
    ok = ok and worst < 1e-12 and distinct >= 20
    record("HY-1", ok, f"det = 1 and |tr| < 2 exact, |Mz - z| {worst:.2e} < 1e-12, {distinct} q != q' pairs distinct", dt)


def test_hy2_two_circles():
    t0 = time.perf_counter()
    m1, m2 = default_pair()
    z1 = fixed_point(m1)
    const = two_circles_test(sample_family("constant"), m1, m2).verdict
    radial = two_circles_test(sample_family("radial", z1), m1, m2).verdict
    gap = orbit_max_gap(classify(build_m(3, 5, 2, 7, 1)).rotation_angle, 10 ** 4)
    dt = time.perf_counter() - t0
    ok = const == "consistent with constant" and radial == "not invariant under m2" and gap < 0.01 and dt < 20
    record("HY-2", ok, f"constant: {const}; radial: {radial}; orbit gap {gap:.2e} < 0.01", dt)


def test_qt1_deconvolution_and_epsilon():
    t0 = time.perf_counter()
    rng = np.random.default_rng(12)
    c = [int(x) for x in rng.integers(-100, 100, size=1000)]
    roundtrip = convolve_exact(deconvolve_exact(c), [1] * 1000) == c
    ident = list(moebius_deconvolve(CoeffSeq.fit(np.array(divisor_sigma(1000), dtype=float), 1.5)).values) == list(range(1, 1001))
    delta = list(moebius_deconvolve(CoeffSeq.fit(np.ones(1000), 0.0)).values) == [1] + [0] * 999
    grid = [0.7, 0.3 + 1j, 0.5, -0.2 + 2j, 1.5 - 0.5j]
    reps = [quotient_fe_epsilon_residual(psi, M, grid, tol=1e-12)
            for q in (5, 7) for psi in primitive_characters(q) for M in (1, 4)]
    parities = {psi.parity for q in (5, 7) for psi in primitive_characters(q)}
    worst = max(r.max_residual for r in reps)
    dt = time.perf_counter() - t0
    ok = roundtrip and ident and delta and all(r.passed for r in reps) and parities == {0, 1}
    record("QT-1", ok, f"roundtrip/sigma/ones exact: {roundtrip and ident and delta}; eps-factor {worst:.2e} < 1e-12", dt)


def test_qt2_quotient_gamma():
    t0 = time.perf_counter()
    grid = [1.5 + 1j * t for t in np.linspace(-5, 5, 11)]
    even = quotient_gamma_residual(0, 0.25, grid, tol=1e-10)
    odd = quotient_gamma_residual(1, 0.25, grid, tol=1e-10)
    one = max(abs(v - 1) for v in even.lhs)
    dt = time.perf_counter() - t0
    ok = even.passed and odd.passed and one < 1e-10
    record("QT-2", ok, f"eps=0 |ratio - 1| {one:.2e}; eps=1 spread {odd.max_residual:.2e}, constant {odd.extra['constant'].real:.6f}", dt)


if __name__ == "__main__":
    import sys

    sys.exit(pytest.main([__file__, "-q"]))
