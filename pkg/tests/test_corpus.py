import cmath
import math

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from maasskit.corpus import (
    HeckeData,
    convolve_exact,
    deconvolve_exact,
    divisor_sigma,
    eisenstein_coeffs,
    eisenstein_residues,
    eisenstein_spec,
    load_hecke,
    mobius,
    moebius_deconvolve,
    sym2_coeffs,
    sym2_local,
)
from maasskit.errors import BadPrimeUnsupported, FormatError, MissingEigenvalue, ParameterError, SanityBoundViolation
from maasskit.lseries import CoeffSeq
from maasskit.specfun import gamma_r, hurwitz_zeta

COEFFS = eisenstein_coeffs(0.25, 1000)


def test_eisenstein_first_coefficients():
    assert COEFFS[0] == 1
    assert COEFFS[5] == pytest.approx((1 + 2 ** 0.5 + 3 ** 0.5 + 6 ** 0.5) * 6 ** -0.25, rel=1e-14)
    assert COEFFS[5] == pytest.approx(COEFFS[1] * COEFFS[2], rel=1e-14)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 31), st.integers(1, 31))
def test_eisenstein_multiplicative(m, n):
    if math.gcd(m, n) == 1:
        assert COEFFS[m * n - 1] == pytest.approx(COEFFS[m - 1] * COEFFS[n - 1], rel=1e-12)


def test_eisenstein_imaginary_order_is_real():
    c = eisenstein_coeffs(0.4j, 200)
    assert np.max(np.abs(c.imag)) < 1e-12


def test_eisenstein_residues_closed_form():
    nu = 0.25
    res = eisenstein_residues(nu)
    zeta = lambda s: hurwitz_zeta(s)  # noqa: E731
    expected = {
        "f_minus_nu": -gamma_r(-2 * nu) * zeta(-2 * nu),
        "f_plus_nu": -gamma_r(2 * nu) * zeta(2 * nu),
        "g_one_plus_nu": gamma_r(1 + 2 * nu) * zeta(1 + 2 * nu),
        "g_one_minus_nu": gamma_r(1 - 2 * nu) * zeta(1 - 2 * nu),
    }
    for key, val in expected.items():
        assert abs(res[key] - val) < 1e-10


def test_eisenstein_spec_limits():
    with pytest.raises(ParameterError):
        eisenstein_spec(0.4, 100)
    with pytest.raises(ParameterError):
        eisenstein_spec(0, 100)
    with pytest.raises(ParameterError):
        eisenstein_spec(0.25, 100, kappa=0.3)


def _hecke(eig, level=1):
    return HeckeData(level, eig)


def test_sym2_local_against_symbolic_expansion():
    X, lam = sympy.symbols("X lam")
    a = sympy.Symbol("a")
    series = sympy.series(1 / ((1 - a ** 2 * X) * (1 - X) * (1 - X / a ** 2)), X, 0, 4).removeO()
    for val in (0.7, 1.3 + 0.2j, -1.9):
        alpha = (val + cmath.sqrt(val * val - 4)) / 2
        local = sym2_local(val, 3)
        for k in range(4):
            coeff = complex(series.coeff(X, k).subs(a, alpha).evalf())
            assert abs(local[k] - coeff) < 1e-12


def test_sym2_coefficients():
    eig = {2: 0.5, 3: -1.1, 5: 0.3, 7: 1.7}
    c = sym2_coeffs(_hecke(eig), 10)
    assert c[1] == 1
    for p, lam in eig.items():
        assert c[p] == pytest.approx(lam * lam - 1)
    assert c[4] == pytest.approx((0.25 - 2) ** 2 + 0.25 - 2)
    assert c[6] == pytest.approx(c[2] * c[3])


def test_sym2_errors():
    with pytest.raises(MissingEigenvalue):
        sym2_coeffs(_hecke({2: 0.5}), 10)
    with pytest.raises(BadPrimeUnsupported):
        sym2_coeffs(_hecke({2: 0.5, 3: 0.1, 5: 0.2, 7: 0.3}, level=3), 10)


def test_deconvolution_examples():
    ones = CoeffSeq.fit(np.ones(200), 0.0)
    a = moebius_deconvolve(ones)
    assert a[1] == 1 and all(a[n] == 0 for n in range(2, 201))
    sig = CoeffSeq.fit(np.array(divisor_sigma(200), dtype=float), 1.5)
    a = moebius_deconvolve(sig)
    assert all(a[n] == n for n in range(1, 201))


def test_deconvolution_roundtrip_exact():
    rng = np.random.default_rng(7)
    c = [int(v) for v in rng.integers(-50, 50, size=1000)]
    a = deconvolve_exact(c)
    assert convolve_exact(a, [1] * 1000) == c


def test_mobius_small():
    assert mobius(12)[1:] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1, -1, 0]


def test_load_hecke(tmp_path):
    p = tmp_path / "h.csv"
    p.write_text("p,lambda_re,lambda_im\n2,0.5,0\n3,-1.1,0\n5,0.3,0.1\n")
    h = load_hecke(p)
    assert h.primes == [2, 3, 5]
    assert len(h.source["sha256"]) == 64
    p.write_text("p,lambda_re,lambda_im\n2,0.5,0\n4,0.1,0\n")
    with pytest.raises(FormatError):
        load_hecke(p)
    p.write_text("p,lambda_re,lambda_im\n2,9,0\n")
    with pytest.raises(SanityBoundViolation):
        load_hecke(p)
    p.write_text("p,lambda_re,lambda_im\n2,0.5,0\n5,0.1,0\n")
    with pytest.raises(FormatError):
        load_hecke(p)
    with pytest.raises(FormatError):
        load_hecke(tmp_path / "missing.csv")
