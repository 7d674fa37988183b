import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from maasskit.characters import character_group, primitive_characters, trivial_character
from maasskit.corpus import eisenstein_coeffs
from maasskit.errors import (
    ConvergenceError,
    InsufficientCoefficients,
    PoleError,
    PoleOnContour,
    PreconditionError,
    SingularSystem,
    ValidationError,
)
from maasskit.lseries import (
    CoeffSeq,
    GammaFactor,
    Twist,
    additive_fe_residual,
    circle_integral_residual,
    completed_lambda,
    continued_lambda_eisenstein,
    dirichlet_sum,
    eisenstein_fe_residual,
    gamma_factor,
    mellin_identity_coefficient,
    mellin_identity_residual,
    mellin_kcos,
    mellin_kcos_quadrature,
    vandermonde_coeffs,
)
from maasskit.maassform import MaassSpec
from maasskit.specfun import Precision, gamma_r, hurwitz_zeta

# oracles computed with mpmath at 25 digits
LAMBDA_EIS_AT_3 = 0.03754689910392136831550662  # Gamma_R(3.25)Gamma_R(2.75)zeta(3.25)zeta(2.75)
ZETA_225_TIMES_ZETA_175 = 2.865403094420468807827473
MELLIN_K_COS = 2.015199151862935076439041  # 4 int K_.25(2y) cos(y) y^0.2 dy


def test_coeffseq_bound_is_enforced():
    with pytest.raises(ValidationError):
        CoeffSeq(np.array([1.0, 5.0]), 0.0, 1.0)
    seq = CoeffSeq.fit(np.arange(1, 11), 1.0)
    assert seq[3] == 3
    assert seq.truncated(4).exact and len(seq.truncated(4)) == 4


def test_zeta_two():
    ones = CoeffSeq(np.ones(10 ** 6), 0.0, 1.0)
    val = dirichlet_sum(ones, Twist.none(), 2, Precision(abs_tol=1e-5))
    assert val.tail_bound < 1e-5
    assert abs(val.value - math.pi ** 2 / 6) <= val.tail_bound


def test_eisenstein_sum_factorises():
    with pytest.raises(InsufficientCoefficients):
        dirichlet_sum(CoeffSeq.fit(eisenstein_coeffs(0.25, 2000), 0.45), Twist.none(), 2)
    seq = CoeffSeq.fit(eisenstein_coeffs(0.25, 20000), 0.45)
    val = dirichlet_sum(seq, Twist.none(), 2, Precision(abs_tol=0.05))
    oracle = (hurwitz_zeta(2.25) * hurwitz_zeta(1.75)).real
    assert oracle == pytest.approx(ZETA_225_TIMES_ZETA_175, rel=1e-12)
    assert abs(val.value - oracle) <= val.tail_bound


def test_convergence_region():
    seq = CoeffSeq.fit(np.ones(100), 0.0)
    with pytest.raises(ConvergenceError):
        dirichlet_sum(seq, Twist.none(), 1.1)


def test_sine_twist_at_zero_vanishes():
    seq = CoeffSeq.fit(eisenstein_coeffs(0.25, 500), 0.45).truncated()
    assert dirichlet_sum(seq, Twist.additive(0, 1), 2.3).value == 0


def test_gamma_factor_cases():
    assert gamma_factor(GammaFactor.of(0, 0, 0.25), 2) == pytest.approx(gamma_r(2.25) * gamma_r(1.75), rel=1e-14)
    for k, eps in ((0, 1), (1, 1), (2, 0)):
        shift = (k + eps) % 2
        assert gamma_factor(GammaFactor.of(k, eps, 0), 1.3) == pytest.approx(gamma_r(1.3 + shift) ** 2, rel=1e-14)
    with pytest.raises(PoleError):
        gamma_factor(GammaFactor.of(0, 0, 0.25), -0.25)


def test_completed_lambda_untwisted():
    seq = CoeffSeq.fit(eisenstein_coeffs(0.25, 2000), 0.45)
    val = completed_lambda(seq, Twist.none(), 0, 0.25, 3, Precision(abs_tol=1e-4))
    assert abs(val.value - LAMBDA_EIS_AT_3) <= val.tail_bound + 1e-15
    exact = continued_lambda_eisenstein(trivial_character(1), 0.25, 3)
    assert exact == pytest.approx(LAMBDA_EIS_AT_3, rel=1e-12)


def test_additive_twist_odd_at_zero():
    seq = CoeffSeq.fit(eisenstein_coeffs(0.25, 500), 0.45).truncated()
    assert completed_lambda(seq, Twist.additive(0, 1), 0, 0.25, 2.5).value == 0


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_additive_twist_assembly(k):
    seq = CoeffSeq.fit(eisenstein_coeffs(0.25, 2000), 0.45).truncated()
    tw = Twist.additive(Fraction(1, 5), k)
    direct = completed_lambda(seq, tw, 0, 0.25, 2.5).value
    assembled = completed_lambda(seq, tw, 0, 0.25, 2.5, assemble=True).value
    assert abs(direct - assembled) < 1e-8 * max(1, abs(direct))


def test_assembly_needs_prime_denominator():
    seq = CoeffSeq.fit(np.ones(10), 0.0).truncated()
    with pytest.raises(PreconditionError):
        completed_lambda(seq, Twist.additive(Fraction(1, 9), 0), 0, 0.25, 2.5, assemble=True)


def test_continued_lambda():
    with pytest.raises(PoleError):
        continued_lambda_eisenstein(trivial_character(1), 0.25, 1.25)
    psi = primitive_characters(5)[0]
    seq = CoeffSeq.fit(eisenstein_coeffs(0.25, 2000), 0.45).truncated()
    direct = completed_lambda(seq, Twist.multiplicative(psi), 0, 0.25, 4).value
    assert abs(continued_lambda_eisenstein(psi, 0.25, 4) - direct) < 1e-9


def test_mellin_kcos_special_cases():
    assert mellin_kcos(0.25, 0, 1, 0.0, 1.7) == 0
    s = 1.7 + 0.4j
    ref = math.pi ** s * gamma_r(s + 0.25) * gamma_r(s - 0.25)
    assert abs(mellin_kcos(0.25, 0, 0, 0.0, s) - ref) < 1e-13 * abs(ref)


def test_mellin_kcos_against_oracle():
    assert mellin_kcos(0.25, 0, 0, 0.5, 1.2) == pytest.approx(MELLIN_K_COS, rel=1e-7)
    assert mellin_kcos_quadrature(0.25, 0, 0.5, 1.2) == pytest.approx(MELLIN_K_COS, rel=1e-9)


def test_mellin_kcos_odd_k_against_mpmath():
    nu, w, s = 0.3, 0.8, 1.5
    for k in (1, 3):
        oracle = 4 * mpmath.quad(lambda y: mpmath.besselk(nu, 2 * y) * (-mpmath.sin(2 * w * y) if k == 1 else mpmath.sin(2 * w * y)) * y ** (s - 1), [0, 1, 5, 20, 50])
        assert mellin_kcos(nu, 0, k, w, s) == pytest.approx(complex(oracle), rel=1e-9)
    # the printed normalisation is off by a factor pi i for odd k only
    for k, factor in ((0, 1), (1, 1j * math.pi), (2, 1), (3, 1j * math.pi)):
        ratio = mellin_kcos(nu, 0, k, w, s) / mellin_kcos(nu, 0, k, w, s, convention="printed")
        assert abs(ratio - factor) < 1e-12


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([0.1, 0.25, 0.3, 0.5j, 2j]), st.integers(0, 3), st.floats(0.05, 2.0),
       st.floats(0.8, 3.0), st.floats(-3, 3))
def test_mellin_kcos_closed_form_vs_quadrature(nu, k, w, sr, si):
    s = complex(sr, si)
    closed = mellin_kcos(nu, 0, k, w, s)
    quad = mellin_kcos_quadrature(nu, k, w, s)
    assert abs(closed - quad) < 1e-7 * max(1.0, abs(quad))


def test_mellin_identity_coefficients():
    assert mellin_identity_coefficient(0, 0) == 1
    assert mellin_identity_coefficient(0, 1) == pytest.approx(math.pi)
    assert mellin_identity_coefficient(1, 0) == pytest.approx(1j * math.pi)
    assert mellin_identity_coefficient(1, 1) == pytest.approx(-1j)


def test_mellin_identity_even_spec(eis25):
    rep = mellin_identity_residual(eis25, 0.0, Fraction(0), [2.5, 2.5 + 3j])
    assert rep.passed, rep.max_residual
    rep = mellin_identity_residual(eis25, 0.5, Fraction(1, 5), 2.5)
    assert rep.passed, rep.max_residual


def test_mellin_identity_odd_spec(eis25):
    odd = MaassSpec(1, trivial_character(1), 1, eis25.nu, eis25.a, eis25.b, eis25.residues, family="synthetic")
    rep = mellin_identity_residual(odd, 0.0, Fraction(0), 2.5)
    assert rep.max_abs_residual < 1e-10
    assert max(abs(v) for v in rep.lhs) < 1e-10


def test_circle_integral(eis25):
    rep = circle_integral_residual(eis25, 1j)
    assert abs(rep.lhs[0]) < 1e-12
    assert abs(rep.rhs[0]) < 1e-8
    assert circle_integral_residual(eis25, 2j).passed


def test_circle_integral_excluded_pole(eis25):
    rep = circle_integral_residual(eis25, 1.3j, radius=0.6)
    assert rep.status == "contract_violation" and not rep.passed
    assert rep.extra["residual_with_excluded_added"] < 1e-8
    with pytest.raises(PoleOnContour):
        circle_integral_residual(eis25, 1j, radius=0.75)


def test_additive_fe():
    for k in (0, 1, 2, 3):
        rep = additive_fe_residual(0.25, Fraction(2, 7), k, [2, 0.5 + 3j, -0.5 + 1j])
        assert rep.passed, (k, rep.max_residual)


def test_eisenstein_fe_primitive_only():
    assert eisenstein_fe_residual(0.4j, primitive_characters(7)[0], [0.5 + 2j, 0.2]).passed
    with pytest.raises(PreconditionError):
        eisenstein_fe_residual(0.25, character_group(5).characters()[0], [0.5])


def test_vandermonde_small():
    sysm = vandermonde_coeffs([1, 2], 0, 1)
    assert sysm.coefficients == (Fraction(-1), Fraction(2))
    assert all(r == 0 for r in sysm.residuals())


def test_vandermonde_least_norm():
    sysm = vandermonde_coeffs([1, 2, 3], 1, 1)
    assert all(r == 0 for r in sysm.residuals())
    A = np.array([[1.0, 1.0, 1.0], [1.0, 0.5, 1 / 3]])
    brute = np.linalg.pinv(A) @ np.array([0.0, 1.0])
    assert np.allclose([float(c) for c in sysm.coefficients], brute, atol=1e-12)
    with pytest.raises(SingularSystem):
        vandermonde_coeffs([2, 2], 0, 1)


@settings(max_examples=25, deadline=None)
@given(st.lists(st.integers(1, 30), min_size=2, max_size=6, unique=True), st.data())
def test_vandermonde_constraints_exact(lams, data):
    ell0 = data.draw(st.integers(1, len(lams) // 2))
    t0 = data.draw(st.integers(0, 2 * ell0 - 1))
    assert all(r == 0 for r in vandermonde_coeffs(lams, t0, ell0).residuals())
