import math

import mpmath
import numpy as np
import pytest

from maasskit.characters import character_group, gauss_sum, primitive_characters, quadratic_character, trivial_character
from maasskit.corpus import HeckeData
from maasskit.errors import PoleError, PreconditionError
from maasskit.quotient import (
    completed_dirichlet,
    dirichlet_fe_residual,
    dirichlet_l,
    quotient_fe_epsilon_residual,
    quotient_gamma_residual,
    quotient_spec,
    root_number,
)

# mpmath.dirichlet(1, [0, 1, -1, -1, 1])
L_QUAD5_AT_1 = 0.4304089409640040388894332


def _odd(q):
    return next(p for p in primitive_characters(q) if p.parity == 1)


def _even_primitive(q):
    return next(p for p in primitive_characters(q) if p.parity == 0)


def test_dirichlet_l_values():
    assert dirichlet_l(trivial_character(1), 2).real == pytest.approx(math.pi ** 2 / 6, rel=1e-13)
    psi = quadratic_character(5)
    assert dirichlet_l(psi, 1).real == pytest.approx(L_QUAD5_AT_1, rel=1e-12)
    # the alternating-block partial sums approach the same value
    n = np.arange(1, 200001)
    table = np.array([psi(r).real for r in range(5)])
    partial = np.sum(table[n % 5] / n)
    assert abs(partial - L_QUAD5_AT_1) < 1e-5
    with pytest.raises(PoleError):
        dirichlet_l(trivial_character(1), 1)
    # non-principal: L(1, psi) = -(1/q) sum psi(a) digamma(a/q)
    for psi in primitive_characters(7):
        oracle = -sum(psi(a) * complex(mpmath.digamma(a / 7)) for a in range(1, 7)) / 7
        assert abs(dirichlet_l(psi, 1) - oracle) < 1e-12
        assert abs(dirichlet_l(psi, 1 + 5e-4) - complex(mpmath.dirichlet(1 + 5e-4, [psi(a) for a in range(7)]))) < 1e-11


def test_value_at_minus_one_from_functional_equation():
    psi = quadratic_character(5)
    # Lambda(-1) = W Lambda(2) with the standard completion
    rhs = root_number(psi) * completed_dirichlet(psi.conj(), 2)
    lhs = completed_dirichlet(psi, -1)
    assert abs(lhs - rhs) < 1e-10
    assert dirichlet_l(psi, -1).real == pytest.approx(-0.4, abs=1e-10)


def test_dirichlet_fe_examples():
    psi = quadratic_character(5)
    assert dirichlet_fe_residual(psi, 0.3 + 2j).max_residual < 1e-8
    assert dirichlet_fe_residual(_odd(5), 0.5).max_residual < 1e-8


def test_dirichlet_fe_twice_returns_start():
    psi = _odd(7)
    s = 0.2 + 1.3j
    start = completed_dirichlet(psi, s)
    once = root_number(psi) * completed_dirichlet(psi.conj(), 1 - s)
    twice = root_number(psi) * root_number(psi.conj()) * completed_dirichlet(psi, s)
    assert abs(start - once) < 1e-10 * abs(start)
    assert abs(twice - start) < 1e-10 * abs(start)


def test_printed_completion_fails():
    assert not dirichlet_fe_residual(quadratic_character(5), [0.3 + 1j, 0.7], convention="printed").passed


def test_dirichlet_fe_needs_primitive():
    with pytest.raises(PreconditionError):
        dirichlet_fe_residual(character_group(5).characters()[0], 0.5)


def test_quotient_gamma():
    grid = [1.5 + 1j * t for t in range(-5, 6)]
    rep = quotient_gamma_residual(0, 0.25, grid)
    assert rep.passed and max(abs(v - 1) for v in rep.lhs) < 1e-10
    rep = quotient_gamma_residual(1, 0.4j, grid)
    assert rep.passed
    assert abs(rep.extra["constant"] - math.pi ** 1.5) < 1e-10
    with pytest.raises(PoleError):
        quotient_gamma_residual(0, 0.25, [-0.25])


def test_quotient_epsilon_examples():
    assert quotient_fe_epsilon_residual(_even_primitive(5), 1, 0.7).max_residual < 1e-12
    assert quotient_fe_epsilon_residual(_odd(5), 4, 0.3 + 1j).max_residual < 1e-12
    for psi in primitive_characters(7):
        rep = quotient_fe_epsilon_residual(psi, 1, 0.5)
        assert abs(abs(rep.lhs[0]) - abs(rep.rhs[0])) < 1e-12
        assert abs(abs(gauss_sum(psi)) ** 2 - 7) < 1e-12


def test_quotient_epsilon_printed_variant():
    # the printed sign and character factor only cancel for special (psi, M)
    assert quotient_fe_epsilon_residual(_odd(7), 1, [0.7, 0.3 + 1j]).passed
    assert not quotient_fe_epsilon_residual(_odd(7), 1, [0.7], variant="printed").passed
    with pytest.raises(PreconditionError):
        quotient_fe_epsilon_residual(_odd(5), 5, 0.5)


def test_quotient_spec():
    eig = {p: 0.3 for p in (2, 3, 5, 7, 11, 13)}
    qs = quotient_spec(HeckeData(1, eig), 15, 0.25)
    assert qs.conductor == 1
    assert len(qs.c) == len(qs.a) == 15
