"""Dirichlet functional equations and the Sym^2 / zeta quotient checks."""
from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass, field

import numpy as np

from .corpus import moebius_deconvolve, sym2_coeffs
from .dirichlet import dirichlet_l
from .errors import ParameterError, PreconditionError
from .characters import gauss_sum
from .report import CheckReport
from .specfun import as_nu, gamma, gamma_r

__all__ = [
    "dirichlet_l", "completed_dirichlet", "dirichlet_fe_residual", "quotient_gamma_residual",
    "quotient_fe_epsilon_residual", "QuotientSpec", "quotient_spec", "CONVENTIONS",
]

CONVENTIONS = {
    "standard": {
        "completion": "(q/pi)^((s+eps)/2) Gamma((s+eps)/2) L(s,psi)",
        "root_number": "tau(psi)/(i^eps sqrt(q))",
        "equation": "Lambda(s,psi) = W Lambda(1-s,conj psi)",
    },
    "printed": {
        "completion": "pi^(-(s+eps)/2) Gamma((s+eps)/2) L(s,psi)",
        "root_number": "(-i)^eps tau(psi^-1)/sqrt(q) q^(-s)",
        "equation": "Lambda(s,psi) = (-i)^eps tau(psi^-1)/q^(1/2) q^(-s) Lambda(1-s,conj psi)",
    },
}


def completed_dirichlet(psi, s, convention="standard"):
    s = complex(s)
    eps = psi.parity
    core = gamma_r(s + eps) * dirichlet_l(psi, s)
    if convention == "standard":
        # gamma_r(s+eps) = pi^(-(s+eps)/2) Gamma((s+eps)/2); add q^((s+eps)/2)
        return cmath.exp((s + eps) / 2 * math.log(psi.modulus)) * core
    if convention == "printed":
        return core
    raise ParameterError(f"unknown convention {convention!r}")


def _dirichlet_fe_rhs(psi, s, convention):
    q = psi.modulus
    eps = psi.parity
    other = completed_dirichlet(psi.conj(), 1 - s, convention)
    if convention == "standard":
        return gauss_sum(psi) / (1j ** eps * math.sqrt(q)) * other
    return (-1j) ** eps * gauss_sum(psi.conj()) / math.sqrt(q) * cmath.exp(-s * math.log(q)) * other


def dirichlet_fe_residual(psi, s, convention="standard", tol=1e-8):
    if not psi.primitive or psi.modulus == 1:
        raise PreconditionError("the Dirichlet functional equation check needs primitive psi with q > 1")
    t0 = time.perf_counter()
    pts = [complex(p) for p in (s if np.ndim(s) else [s])]
    lhs = [completed_dirichlet(psi, p, convention) for p in pts]
    rhs = [_dirichlet_fe_rhs(psi, p, convention) for p in pts]
    return CheckReport(
        "dirichlet-fe", {"psi": psi.to_json(), "convention": convention}, pts, lhs, rhs, tol,
        "Lambda(omega_psi,s) = (-i)^eps tau(psi^-1) q^(-1/2) q^(-s) Lambda(conj omega_psi,1-s)",
        criterion="relative", runtime_ms=(time.perf_counter() - t0) * 1e3,
        extra={"completion_convention": CONVENTIONS[convention]})


def root_number(psi):
    return gauss_sum(psi) / (1j ** psi.parity * math.sqrt(psi.modulus))


def _quotient_ratio(eps, nu, s):
    num = cmath.exp(-1.5 * s * math.log(math.pi)) * gamma((s + eps + nu) / 2) * gamma((s + eps - nu) / 2) * gamma((s + eps) / 2)
    den = gamma_r(s + eps)
    target = gamma_r(s + eps + nu) * gamma_r(s + eps - nu)
    return num / den / target


def quotient_gamma_residual(eps_psi, nu, s, tol=1e-10):
    """Ratio of the Sym^2 twist gamma factor, over the Dirichlet one, to Gamma_R(s+eps+nu)Gamma_R(s+eps-nu).

    The Dirichlet completion here is its pi/Gamma part only. The ratio is then
    the constant pi^(3 eps/2). For eps = 0 the reference value is 1;
    for eps = 1 the reference is the grid mean and the constant is recorded.
    """
    if eps_psi not in (0, 1):
        raise ParameterError("eps_psi must be 0 or 1")
    t0 = time.perf_counter()
    nu = as_nu(nu)
    pts = [complex(p) for p in (s if np.ndim(s) else [s])]
    ratios = [_quotient_ratio(eps_psi, nu, p) for p in pts]
    constant = complex(np.mean(ratios))
    ref = 1.0 if eps_psi == 0 else constant
    return CheckReport(
        "quotient-gamma", {"eps_psi": eps_psi, "nu": nu}, pts, ratios, [ref] * len(pts), tol,
        "pi^(-3s/2) Gamma((s+eps+nu)/2) Gamma((s+eps-nu)/2) Gamma((s+eps)/2) / Gamma_R(s+eps) = Gamma_R(s+eps+nu) Gamma_R(s+eps-nu)",
        criterion="relative", runtime_ms=(time.perf_counter() - t0) * 1e3,
        extra={"constant": constant, "closed_form": "pi^(3 eps/2)",
               "closed_form_value": math.pi ** (1.5 * eps_psi),
               "dirichlet_gamma": "pi^(-(s+eps)/2) Gamma((s+eps)/2)"})


def _epsilon_sides(psi, M, s, variant):
    q = psi.modulus
    eps = psi.parity
    tau = gauss_sum(psi.conj())
    sym = tau ** 3 * q ** -1.5 * cmath.exp(-s * math.log(M * q ** 3))
    dir_ = (-1j) ** eps * tau / math.sqrt(q) * cmath.exp(-s * math.log(q))
    if variant == "algebraic":
        sym *= (-1j) ** (3 * eps)
    elif variant == "printed":
        sym *= 1j ** (3 * eps) * psi.conj()(M)
    else:
        raise ParameterError(f"unknown variant {variant!r}")
    rhs = (-1) ** eps * tau ** 2 / q * cmath.exp(-s * math.log(M * q * q))
    return sym / dir_, rhs


def quotient_fe_epsilon_residual(psi, M, s, variant="algebraic", tol=1e-12):
    """Root-number arithmetic of the quotient functional equation.

    'algebraic' takes (-i)^(3 eps) tau^3 q^(-3/2) (M q^3)^(-s) for the twisted
    Sym^2 factor. 'printed' uses i^(3 eps) psi^-1(M) in its place, which leaves
    a sign for odd psi and a factor psi^-1(M).
    """
    if math.gcd(psi.modulus, M) != 1:
        raise PreconditionError("gcd(q, M) must be 1")
    t0 = time.perf_counter()
    pts = [complex(p) for p in (s if np.ndim(s) else [s])]
    pairs = [_epsilon_sides(psi, M, p, variant) for p in pts]
    return CheckReport(
        "quotient-epsilon", {"psi": psi.to_json(), "M": M, "variant": variant}, pts,
        [a for a, _ in pairs], [b for _, b in pairs], tol,
        "[eps-factor of Sym^2 twist] / [(-i)^eps tau q^(-1/2) q^(-s)] = (-1)^eps tau(psi^-1)^2 q^(-1) (M q^2)^(-s)",
        criterion="relative", runtime_ms=(time.perf_counter() - t0) * 1e3)


@dataclass
class QuotientSpec:
    c: object
    a: object
    conductor: int
    nu: complex
    eps_psi: int = 0
    provenance: dict = field(default_factory=dict)

    def to_json(self):
        return {"conductor": self.conductor, "nu": {"re": complex(self.nu).real, "im": complex(self.nu).imag},
                "eps_psi": self.eps_psi, "n_max": len(self.c), "provenance": self.provenance}


def quotient_spec(hecke, n_max, nu, conductor=None, eps_psi=0):
    c = sym2_coeffs(hecke, n_max)
    a = moebius_deconvolve(c)
    M = conductor if conductor is not None else hecke.level ** 2
    if (hecke.level ** 2) % M:
        raise ParameterError("the Sym^2 conductor must divide N^2")
    return QuotientSpec(c, a, M, as_nu(nu), eps_psi, dict(hecke.source))
