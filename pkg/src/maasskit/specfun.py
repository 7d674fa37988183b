"""Complex special functions in binary64.

Gamma values come from scipy; everything else (K-Bessel quadrature, the
three-region 2F1, Hurwitz zeta by Euler-Maclaurin) is implemented here.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import special as sp

from . import kernels
from .errors import ContinuationError, ConvergenceError, DomainError, ParameterError, PoleError

_POLE_TOL = 1e-13


@dataclass(frozen=True)
class SpectralParam:
    nu: complex

    def __post_init__(self):
        nu = complex(self.nu)
        object.__setattr__(self, "nu", nu)
        if nu.imag == 0.0:
            if abs(nu.real) >= 0.5:
                raise ParameterError(f"real spectral parameter must satisfy |nu| < 1/2, got {nu.real}")
        elif nu.real != 0.0:
            raise ParameterError(f"spectral parameter must be real or purely imaginary, got {nu}")

    @property
    def mode(self):
        return "real" if self.nu.imag == 0.0 else "imaginary"

    @property
    def eigenvalue(self):
        return (0.25 - self.nu * self.nu).real

    def to_json(self):
        return {"re": self.nu.real, "im": self.nu.imag}

    @classmethod
    def from_json(cls, obj):
        return cls(complex(obj["re"], obj["im"]))


def as_nu(nu):
    """Accept a SpectralParam or a bare number."""
    if isinstance(nu, SpectralParam):
        return nu.nu
    return complex(nu)


@dataclass(frozen=True)
class Precision:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-10
    max_terms: int = 4000
    quad_levels: int = 6

    def __post_init__(self):
        if not (0 < self.rel_tol < 1 and 0 < self.abs_tol < 1):
            raise ParameterError("tolerances must lie in (0, 1)")
        if self.max_terms < 16:
            raise ParameterError("max_terms must be at least 16")
        if self.quad_levels < 1:
            raise ParameterError("quad_levels must be positive")


def _nonpositive_integer(z):
    z = complex(z)
    if abs(z.imag) > _POLE_TOL:
        return None
    k = round(z.real)
    if k <= 0 and abs(z.real - k) < _POLE_TOL:
        return k
    return None


def gamma(s):
    """Complex Gamma; PoleError at nonpositive integers."""
    s = complex(s)
    k = _nonpositive_integer(s)
    if k is not None:
        raise PoleError(k)
    if abs(s) > 140:
        return complex(np.exp(sp.loggamma(s)))
    return complex(sp.gamma(s))


def rgamma(s):
    """1/Gamma(s), entire."""
    return complex(sp.rgamma(complex(s)))


def gamma_r(s):
    """pi^(-s/2) Gamma(s/2)."""
    s = complex(s)
    k = _nonpositive_integer(s / 2)
    if k is not None:
        raise PoleError(2 * k)
    return cmath.exp(-s / 2 * math.log(math.pi)) * gamma(s / 2)


def pochhammer(x, n):
    if n < 0:
        raise ParameterError("pochhammer index must be nonnegative")
    out = 1
    for j in range(n):
        out *= x + j
    return out


def bessel_k(nu, u):
    """K_nu(u) for u > 0 via the integral of exp(-u cosh x) cosh(nu x).

    Accepts a scalar or array ``u``; returns complex of the same shape.
    """
    nu = as_nu(nu)
    arr = np.asarray(u, dtype=np.float64)
    if np.any(~(arr > 0)):
        raise DomainError("bessel_k needs u > 0")
    out = kernels.bessel_k(nu, arr.ravel()).reshape(arr.shape)
    if np.ndim(u) == 0:
        return complex(out)
    return out


def whittaker_w(nu, u):
    """W_nu(u) = 4 sqrt|u| K_nu(2 pi |u|)."""
    arr = np.asarray(u, dtype=np.float64)
    if np.any(arr == 0):
        raise DomainError("whittaker_w is undefined at u = 0")
    a = np.abs(arr)
    out = 4.0 * np.sqrt(a) * bessel_k(nu, 2.0 * np.pi * a)
    if np.ndim(u) == 0:
        return complex(out)
    return out


# ---- Gauss hypergeometric ------------------------------------------------

def _is_integer(z, tol=1e-12):
    z = complex(z)
    return abs(z.imag) < tol and abs(z.real - round(z.real)) < tol


# the partial sums may cancel by at most this factor before we refuse
_CANCELLATION_LIMIT = 1e7
# power series radius; 0.85 keeps the |z| <= 0.8 draws of the Euler check inside it
SERIES_RADIUS = 0.85
# above this cancellation factor the Pfaff forms are tried as well
_REROUTE_LOSS = 1e3


def _series(a, b, c, z, max_terms):
    return _series_loss(a, b, c, z, max_terms)[0]


def _series_loss(a, b, c, z, max_terms):
    """Sum and its cancellation factor, largest term over the result."""
    total = 1.0 + 0j
    term = 1.0 + 0j
    peak = 1.0
    for k in range(max_terms):
        ratio = (a + k) * (b + k) / ((c + k) * (k + 1))
        term = term * ratio * z
        total += term
        peak = max(peak, abs(term))
        if term == 0 or (abs(term) <= 1e-17 * abs(total) and abs(ratio * z) < 1):
            if peak > _CANCELLATION_LIMIT * abs(total):
                raise ConvergenceError(f"2F1 series lost too many digits to cancellation at z={z}")
            return total, peak / max(abs(total), 1e-300)
    raise ConvergenceError(f"2F1 series did not converge in {max_terms} terms at z={z}")


def _continuation(a, b, c, z, max_terms):
    if _is_integer(a - b):
        raise ContinuationError("|z| > 1 continuation needs a - b outside the integers")
    mz = -z
    out = 0j
    for p, q in ((a, b), (b, a)):
        pref = gamma(q - p) * gamma(c) * rgamma(q) * rgamma(c - p) * cmath.exp(-p * cmath.log(mz))
        if pref == 0:
            continue
        out += pref * _series(p, p - c + 1, p - q + 1, 1 / z, max_terms)
    return out


def _least_cancelling(a, b, c, z, max_terms):
    """Power series at z, or a Pfaff form at z/(z-1) when that cancels less."""
    routes = []
    try:
        routes.append(_series_loss(a, b, c, z, max_terms))
    except ConvergenceError:
        pass
    if not routes or routes[0][1] > _REROUTE_LOSS:
        zeta = z / (z - 1)
        if abs(zeta) <= SERIES_RADIUS:
            for p, q in ((a, b), (b, a)):
                try:
                    val, loss = _series_loss(p, c - q, c, zeta, max_terms)
                except ConvergenceError:
                    continue
                routes.append((cmath.exp(-p * cmath.log(1 - z)) * val, loss))
    if not routes:
        raise ConvergenceError(f"2F1 series lost too many digits to cancellation at z={z}")
    return min(routes, key=lambda r: r[1])[0]


def _pfaff(a, b, c, z, max_terms):
    zeta = z / (z - 1)
    return cmath.exp(-a * cmath.log(1 - z)) * _series(a, c - b, c, zeta, max_terms)


def hyp2f1(a, b, c, z, method="auto", max_terms=20000):
    """2F1(a, b; c; z) by power series, Pfaff transform or the |z|>1 expansion.

    ``method`` forces one route ('series', 'pfaff', 'continuation');
    'auto' picks by region.
    """
    a, b, c, z = complex(a), complex(b), complex(c), complex(z)
    if _nonpositive_integer(c) is not None:
        raise ParameterError(f"c = {c} is a nonpositive integer")
    on_cut = abs(z.imag) < 1e-15 and z.real > 1
    if on_cut:
        raise DomainError(f"z = {z} lies on the branch cut (1, inf)")
    if z == 0:
        return 1.0 + 0j
    if method == "series":
        if abs(z) >= 1:
            raise DomainError("power series needs |z| < 1")
        return _series(a, b, c, z, max_terms)
    if method == "pfaff":
        if abs(z / (z - 1)) >= 1:
            raise DomainError("Pfaff transform needs |z/(z-1)| < 1")
        return _pfaff(a, b, c, z, max_terms)
    if method == "continuation":
        if abs(z) <= 1:
            raise DomainError("continuation formula needs |z| > 1")
        return _continuation(a, b, c, z, max_terms)
    if method != "auto":
        raise ParameterError(f"unknown method {method!r}")

    r = abs(z)
    if r <= SERIES_RADIUS:
        return _least_cancelling(a, b, c, z, max_terms)
    if r > 1 and _is_integer(a - b):
        raise ContinuationError("a - b is an integer and |z| > 1")
    real_negative = abs(z.imag) < 1e-15 and z.real <= -0.5
    if real_negative and abs(z / (z - 1)) <= 0.8:
        return _pfaff(a, b, c, z, max_terms)
    if r > 1.25:
        return _continuation(a, b, c, z, max_terms)
    if real_negative:
        return _pfaff(a, b, c, z, max_terms)
    raise DomainError(f"z = {z} is outside the supported regions")


# ---- Hurwitz zeta --------------------------------------------------------

_BERNOULLI_EVEN = [
    Fraction(1, 6), Fraction(-1, 30), Fraction(1, 42), Fraction(-1, 30),
    Fraction(5, 66), Fraction(-691, 2730), Fraction(7, 6), Fraction(-3617, 510),
    Fraction(43867, 798), Fraction(-174611, 330), Fraction(854513, 138),
    Fraction(-236364091, 2730),
]
_EM_COEFFS = [float(b) / math.factorial(2 * k + 2) for k, b in enumerate(_BERNOULLI_EVEN)]


def hurwitz_zeta(s, a=1.0):
    """Continuation of sum_{n>=0} (n+a)^(-s) for a in (0, 1].

    Euler-Maclaurin with 12 Bernoulli corrections after an explicit head of
    more than 2|s| terms. Close to machine precision for Re s >= -1; the head
    sum grows like shift^(-Re s), so accuracy degrades further left.
    """
    s = complex(s)
    a = float(a)
    if not (0 < a <= 1):
        raise DomainError("hurwitz_zeta needs a in (0, 1]")
    if abs(s - 1) < 1e-15:
        raise PoleError(1)
    shift = max(16, int(2 * abs(s)) + 8)
    n = np.arange(shift, dtype=np.float64) + a
    head = complex(np.sum(np.exp(-s * np.log(n))))
    x = shift + a
    logx = math.log(x)
    xs = cmath.exp(-s * logx)
    total = head + x * xs / (s - 1) + 0.5 * xs
    poch = s
    power = xs / x
    for k, coeff in enumerate(_EM_COEFFS):
        total += coeff * poch * power
        poch *= (s + 2 * k + 1) * (s + 2 * k + 2)
        power /= x * x
    return total


def riemann_zeta(s):
    return hurwitz_zeta(s, 1.0)
