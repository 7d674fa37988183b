"""Test vectors: the level 1 Eisenstein family, Sym^2 data, Dirichlet convolution."""
from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .characters import is_prime, trivial_character
from .errors import (
    BadPrimeUnsupported,
    FormatError,
    MissingEigenvalue,
    ParameterError,
    SanityBoundViolation,
)
from .lseries import CoeffSeq, continued_lambda_eisenstein, small_circle_residue
from .maassform import MaassSpec
from .specfun import SpectralParam

MAX_REAL_PART = 0.35
DEFAULT_KAPPA = 0.2


def eisenstein_coeffs(nu, n_max):
    """a_n = sigma_{2 nu}(n) n^(-nu) by a divisor sieve."""
    nu = complex(nu)
    n = np.arange(1, n_max + 1, dtype=np.float64)
    acc = np.zeros(n_max, dtype=np.complex128)
    powers = np.exp(2 * nu * np.log(n))
    for d in range(1, n_max + 1):
        acc[d - 1::d] += powers[d - 1]
    return acc * np.exp(-nu * np.log(n))


def eisenstein_residues(nu):
    """Residues of Gamma_R(s+nu)Gamma_R(s-nu)zeta(s+nu)zeta(s-nu) at -nu, nu, 1+nu, 1-nu."""
    one = trivial_character(1)

    def lam(s):
        return continued_lambda_eisenstein(one, nu, s, k=0)

    out = {}
    for key, pole in (("f_minus_nu", -nu), ("f_plus_nu", nu), ("g_one_plus_nu", 1 + nu), ("g_one_minus_nu", 1 - nu)):
        out[key] = small_circle_residue(lam, pole)
    return out


def eisenstein_spec(nu, n_max, kappa=None):
    """Level 1, trivial nebentypus, even, b = a.

    The growth exponent is |Re nu| + kappa. Real nu with |nu| >= 0.35 is
    refused: the admissible kappa window (0, 1/2 - |Re nu|) becomes too
    thin for the truncation bounds to be useful.
    """
    sp = nu if isinstance(nu, SpectralParam) else SpectralParam(nu)
    v = sp.nu
    if v == 0:
        raise ParameterError("the Eisenstein generator needs nu != 0")
    if abs(v.real) >= MAX_REAL_PART:
        raise ParameterError(f"|Re nu| must stay below {MAX_REAL_PART}")
    if n_max < 16:
        raise ParameterError("n_max must be at least 16")
    if kappa is None:
        kappa = min(DEFAULT_KAPPA, (0.5 - abs(v.real)) / 2)
    if not 0 < kappa < 0.5 - abs(v.real):
        raise ParameterError("kappa must lie in (0, 1/2 - |Re nu|)")
    coeffs = CoeffSeq.fit(eisenstein_coeffs(v, n_max), abs(v.real) + kappa)
    return MaassSpec(1, trivial_character(1), 0, sp, coeffs, coeffs, eisenstein_residues(v),
                     family="eisenstein", source={"generator": "eisenstein", "n_max": n_max, "kappa": kappa})


# ---- Hecke data and Sym^2 ---------------------------------------------------

def sanity_bound(p):
    return math.sqrt(p) + 1 / math.sqrt(p) + 1


@dataclass(frozen=True)
class HeckeData:
    level: int
    eigenvalues: dict  # prime -> complex
    source: dict = field(default_factory=dict)

    @property
    def primes(self):
        return sorted(self.eigenvalues)

    def bad(self, p):
        return self.level % p == 0


def _primes_upto(n):
    return [p for p in range(2, n + 1) if is_prime(p)]


def load_hecke(path, level=1):
    try:
        with open(path, "rb") as fh:
            raw = fh.read()
    except OSError as exc:
        raise FormatError(f"cannot read {path}: {exc}") from exc
    rows = list(csv.reader(raw.decode("utf-8").splitlines()))
    if not rows or [c.strip() for c in rows[0]] != ["p", "lambda_re", "lambda_im"]:
        raise FormatError("header must be p,lambda_re,lambda_im")
    eig = {}
    last = 1
    for i, row in enumerate(rows[1:], start=2):
        if not row:
            continue
        if len(row) != 3:
            raise FormatError(f"line {i}: expected three fields")
        try:
            p = int(row[0])
            lam = complex(float(row[1]), float(row[2]))
        except ValueError as exc:
            raise FormatError(f"line {i}: not numeric") from exc
        if not is_prime(p):
            raise FormatError(f"line {i}: {p} is not prime")
        if p <= last:
            raise FormatError(f"line {i}: primes must increase")
        expected = next(q for q in range(last + 1, p + 1) if is_prime(q))
        if expected != p:
            raise FormatError(f"line {i}: prime {expected} is missing")
        if abs(lam) > sanity_bound(p):
            raise SanityBoundViolation(f"|lambda_{p}| = {abs(lam):.4g} exceeds {sanity_bound(p):.4g}")
        eig[p] = lam
        last = p
    if not eig:
        raise FormatError("no eigenvalues")
    return HeckeData(level, eig, {"path": str(path), "sha256": hashlib.sha256(raw).hexdigest()})


def sym2_local(lam, depth):
    """Coefficients of 1/((1-a^2 X)(1-X)(1-b^2 X)) with a + b = lam, ab = 1, up to X^depth."""
    e = lam * lam - 1
    h = [1 + 0j]
    for k in range(1, depth + 1):
        v = e * h[k - 1]
        if k >= 2:
            v -= e * h[k - 2]
        if k >= 3:
            v += h[k - 3]
        h.append(v)
    return h


def sym2_coeffs(hecke, n_max, sigma=0.5):
    """Dirichlet coefficients of the Sym^2 Euler product up to n_max."""
    c = np.zeros(n_max + 1, dtype=np.complex128)
    c[1] = 1
    for p in _primes_upto(n_max):
        if hecke.bad(p):
            raise BadPrimeUnsupported(f"prime {p} divides the level")
        if p not in hecke.eigenvalues:
            raise MissingEigenvalue(f"no eigenvalue for p = {p}")
        depth = int(math.log(n_max) / math.log(p) + 1e-9)
        local = sym2_local(hecke.eigenvalues[p], depth)
        # multiply the Euler product in place, highest index first
        new = c.copy()
        pk = p
        for k in range(1, depth + 1):
            m = np.arange(1, n_max // pk + 1)
            coprime = m % p != 0
            new[m[coprime] * pk] += local[k] * c[m[coprime]]
            pk *= p
        c = new
    return CoeffSeq.fit(c[1:], sigma)


# ---- Dirichlet convolution --------------------------------------------------

def mobius(n_max):
    mu = [1] * (n_max + 1)
    mu[0] = 0
    is_comp = [False] * (n_max + 1)
    for p in range(2, n_max + 1):
        if not is_comp[p]:
            for m in range(p, n_max + 1, p):
                if m > p:
                    is_comp[m] = True
                mu[m] = -mu[m]
            for m in range(p * p, n_max + 1, p * p):
                mu[m] = 0
    return mu


def _as_exact(values):
    out = []
    for v in values:
        v = complex(v)
        if v.imag != 0 or v.real != int(v.real):
            return None
        out.append(int(v.real))
    return out


def convolve_exact(a, b):
    """(a * b)_n = sum_{d | n} a_d b_{n/d} on exact Python numbers, 1-based lists."""
    n_max = min(len(a), len(b))
    out = [0] * n_max
    for d in range(1, n_max + 1):
        ad = a[d - 1]
        if ad == 0:
            continue
        for m in range(1, n_max // d + 1):
            out[d * m - 1] += ad * b[m - 1]
    return out


def deconvolve_exact(c):
    """a with a * 1 = c, i.e. a_n = sum_{d | n} mu(d) c_{n/d}."""
    return convolve_exact(mobius(len(c))[1:], list(c))


def convolve(a, b):
    """Dirichlet convolution of two CoeffSeq (exact when both are integral)."""
    av, bv = _as_exact(a.values), _as_exact(b.values)
    if av is not None and bv is not None:
        vals = convolve_exact(av, bv)
    else:
        vals = convolve_exact(list(a.values), list(b.values))
    return CoeffSeq.fit(np.array(vals, dtype=np.complex128), a.sigma + b.sigma + 1)


def growth_slope(values, start=10):
    """Least-squares slope of log(running max |a_n|) against log n."""
    mags = np.maximum.accumulate(np.abs(np.asarray(values)))
    n = np.arange(1, mags.size + 1)
    sel = (n >= start) & (mags > 0)
    if np.count_nonzero(sel) < 2:
        return 0.0
    return float(np.polyfit(np.log(n[sel]), np.log(mags[sel]), 1)[0])


def moebius_deconvolve(c):
    """Coefficients of (sum c_n n^-s) / zeta(s)."""
    exact = _as_exact(c.values)
    vals = deconvolve_exact(exact if exact is not None else list(c.values))
    arr = np.array(vals, dtype=np.complex128)
    sigma = c.sigma + 0.1 if np.any(arr) else c.sigma
    return CoeffSeq.fit(arr, sigma)


def divisor_sigma(n_max, power=1):
    out = [0] * n_max
    for d in range(1, n_max + 1):
        for m in range(d, n_max + 1, d):
            out[m - 1] += d ** power
    return out


def as_fractions(values):
    return [Fraction(v) for v in values]
