"""The pair (f, g): Fourier-Whittaker evaluation and transformation checks."""
from __future__ import annotations

import cmath
import csv
import json
import math
import os
import time
from dataclasses import dataclass, field

import numpy as np

from . import kernels
from .characters import DirichletCharacter, character_group, gauss_sum, trivial_character
from .errors import (
    DomainError,
    FormatError,
    InsufficientCoefficients,
    PreconditionError,
    ValidationError,
)
from .lseries import CoeffSeq
from .report import CheckReport
from .specfun import Precision, SpectralParam

MIN_USER_Y = 0.05
# transformed points may sit lower than user points; below this we refuse
MIN_INTERNAL_Y = 0.005

RESIDUE_KEYS = ("f_minus_nu", "f_plus_nu", "g_one_plus_nu", "g_one_minus_nu")
RESIDUE_KEYS_NU0 = ("f_res0", "f_sres0", "g_res1", "g_sres1")


@dataclass(eq=False)
class MaassSpec:
    level: int
    chi: DirichletCharacter
    parity: int
    nu: SpectralParam
    a: CoeffSeq
    b: CoeffSeq
    residues: dict = field(default_factory=dict)
    family: str = ""
    source: dict = field(default_factory=dict)

    def __post_init__(self):
        if not isinstance(self.nu, SpectralParam):
            self.nu = SpectralParam(self.nu)
        if self.level < 1:
            raise ValidationError("level must be positive")
        if self.parity not in (0, 1):
            raise ValidationError("parity must be 0 or 1")
        if self.chi.modulus != self.level:
            raise ValidationError("nebentypus modulus must equal the level")
        if self.chi.parity != 0:
            raise ValidationError("nebentypus must be even for weight 0")
        keys = RESIDUE_KEYS_NU0 if self.nu.nu == 0 else RESIDUE_KEYS
        missing = [k for k in keys if k not in self.residues]
        if missing:
            raise ValidationError(f"missing residues: {missing}")
        self.residues = {k: complex(self.residues[k]) for k in keys}

    def coeffs(self, side):
        if side == "f":
            return self.a
        if side == "g":
            return self.b
        raise ValidationError("side must be 'f' or 'g'")


# ---- serialization ---------------------------------------------------------

def _cjson(z):
    return {"re": float(z.real), "im": float(z.imag)}


def _cparse(obj):
    try:
        return complex(float(obj["re"]), float(obj["im"]))
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"bad complex value {obj!r}") from exc


def write_coeff_csv(path, values):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        out = csv.writer(fh, lineterminator="\n")
        out.writerow(["n", "re", "im"])
        for n, v in enumerate(values, start=1):
            out.writerow([n, repr(float(v.real)), repr(float(v.imag))])


def read_coeff_csv(path):
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.reader(fh))
    if not rows or [c.strip() for c in rows[0]] != ["n", "re", "im"]:
        raise FormatError(f"{path}: header must be n,re,im")
    vals = []
    for i, row in enumerate(rows[1:], start=1):
        if len(row) != 3:
            raise FormatError(f"{path}: row {i} needs three fields")
        try:
            n = int(row[0])
            v = complex(float(row[1]), float(row[2]))
        except ValueError as exc:
            raise FormatError(f"{path}: row {i} is not numeric") from exc
        if n != i:
            raise FormatError(f"{path}: indices must run 1..n_max contiguously (row {i} has n={n})")
        vals.append(v)
    if not vals:
        raise FormatError(f"{path}: no coefficients")
    return np.array(vals, dtype=np.complex128)


def save(spec, directory, coeff_name="coeffs.csv", b_name=None):
    """Write spec.json plus the coefficient CSV (and a second CSV when b != a)."""
    os.makedirs(directory, exist_ok=True)
    write_coeff_csv(os.path.join(directory, coeff_name), spec.a.values)
    obj = {
        "level": spec.level,
        "parity": spec.parity,
        "nu": spec.nu.to_json(),
        "chi": spec.chi.to_json(),
        "coeff_file": coeff_name,
        "growth": {"C": spec.a.C, "sigma": spec.a.sigma},
        "residues": {k: _cjson(v) for k, v in spec.residues.items()},
        "family": spec.family,
    }
    same = spec.b is spec.a or (len(spec.a) == len(spec.b) and np.array_equal(spec.a.values, spec.b.values))
    if not same:
        b_name = b_name or "coeffs_b.csv"
        write_coeff_csv(os.path.join(directory, b_name), spec.b.values)
        obj["coeff_file_b"] = b_name
        obj["growth_b"] = {"C": spec.b.C, "sigma": spec.b.sigma}
    path = os.path.join(directory, "spec.json")
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return path


def load(path):
    if os.path.isdir(path):
        path = os.path.join(path, "spec.json")
    try:
        with open(path, encoding="utf-8") as fh:
            obj = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise FormatError(f"cannot read spec {path}: {exc}") from exc
    base = os.path.dirname(path)
    try:
        nu = SpectralParam.from_json(obj["nu"])
        chi = DirichletCharacter.from_json(obj["chi"])
        growth = obj["growth"]
        a = CoeffSeq(read_coeff_csv(os.path.join(base, obj["coeff_file"])), float(growth["sigma"]), float(growth["C"]))
        if "coeff_file_b" in obj:
            gb = obj.get("growth_b", growth)
            b = CoeffSeq(read_coeff_csv(os.path.join(base, obj["coeff_file_b"])), float(gb["sigma"]), float(gb["C"]))
        else:
            b = a
        residues = {k: _cparse(v) for k, v in obj["residues"].items()}
        return MaassSpec(int(obj["level"]), chi, int(obj["parity"]), nu, a, b, residues,
                         obj.get("family", ""), {"spec": path})
    except KeyError as exc:
        raise FormatError(f"spec {path} lacks field {exc}") from exc


# ---- constant term ---------------------------------------------------------

def constant_term(spec, side, y):
    if y <= 0:
        raise DomainError("y must be positive")
    if spec.parity == 1:
        return 0j
    nu = spec.nu.nu
    r = spec.residues
    N = spec.level
    if nu == 0:
        if side == "f":
            return -(r["f_res0"] * math.sqrt(y) - r["f_sres0"] * math.sqrt(y) * math.log(y))
        # the g side sees N y through the involution
        return math.sqrt(N * y) * (r["g_res1"] + r["g_sres1"] * math.log(N * y))
    yp = cmath.exp((0.5 + nu) * math.log(y))
    ym = cmath.exp((0.5 - nu) * math.log(y))
    if side == "f":
        return -r["f_minus_nu"] * yp - r["f_plus_nu"] * ym
    if side == "g":
        return (cmath.exp((0.5 + nu) * math.log(N)) * r["g_one_plus_nu"] * yp
                + cmath.exp((0.5 - nu) * math.log(N)) * r["g_one_minus_nu"] * ym)
    raise ValidationError("side must be 'f' or 'g'")


# ---- truncation ------------------------------------------------------------

@dataclass(frozen=True)
class TruncationPlan:
    n_max: int
    tail_bound: float
    y: float


def tail_bound(C, sigma, y, N):
    """Bound on sum_{n>N} |a_n| n^(-1/2) |W(ny)| when |a_n| <= C n^sigma.

    Uses |K_nu(u)| <= K_{1/2}(u) = sqrt(pi/2u) e^(-u), valid for |Re nu| <= 1/2,
    which gives |a_n| n^(-1/2) |W(ny)| <= 2C n^(sigma-1/2) e^(-2 pi n y).
    """
    beta = 2 * math.pi * y
    p = sigma - 0.5
    ratio = (1 + 1 / (N + 1)) ** max(p, 0.0) * math.exp(-beta)
    if ratio >= 1:
        return math.inf
    first = (N + 1) ** p * math.exp(-beta * (N + 1))
    return 2 * C * first / (1 - ratio)


def plan(coeffs, y, abs_tol):
    """Smallest n_max whose tail bound is below abs_tol."""
    lo = 1
    hi = 1
    while tail_bound(coeffs.C, coeffs.sigma, y, hi) >= abs_tol:
        hi *= 2
        if hi > 1 << 30:
            raise InsufficientCoefficients(hi, len(coeffs))
    while lo < hi:
        mid = (lo + hi) // 2
        if tail_bound(coeffs.C, coeffs.sigma, y, mid) < abs_tol:
            hi = mid
        else:
            lo = mid + 1
    n = max(hi, 1)
    if coeffs.exact:
        n = min(n, len(coeffs))
    elif n > len(coeffs):
        raise InsufficientCoefficients(n, len(coeffs))
    return TruncationPlan(n, 0.0 if coeffs.exact and n >= len(coeffs) else tail_bound(coeffs.C, coeffs.sigma, y, n), y)


# ---- evaluation ------------------------------------------------------------

def _check_point(z, internal):
    z = complex(z)
    if z.imag <= 0:
        raise DomainError("point must lie in the upper half-plane")
    floor = MIN_INTERNAL_Y if internal else MIN_USER_Y
    if z.imag < floor:
        raise DomainError(f"Im z = {z.imag:.4g} is below the evaluation floor {floor}")
    return z


def whittaker_sum(values, nu, eps, z, n_terms):
    """(-i)^eps sum_{n<=n_terms} c_n n^(-1/2) W_nu(ny) cos^(eps)(2 pi n x)."""
    z = complex(z)
    c = np.ascontiguousarray(values[:n_terms], dtype=np.complex128)
    S = kernels.whittaker_series(c, complex(nu), np.array([z.imag]), np.array([z.real]), eps)[0]
    return (-1j) ** eps * 4 * math.sqrt(z.imag) * S


def evaluate_nonconstant(spec, side, z, precision=None, internal=False, with_bound=False):
    precision = precision or Precision()
    z = _check_point(z, internal)
    coeffs = spec.coeffs(side)
    pl = plan(coeffs, z.imag, precision.abs_tol)
    val = whittaker_sum(coeffs.values, spec.nu.nu, spec.parity, z, pl.n_max)
    return (val, pl) if with_bound else val


def evaluate(spec, side, z, precision=None, internal=False, with_bound=False):
    """f(z) or g(z): constant term plus the certified Whittaker sum."""
    val, pl = evaluate_nonconstant(spec, side, z, precision, internal, with_bound=True)
    val += constant_term(spec, side, complex(z).imag)
    return (val, pl) if with_bound else val


eval = evaluate  # noqa: A001


def evaluate_twisted(spec, side, psi, z, precision=None, internal=False):
    """The character-twisted series sum psi(n) a_n/(2 sqrt|n|) W(ny) e(nx), folded to n >= 1."""
    precision = precision or Precision()
    z = _check_point(z, internal)
    coeffs = spec.coeffs(side)
    pl = plan(coeffs, z.imag, precision.abs_tol)
    n = np.arange(1, pl.n_max + 1)
    table = np.array([psi(r) for r in range(psi.modulus)], dtype=np.complex128)
    vals = coeffs.values[: pl.n_max] * table[n % psi.modulus]
    eps = (spec.parity + psi.parity) % 2
    return whittaker_sum(vals, spec.nu.nu, eps, z, pl.n_max)


# ---- slash action ----------------------------------------------------------

def slash(gamma, sideval, z):
    """Weight 0: (f|gamma)(z) = f(gamma z)."""
    from .hyperbolic import act

    return sideval(act(gamma, z))


# ---- transformation checks -------------------------------------------------

def _timer():
    start = time.perf_counter()
    return lambda: (time.perf_counter() - start) * 1e3


def _points(z):
    return [complex(p) for p in (z if np.ndim(z) else [z])]


def involution_residual(spec, z, tol=1e-7, precision=None):
    """f(z) against g(-1/Nz) at one point or a list of points."""
    elapsed = _timer()
    pts = _points(z)
    lhs, rhs = [], []
    for p in pts:
        lhs.append(evaluate(spec, "f", p, precision))
        rhs.append(evaluate(spec, "g", -1 / (spec.level * p), precision, internal=True))
    return CheckReport(
        "involution", {"level": spec.level, "nu": spec.nu.nu, "eps": spec.parity},
        pts, lhs, rhs, tol, "f(z) = g(-1/(N z))", runtime_ms=elapsed())


def _twist_rhs_factor(spec, psi):
    q = psi.modulus
    return spec.chi(q) * psi(-spec.level) * gauss_sum(psi) / gauss_sum(psi.conj())


def _check_twist(spec, psi):
    if psi.is_principal:
        raise PreconditionError("twist needs a non-principal character")
    if math.gcd(psi.modulus, spec.level) != 1:
        raise PreconditionError("character modulus must be coprime to the level")


def twist_transform_residual(spec, psi, z, tol=1e-6, precision=None):
    """f_psi(z) against chi(q) psi(-N) tau(psi)/tau(psi-bar) g_psi-bar(-1/(N q^2 z))."""
    _check_twist(spec, psi)
    elapsed = _timer()
    pts = _points(z)
    q = psi.modulus
    factor = _twist_rhs_factor(spec, psi)
    lhs, rhs = [], []
    for p in pts:
        lhs.append(evaluate_twisted(spec, "f", psi, p, precision))
        image = -1 / (spec.level * q * q * p)
        rhs.append(factor * evaluate_twisted(spec, "g", psi.conj(), image, precision, internal=True))
    return CheckReport(
        "twist-transform", {"level": spec.level, "nu": spec.nu.nu, "psi": psi.to_json()},
        pts, lhs, rhs, tol,
        "f_psi(z) = chi(q) psi(-N) tau(psi)/tau(psi-bar) g_psi-bar(-1/(N q^2 z))", runtime_ms=elapsed())


def difference_rhs_terms(spec, q, a, b, z, precision=None):
    """The per-character terms of the difference identity's right side."""
    chars = character_group(q).characters()
    image = -1 / (spec.level * q * q * complex(z))
    terms = {}
    for psi in chars[1:]:
        weight = psi(-spec.level) * (psi(a) - psi(b)) * gauss_sum(psi)
        if weight == 0:
            continue
        terms[psi] = weight * evaluate_twisted(spec, "g", psi.conj(), image, precision, internal=True)
    return terms


def difference_identity_residual(spec, q, a, b, z, tol=1e-6, precision=None):
    """f(z + a/q) - f(z + b/q) against the character sum of twisted g values."""
    if math.gcd(q, spec.level) != 1:
        raise PreconditionError("q must be coprime to the level")
    elapsed = _timer()
    pts = _points(z)
    lhs, rhs = [], []
    for p in pts:
        if (a - b) % q == 0:
            lhs.append(0j)
            rhs.append(0j)
            continue
        lhs.append(evaluate(spec, "f", p + a / q, precision) - evaluate(spec, "f", p + b / q, precision))
        terms = difference_rhs_terms(spec, q, a, b, p, precision)
        rhs.append(spec.chi(q) / (q - 1) * sum(terms.values()))
    return CheckReport(
        "difference", {"level": spec.level, "nu": spec.nu.nu, "q": q, "a": a, "b": b},
        pts, lhs, rhs, tol,
        "f(z+a/q) - f(z+b/q) = chi(q)/(q-1) sum_{psi != psi0} psi(-N)(psi(a)-psi(b)) tau(psi) g_psi-bar(-1/(N q^2 z))",
        runtime_ms=elapsed())


def difference_from_twists(spec, q, a, b, z, precision=None):
    """The difference identity's right side rebuilt from twist-transform left sides.

    Replaces each g_psi-bar value by f_psi(z) / (chi(q) psi(-N) tau(psi)/tau(psi-bar)).
    """
    chars = character_group(q).characters()
    total = 0j
    for psi in chars[1:]:
        weight = psi(-spec.level) * (psi(a) - psi(b)) * gauss_sum(psi)
        if weight == 0:
            continue
        g_val = evaluate_twisted(spec, "f", psi, z, precision) / _twist_rhs_factor(spec, psi)
        total += weight * g_val
    return spec.chi(q) / (q - 1) * total


def trivial_spec_character(level):
    return trivial_character(level)
