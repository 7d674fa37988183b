"""Twisted Dirichlet series and the identities built on their Mellin transforms.

Direct summation is only done inside the region of absolute convergence.
Outside it, values come from the Eisenstein continuation
(:func:`continued_lambda_eisenstein`) or are refused.
"""
from __future__ import annotations

import cmath
import math
import time
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import kernels
from .characters import character_group, gauss_sum, is_prime
from .dirichlet import dirichlet_l
from .errors import (
    ConvergenceError,
    InsufficientCoefficients,
    ParameterError,
    PoleError,
    PoleOnContour,
    PreconditionError,
    QuadratureError,
    SingularSystem,
    ValidationError,
)
from .report import CheckReport
from .specfun import Precision, SpectralParam, as_nu, gamma_r, hyp2f1

CONVERGENCE_MARGIN = 0.25


def parity_of(m):
    return m % 2


# ---- coefficient sequences and twists ------------------------------------

@dataclass(frozen=True, eq=False)
class CoeffSeq:
    """Coefficients a_1, a_2, ... with a growth bound |a_n| <= C n^sigma.

    ``exact`` marks a finite sequence (zero past the stored range), so sums
    over it carry no tail.
    """

    values: np.ndarray
    sigma: float
    C: float
    exact: bool = False

    def __post_init__(self):
        vals = np.asarray(self.values, dtype=np.complex128).ravel()
        object.__setattr__(self, "values", vals)
        if vals.size < 1:
            raise ValidationError("coefficient sequence is empty")
        if not (self.C > 0):
            raise ValidationError("bound constant must be positive")
        n = np.arange(1, vals.size + 1, dtype=np.float64)
        excess = np.abs(vals) - self.C * n ** self.sigma * (1 + 1e-12)
        if np.any(excess > 0):
            bad = int(np.argmax(excess > 0)) + 1
            raise ValidationError(f"|a_{bad}| exceeds the declared bound C n^sigma")

    @classmethod
    def fit(cls, values, sigma, exact=False):
        """Smallest C that makes the bound hold on the stored range."""
        vals = np.asarray(values, dtype=np.complex128).ravel()
        n = np.arange(1, vals.size + 1, dtype=np.float64)
        C = float(np.max(np.abs(vals) / n ** sigma)) * (1 + 1e-9)
        return cls(vals, float(sigma), max(C, 1e-300), exact)

    def __len__(self):
        return self.values.size

    def __getitem__(self, n):
        """1-based access."""
        if n < 1:
            raise IndexError("coefficients are indexed from 1")
        return complex(self.values[n - 1])

    def truncated(self, n_max=None):
        """The first n_max values as a finite (exact) sequence."""
        vals = self.values if n_max is None else self.values[:n_max]
        return CoeffSeq(vals, self.sigma, self.C, exact=True)

    def scaled(self, weights):
        w = np.asarray(weights, dtype=np.complex128)
        vals = self.values * w[: self.values.size]
        return CoeffSeq(vals, self.sigma, self.C * max(1.0, float(np.max(np.abs(w)))), self.exact)


def additive_weights(alpha, k, n):
    """cos^(k)(2 pi n alpha) with n*alpha reduced exactly mod 1."""
    alpha = Fraction(alpha)
    n = np.asarray(n, dtype=np.int64)
    m = (n * alpha.numerator) % alpha.denominator
    theta = 2 * np.pi * m / alpha.denominator
    return _cos_k(theta, k)


def _cos_k(theta, k):
    k %= 4
    if k == 0:
        return np.cos(theta)
    if k == 1:
        return -np.sin(theta)
    if k == 2:
        return -np.cos(theta)
    return np.sin(theta)


def cos_k(theta, k):
    """k-th derivative of cos, cos(theta + k pi/2), evaluated without rounding the shift."""
    return _cos_k(np.asarray(theta, dtype=np.float64), k)


@dataclass(frozen=True)
class Twist:
    kind: str
    psi: object = None
    alpha: Fraction = None
    k: int = 0

    def __post_init__(self):
        if self.kind not in ("none", "multiplicative", "additive"):
            raise ParameterError(f"unknown twist kind {self.kind!r}")
        if self.kind == "multiplicative" and self.psi is None:
            raise ParameterError("multiplicative twist needs a character")
        if self.kind == "additive":
            if self.alpha is None:
                raise ParameterError("additive twist needs alpha")
            object.__setattr__(self, "alpha", Fraction(self.alpha))
            if int(self.k) != self.k or self.k < 0:
                raise ParameterError("k must be a nonnegative integer")

    @staticmethod
    def none():
        return Twist("none")

    @staticmethod
    def multiplicative(psi):
        return Twist("multiplicative", psi=psi)

    @staticmethod
    def additive(alpha, k):
        return Twist("additive", alpha=Fraction(alpha), k=int(k))

    def weights(self, n):
        n = np.asarray(n, dtype=np.int64)
        if self.kind == "none":
            return np.ones(n.shape, dtype=np.complex128)
        if self.kind == "additive":
            return additive_weights(self.alpha, self.k, n).astype(np.complex128)
        q = self.psi.modulus
        table = np.array([self.psi(r) for r in range(q)], dtype=np.complex128)
        return table[n % q]

    def gamma_shift(self, eps):
        """[k + eps], where k is the character parity or the additive index."""
        if self.kind == "multiplicative":
            return parity_of(eps + self.psi.parity)
        if self.kind == "additive":
            return parity_of(eps + self.k)
        return parity_of(eps)


@dataclass(frozen=True)
class SeriesValue:
    """A partial sum with its certified tail bound."""

    value: complex
    tail_bound: float
    terms: int

    def __complex__(self):
        return complex(self.value)


def tail_terms_required(C, sigma, re_s, abs_tol):
    """Smallest N with C N^(sigma+1-Re s)/(Re s - sigma - 1) < abs_tol."""
    gap = re_s - sigma - 1
    return int(math.ceil((C / (gap * abs_tol)) ** (1.0 / gap))) + 1


def dirichlet_sum(coeffs, twist, s, precision=None, margin=CONVERGENCE_MARGIN):
    """sum_n w_n a_n n^(-s) with w_n the twist weights."""
    precision = precision or Precision()
    s = complex(s)
    N = len(coeffs)
    if coeffs.exact:
        bound = 0.0
    else:
        if s.real < coeffs.sigma + 1 + margin:
            raise ConvergenceError(
                f"Re s = {s.real} is outside the summation region Re s >= {coeffs.sigma + 1 + margin}")
        gap = s.real - coeffs.sigma - 1
        bound = coeffs.C * N ** (-gap) / gap
        if bound >= precision.abs_tol:
            raise InsufficientCoefficients(
                tail_terms_required(coeffs.C, coeffs.sigma, s.real, precision.abs_tol), N)
    n = np.arange(1, N + 1)
    terms = twist.weights(n) * coeffs.values * np.exp(-s * np.log(n.astype(np.float64)))
    return SeriesValue(complex(np.sum(terms)), float(bound), N)


# ---- gamma factors ---------------------------------------------------------

@dataclass(frozen=True)
class GammaFactor:
    parity_shift: int
    nu: SpectralParam

    def __post_init__(self):
        if self.parity_shift not in (0, 1):
            raise ParameterError("parity shift must be 0 or 1")
        if not isinstance(self.nu, SpectralParam):
            object.__setattr__(self, "nu", SpectralParam(self.nu))

    @classmethod
    def of(cls, k, eps, nu):
        return cls(parity_of(k + eps), nu if isinstance(nu, SpectralParam) else SpectralParam(nu))


def gamma_factor(gf, s):
    """Gamma_R(s + shift + nu) Gamma_R(s + shift - nu)."""
    s = complex(s)
    nu = gf.nu.nu
    try:
        return gamma_r(s + gf.parity_shift + nu) * gamma_r(s + gf.parity_shift - nu)
    except PoleError as exc:
        raise PoleError(complex(exc.location) - gf.parity_shift - 0j) from None


def _gamma(shift, nu, s):
    return gamma_r(s + shift + nu) * gamma_r(s + shift - nu)


# ---- completed L-functions -------------------------------------------------

def completed_lambda(coeffs, twist, eps, nu, s, precision=None, assemble=False):
    """Gamma factor times the twisted sum.

    With ``assemble=True`` an additive twist a/q (q an odd prime) is built
    from the multiplicative twists mod q instead of summed directly.
    Returns a :class:`SeriesValue`.
    """
    nu = as_nu(nu)
    s = complex(s)
    if twist.kind == "additive" and assemble:
        return _assembled_additive(
            lambda t: completed_lambda(coeffs, t, eps, nu, s, precision),
            twist.alpha, twist.k)
    g = _gamma(twist.gamma_shift(eps), nu, s)
    val = dirichlet_sum(coeffs, twist, s, precision)
    return SeriesValue(g * val.value, abs(g) * val.tail_bound, val.terms)


def _check_prime_denominator(alpha):
    alpha = Fraction(alpha)
    q = alpha.denominator
    if not (is_prime(q) and q > 2):
        raise PreconditionError("character assembly needs alpha = a/q with q an odd prime")
    return alpha.numerator, q


def _assembled_additive(lam, alpha, k):
    """Character-sum form of an additive completion.

    ``lam(twist)`` must return the completed value for a twist; only
    multiplicative twists mod q and the untwisted series are requested.
    """
    a, q = _check_prime_denominator(alpha)
    chars = character_group(q).characters()
    total = 0j
    bound = 0.0
    for psi in chars[1:]:
        if psi.parity != k % 2:
            continue
        v = lam(Twist.multiplicative(psi))
        c = gauss_sum(psi.conj()) * psi(a)
        total += c * complex(v)
        bound += abs(c) * getattr(v, "tail_bound", 0.0)
    total *= 1j ** (k % 4) / (q - 1)
    bound /= q - 1
    if k % 2 == 0:
        plain = lam(Twist.none())
        principal = lam(Twist.multiplicative(chars[0]))
        sign = (-1) ** (k // 2)
        total += sign * (complex(plain) - q / (q - 1) * complex(principal))
        bound += getattr(plain, "tail_bound", 0.0) + q / (q - 1) * getattr(principal, "tail_bound", 0.0)
    return SeriesValue(total, bound, 0)


def continued_lambda_eisenstein(psi, nu, s, k=None, eps=0, level1=True):
    """Lambda_f(s, psi) for the Eisenstein coefficients, valid on all of C.

    Uses L_f(s, psi) = L(s+nu, psi) L(s-nu, psi) with each Dirichlet L
    continued through the Hurwitz zeta function.
    """
    if not level1:
        raise PreconditionError("only the level 1 Eisenstein family is continuable here")
    nu = as_nu(nu)
    s = complex(s)
    if k is None:
        k = psi.parity
    if psi.is_principal:
        for p in (nu, -nu, 1 + nu, 1 - nu):
            if abs(s - p) < 1e-6:
                raise PoleError(p)
    g = _gamma(parity_of(eps + k), nu, s)
    return g * dirichlet_l(psi, s + nu) * dirichlet_l(psi, s - nu)


def _eisenstein_lambda_twist(nu, eps, s):
    """Completed additive/multiplicative values for the continued Eisenstein family."""
    def lam(tw):
        if tw.kind == "none":
            from .characters import trivial_character
            return continued_lambda_eisenstein(trivial_character(1), nu, s, k=0, eps=eps)
        return continued_lambda_eisenstein(tw.psi, nu, s, k=tw.psi.parity, eps=eps)
    return lam


def additive_lambda_eisenstein(alpha, k, nu, s, eps=0):
    """Continued Lambda_f(s, alpha, cos^(k)) for the Eisenstein family by character assembly."""
    return complex(_assembled_additive(_eisenstein_lambda_twist(nu, eps, s), alpha, k))


def additive_fe_rhs_eisenstein(alpha, k, nu, s, eps=0, level=1, chi_q=1):
    """Right side of the additive-twist functional equation, Eisenstein family (g = f)."""
    a, q = _check_prime_denominator(alpha)
    nu = as_nu(nu)
    s = complex(s)
    chars = character_group(q).characters()
    total = 0j
    for psi in chars[1:]:
        if psi.parity != k % 2:
            continue
        total += psi(level * a) * gauss_sum(psi) * continued_lambda_eisenstein(psi.conj(), nu, 1 - s, eps=eps)
    total *= (-1) ** eps * 1j ** (k % 4) * cmath.exp((0.5 - s) * math.log(q * q * level)) * chi_q / (q - 1)
    if k % 2 == 0:
        lam = _eisenstein_lambda_twist(nu, eps, s)
        total += (-1) ** (k // 2) * (lam(Twist.none()) - q / (q - 1) * lam(Twist.multiplicative(chars[0])))
    return total


def additive_fe_residual(nu, alpha, k, s_grid, eps=0, tol=1e-7):
    """Additive-twist functional equation on a grid, Eisenstein family."""
    t0 = time.perf_counter()
    lhs, rhs = [], []
    for s in s_grid:
        lhs.append(additive_lambda_eisenstein(alpha, k, nu, s, eps))
        rhs.append(additive_fe_rhs_eisenstein(alpha, k, nu, s, eps))
    return CheckReport(
        "additive-fe", {"nu": complex(as_nu(nu)), "alpha": Fraction(alpha), "k": k, "eps": eps},
        [complex(s) for s in s_grid], lhs, rhs, tol,
        "Lambda_f(s,a/q,cos^(k)) = (-1)^eps i^k (q^2N)^(1/2-s) chi(q)/(q-1) sum psi(Na) tau(psi) Lambda_g(1-s,psi-bar) + correction",
        criterion="relative", runtime_ms=(time.perf_counter() - t0) * 1e3)


# ---- Mellin transform of K * cos -------------------------------------------

def _sign_k(k):
    return (1, -1, -1, 1)[k % 4]


def mellin_kcos(nu, eps, k, w, s, convention="verified"):
    """Closed form of 4 int_0^inf K_nu(2y) cos^(k)(2wy) y^s dy/y.

    The default carries sign (+, -, -, +) for k mod 4 and the power
    pi^(s + [k]); this is what direct quadrature gives. ``convention='printed'``
    uses i^k pi^s instead, which agrees only for even k.
    The gamma factor carries the shift [k], so ``eps`` does not change the value.
    """
    nu = as_nu(nu)
    s = complex(s)
    kk = parity_of(k)
    lead = (2 * w) ** kk
    if lead == 0:
        return 0j
    if convention == "verified":
        sign = _sign_k(k)
    elif convention == "printed":
        sign = 1j ** (k % 4)
    else:
        raise ParameterError(f"unknown convention {convention!r}")
    g = _gamma(kk, nu, s)
    f = hyp2f1((s + nu + kk) / 2, (s - nu + kk) / 2, 0.5 + kk, -w * w)
    power = s if convention == "printed" else s + kk
    return sign * lead * cmath.exp(power * math.log(math.pi)) * g * f


def _nested_trapezoid(func, lo, hi, h0, levels, tol):
    """Trapezoid in t with step halving; func maps an array of t to rows of values.

    Returns (integral, error_estimate, step). Converged when two successive
    levels agree to ``tol`` relative to (1 + |I|) in every column.
    """
    n0 = int(math.ceil((hi - lo) / h0))
    h = (hi - lo) / n0
    t = lo + h * np.arange(n0 + 1)
    vals = func(t)
    weights = np.ones(n0 + 1)
    weights[0] = weights[-1] = 0.5
    total = np.tensordot(weights, vals, axes=1)
    est = h * total
    for _ in range(levels):
        h /= 2
        mids = lo + h * (2 * np.arange(n0) + 1)
        total = total + np.sum(func(mids), axis=0)
        n0 *= 2
        new = h * total
        err = np.abs(new - est)
        est = new
        if np.all(err <= tol * (1 + np.abs(est))):
            return est, err, h
    raise QuadratureError(f"trapezoid did not settle: max error estimate {float(np.max(err)):.3e}")


def mellin_kcos_quadrature(nu, k, w, s, tol=1e-11, levels=8):
    """Direct quadrature of 4 int K_nu(2y) cos^(k)(2wy) y^s dy/y in t = log y."""
    nu = as_nu(nu)
    s = complex(s)
    kk = parity_of(k)
    decay = s.real + kk - abs(nu.real)
    if decay <= 0.05:
        raise PreconditionError("integral diverges at 0 for this s")
    lo = -(40.0 * math.log(10)) / decay
    hi = math.log(28.0 + 2 * abs(s))

    def integrand(t):
        y = np.exp(t)
        kv = kernels.bessel_k(nu, 2 * y)
        return 4 * kv * cos_k(2 * w * y, k) * np.exp(s * t)

    val, _, _ = _nested_trapezoid(integrand, lo, hi, 0.2, levels, tol)
    return complex(val)


# ---- Mellin-transform identity ---------------------------------------------

# coefficient of (2w)^[j+eps] Lambda_h(s, alpha, cos^(j)) F_[j+eps] in the identity
def mellin_identity_coefficient(eps, j, convention="verified"):
    if convention == "printed":
        return 1j ** (-j)
    m = eps + j
    return (-1j) ** eps * (-1) ** j * _sign_k(m) * math.pi ** parity_of(m)


def _whittaker_matrix(coeffs, nu, y, n_cut):
    """Rows K_nu(2 pi n y_j) for n <= N, zero where the term is negligible."""
    N = coeffs.size
    n = np.arange(1, N + 1, dtype=np.float64)
    counts = np.minimum(N, (kernels.SERIES_CUTOFF / (2 * np.pi * y)).astype(np.int64) + 1)
    mask = n[None, :] <= counts[:, None]
    u = 2 * np.pi * np.outer(y, n)
    out = np.zeros(u.shape, dtype=np.complex128)
    out[mask] = kernels.bessel_k(nu, u[mask])
    return out


_CHUNK = 128


def mellin_identity_lhs(spec, pairs, s_list, tol=1e-9, levels=7):
    """int_0^inf h(iy + wy + alpha) y^(s-1/2) dy/y for several (w, alpha) and s.

    h is the finite Whittaker series of ``spec.a``. The K-Bessel matrix is
    computed once per quadrature node and shared by every pair and s.
    Returns an array of shape (len(pairs), len(s_list)).
    """
    nu = as_nu(spec.nu)
    eps = spec.parity
    c = spec.a.values
    s_arr = np.asarray([complex(s) for s in s_list])
    decay = float(np.min(s_arr.real)) - abs(nu.real)
    if decay <= 0.05:
        raise PreconditionError("Mellin integral diverges at y -> 0 for this s")
    n = np.arange(1, c.size + 1)
    scale = float(np.sum(np.abs(c) * n ** abs(nu.real))) + 1.0
    lo = -(math.log(scale) + math.log(1e3 / tol)) / decay
    hi = math.log(kernels.SERIES_CUTOFF / (2 * math.pi)) + 1.0
    num_q = [(Fraction(a).numerator, Fraction(a).denominator) for _, a in pairs]
    pref = (-1j) ** eps

    def integrand(t):
        if t.size > _CHUNK:
            return np.concatenate([integrand(t[i:i + _CHUNK]) for i in range(0, t.size, _CHUNK)])
        y = np.exp(t)
        K = _whittaker_matrix(c, nu, y, None)
        weighted = K * c[None, :]
        cols = []
        for (w, _), (p, q) in zip(pairs, num_q):
            # n (w y + alpha) mod 1, with n*alpha reduced exactly
            frac = np.mod(np.outer(y * w, n), 1.0) + ((n * p) % q)[None, :] / q
            trig = cos_k(2 * np.pi * frac, eps)
            h = pref * 4 * np.sqrt(y) * np.sum(weighted * trig, axis=1)
            cols.append(h[:, None] * np.exp(np.outer(t, s_arr - 0.5)))
        return np.stack(cols, axis=1)

    val, _, _ = _nested_trapezoid(integrand, lo, hi, 0.2, levels, tol)
    return val


def mellin_identity_rhs(spec, w, alpha, s, convention="verified"):
    nu = as_nu(spec.nu)
    eps = spec.parity
    finite = spec.a.truncated()
    s = complex(s)
    total = 0j
    for j in (0, 1):
        m = parity_of(j + eps)
        lead = (2 * w) ** m
        if lead == 0:
            continue
        lam = completed_lambda(finite, Twist.additive(alpha, j), eps, nu, s)
        f = hyp2f1((s + nu + m) / 2, (s - nu + m) / 2, 0.5 + m, -w * w)
        total += mellin_identity_coefficient(eps, j, convention) * lead * lam.value * f
    return total


MELLIN_ANCHOR = ("int_0^inf h(iy+wy+alpha) y^(s-1/2) dy/y = "
                 "sum_j coef_j (2w)^[j+eps] Lambda_h(s,alpha,cos^(j)) 2F1((s+nu+[j+eps])/2,(s-nu+[j+eps])/2;1/2+[j+eps];-w^2)")


def mellin_identity_reports(spec, pairs, s_grid, tol=1e-6, convention="verified", quad_tol=None):
    """One report per (w, alpha) pair, sharing the quadrature work."""
    t0 = time.perf_counter()
    pairs = [(float(w), Fraction(a)) for w, a in pairs]
    s_grid = [complex(s) for s in s_grid]
    lhs = mellin_identity_lhs(spec, pairs, s_grid, tol=quad_tol or tol * 1e-3)
    elapsed = (time.perf_counter() - t0) * 1e3 / len(pairs)
    out = []
    for i, (w, a) in enumerate(pairs):
        t1 = time.perf_counter()
        rhs = [mellin_identity_rhs(spec, w, a, s, convention) for s in s_grid]
        out.append(CheckReport(
            "mellin", {"w": w, "alpha": a, "nu": complex(as_nu(spec.nu)), "eps": spec.parity,
                       "n_coeffs": len(spec.a), "convention": convention},
            s_grid, list(lhs[i]), rhs, tol, MELLIN_ANCHOR,
            runtime_ms=elapsed + (time.perf_counter() - t1) * 1e3))
    return out


def mellin_identity_residual(spec, w, alpha, s, trunc=None, tol=1e-6, convention="verified"):
    s_grid = list(s) if np.ndim(s) else [s]
    return mellin_identity_reports(spec, [(w, alpha)], s_grid, tol=tol, convention=convention)[0]


# ---- circle integral -------------------------------------------------------

def _circle_integrand(nu, eps, w, y):
    from .characters import trivial_character
    one = trivial_character(1)

    def g(s):
        lam = continued_lambda_eisenstein(one, nu, s, k=0, eps=eps)
        f = hyp2f1((s + eps + nu) / 2, (s + eps - nu) / 2, 0.5 + eps, -w * w)
        return (2 * w) ** eps * lam * f * cmath.exp((0.5 - s) * math.log(y))
    return g


def circle_integral(func, center, radius, nodes):
    """(1/2 pi i) times the counterclockwise integral over a circle, by trapezoid."""
    theta = 2 * np.pi * np.arange(nodes) / nodes
    total = 0j
    for th in theta:
        e = cmath.exp(1j * th)
        total += func(center + radius * e) * e
    return total * radius / nodes


def small_circle_residue(func, pole, radius=1e-2, nodes=64):
    return circle_integral(func, pole, radius, nodes)


def circle_integral_residual(spec, z, radius=1.25, center=0.5, nodes=512, tol=1e-7):
    """Compare the series side with the contour integral of Lambda_f F y^(1/2-s)."""
    from .maassform import evaluate_nonconstant

    if getattr(spec, "family", None) != "eisenstein":
        raise PreconditionError("the circle integral needs a continuable (Eisenstein) spec")
    t0 = time.perf_counter()
    nu = as_nu(spec.nu)
    eps = spec.parity
    z = complex(z)
    y = z.imag
    w = z.real / y
    poles = [-nu, nu, 1 + nu, 1 - nu]
    for p in poles:
        if abs(abs(p - center) - radius) < 1e-3:
            raise PoleOnContour(p)
    g = _circle_integrand(nu, eps, w, y)
    rhs = circle_integral(g, center, radius, nodes)
    image = -1 / (spec.level * z)
    lhs = evaluate_nonconstant(spec, "f", z) - evaluate_nonconstant(spec, "g", image, internal=True)
    excluded = [p for p in poles if abs(p - center) > radius]
    extra = {"center": center, "radius": radius, "nodes": nodes, "w": w, "y": y}
    status = ""
    if excluded:
        res = sum(small_circle_residue(g, p) for p in excluded)
        extra.update({
            "excluded_poles": [complex(p) for p in excluded],
            "excluded_residue_sum": res,
            "residual_with_excluded_added": abs(lhs - (rhs + res)),
        })
        status = "contract_violation"
    return CheckReport(
        "circle-integral", {"nu": complex(nu), "z": z, "level": spec.level},
        [z], [lhs], [rhs], tol,
        "f~(z) - g~(-1/Nz) = (2w)^eps/(2 pi i) oint Lambda_f(s) 2F1((s+eps+nu)/2,(s+eps-nu)/2;1/2+eps;-w^2) y^(1/2-s) ds",
        runtime_ms=(time.perf_counter() - t0) * 1e3, extra=extra, status=status)


# ---- Vandermonde -----------------------------------------------------------

@dataclass(frozen=True)
class VandermondeSystem:
    lambdas: tuple
    t0: int
    ell0: int
    coefficients: tuple

    def residuals(self):
        out = []
        for t in range(2 * self.ell0):
            acc = sum(c * lam ** (-t) for lam, c in zip(self.lambdas, self.coefficients))
            out.append(abs(acc - (1 if t == self.t0 else 0)))
        return out

    def as_dict(self):
        return dict(zip(self.lambdas, self.coefficients))


def _solve_exact(mat, rhs):
    n = len(mat)
    aug = [list(row) + [b] for row, b in zip(mat, rhs)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            raise SingularSystem("Vandermonde system is singular")
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = 1 / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * b for a, b in zip(aug[r], aug[col])]
    return [row[-1] for row in aug]


def vandermonde_coeffs(lambdas, t0, ell0):
    """Exact c with sum_lambda c_lambda lambda^(-t) = [t = t0], t < 2 ell0.

    With more lambdas than equations the least-norm solution is returned.
    """
    lams = [Fraction(x) for x in lambdas]
    if len(set(lams)) != len(lams):
        raise SingularSystem("lambdas must be distinct")
    if any(x <= 0 for x in lams):
        raise ParameterError("lambdas must be positive")
    rows = 2 * ell0
    if not (len(lams) >= rows > t0 >= 0):
        raise ParameterError("need |lambdas| >= 2 ell0 > t0 >= 0")
    A = [[lam ** (-t) for lam in lams] for t in range(rows)]
    delta = [Fraction(int(t == t0)) for t in range(rows)]
    gram = [[sum(a * b for a, b in zip(A[i], A[j])) for j in range(rows)] for i in range(rows)]
    mult = _solve_exact(gram, delta)
    coeffs = [sum(A[t][i] * mult[t] for t in range(rows)) for i in range(len(lams))]
    return VandermondeSystem(tuple(lams), t0, ell0, tuple(coeffs))


class TwistedSeries:
    """A coefficient sequence with a twist, parity and spectral parameter."""

    def __init__(self, coeffs, twist, eps, nu):
        self.coeffs = coeffs
        self.twist = twist
        self.eps = eps
        self.nu = as_nu(nu)

    def gamma(self):
        return GammaFactor(self.twist.gamma_shift(self.eps), SpectralParam(self.nu))

    def l_value(self, s, precision=None):
        return dirichlet_sum(self.coeffs, self.twist, s, precision)

    def completed(self, s, precision=None, assemble=False):
        return completed_lambda(self.coeffs, self.twist, self.eps, self.nu, s, precision, assemble)


def eisenstein_fe_residual(nu, psi, s_grid, eps=0, tol=1e-7):
    """Twisted functional equation for the level 1 Eisenstein family (g = f, chi trivial).

    Lambda_f(s, psi) = (-1)^eps psi(N) chi(q) tau(psi)/tau(psi-bar) (q^2 N)^(1/2-s) Lambda_g(1-s, psi-bar)
    """
    if not psi.primitive:
        raise PreconditionError("the twisted functional equation needs a primitive character")
    t0 = time.perf_counter()
    q = psi.modulus
    ratio = gauss_sum(psi) / gauss_sum(psi.conj()) if q > 1 else 1.0
    pts = [complex(s) for s in s_grid]
    lhs, rhs = [], []
    for s in pts:
        lhs.append(continued_lambda_eisenstein(psi, nu, s, eps=eps))
        other = continued_lambda_eisenstein(psi.conj(), nu, 1 - s, eps=eps)
        rhs.append((-1) ** eps * ratio * cmath.exp((0.5 - s) * math.log(q * q)) * other)
    return CheckReport(
        "fe-eisenstein", {"nu": complex(as_nu(nu)), "psi": psi.to_json(), "eps": eps}, pts, lhs, rhs, tol,
        "Lambda_f(s,psi) = (-1)^eps psi(N) chi(q) tau(psi)/tau(psi-bar) (q^2 N)^(1/2-s) Lambda_g(1-s,psi-bar)",
        criterion="relative", runtime_ms=(time.perf_counter() - t0) * 1e3)
