"""Moebius maps on the upper half-plane and the elliptic matrices M(q, s, r).

Entries may be Fractions, in which case determinant and trace are exact.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import DegenerateFixedPoints, DomainError, ParameterError, RelationError


@dataclass(frozen=True)
class Moebius:
    a: object
    b: object
    c: object
    d: object

    def __post_init__(self):
        if not self.det > 0:
            raise ParameterError("Moebius matrix needs positive determinant")

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def trace(self):
        return self.a + self.d

    def __matmul__(self, other):
        return Moebius(self.a * other.a + self.b * other.c, self.a * other.b + self.b * other.d,
                       self.c * other.a + self.d * other.c, self.c * other.b + self.d * other.d)

    def inverse(self):
        det = self.det
        return Moebius(self.d / det, -self.b / det, -self.c / det, self.a / det)

    def floats(self):
        return tuple(float(v) for v in (self.a, self.b, self.c, self.d))

    def __call__(self, z):
        return act(self, z)

    def to_json(self):
        return [[_num(self.a), _num(self.b)], [_num(self.c), _num(self.d)]]


def _num(v):
    if isinstance(v, Fraction):
        return str(v) if v.denominator != 1 else v.numerator
    return v


IDENTITY = Moebius(1, 0, 0, 1)


def translation(r):
    return Moebius(1, Fraction(r), 0, 1)


def fricke(N):
    """z -> -1/(N z)."""
    return Moebius(0, 1, -N, 0)


def act(m, z):
    z = complex(z)
    if z.imag <= 0:
        raise DomainError("point must lie in the upper half-plane")
    a, b, c, d = m.floats()
    return (a * z + b) / (c * z + d)


def build_m(q, s, r, rtilde, N):
    """The elliptic matrix (1, 2r/q; -2N rtilde/s, -3 + 4/(qs)), needing qs = 1 + r rtilde N."""
    q, s, r, rtilde = Fraction(q), Fraction(s), Fraction(r), Fraction(rtilde)
    if q * s != 1 + r * rtilde * N:
        raise RelationError(f"q s = {q * s} differs from 1 + r rtilde N = {1 + r * rtilde * N}")
    return Moebius(Fraction(1), 2 * r / q, -2 * N * rtilde / s, -3 + 4 / (q * s))


# ---- classification ----------------------------------------------------------

@dataclass(frozen=True)
class NonElliptic:
    matrix: Moebius
    trace: object
    kind: str  # parabolic | hyperbolic

    @property
    def elliptic(self):
        return False


@dataclass(frozen=True)
class EllipticCertificate:
    matrix: Moebius
    trace: object
    fixed_point: complex
    rotation_angle: float
    infinite_order: bool
    order_tag: str

    @property
    def elliptic(self):
        return True

    def to_json(self):
        return {"matrix": self.matrix.to_json(), "trace": _num(self.trace),
                "fixed_point": {"re": self.fixed_point.real, "im": self.fixed_point.imag},
                "rotation_angle": self.rotation_angle, "infinite_order": self.infinite_order,
                "order_tag": self.order_tag}


def rational_approximation(x, max_den=10 ** 6, tol=1e-12):
    """A fraction p/q with q <= max_den and |x - p/q| < tol, or None."""
    frac = Fraction(x).limit_denominator(max_den)
    return frac if abs(float(frac) - x) < tol else None


def classify(m):
    tr, det = m.trace, m.det
    if tr * tr >= 4 * det:
        kind = "parabolic" if tr * tr == 4 * det else "hyperbolic"
        return NonElliptic(m, tr, kind)
    angle = math.acos(float(tr) / (2 * math.sqrt(float(det))))
    approx = rational_approximation(angle / math.pi)
    if approx is None:
        infinite, tag = True, "numerically irrational"
    else:
        infinite, tag = False, f"finite order: angle/pi = {approx}"
    return EllipticCertificate(m, tr, fixed_point(m), angle, infinite, tag)


def fixed_point(m):
    """The root of c z^2 + (d - a) z - b = 0 in the upper half-plane."""
    tr, det = m.trace, m.det
    if not tr * tr < 4 * det:
        raise ParameterError("fixed point in H needs an elliptic matrix")
    a, b, c, d = m.floats()
    root = math.sqrt(4 * float(det) - float(tr) ** 2)
    return complex((a - d) / (2 * c), root / (2 * abs(c)))


def fixed_point_closed_form(q, s, r, rtilde, N, variant="corrected"):
    """Closed form for the fixed point of M(q, s, r).

    'corrected' is what the quadratic formula gives: real part -r/q and
    Im^2 = -s^2 (1/(qs) - 1)^2/(N rtilde)^2 + r s/(q N rtilde).
    'printed' has real part +r/q and a factor 4 on the second term.
    """
    q, s, r, c = float(q), float(s), float(r), float(rtilde)
    first = -(s ** 2) * (1 / (q * s) - 1) ** 2 / (N * N * c * c)
    shift = -s * (1 / (q * s) - 1) / (N * c)
    if variant == "corrected":
        return complex(-shift, math.sqrt(first + r * s / (q * N * c)))
    if variant == "printed":
        return complex(shift, math.sqrt(first + 4 * r * s / (q * N * c)))
    raise ParameterError(f"unknown variant {variant!r}")


def admissible_from_gamma(a, b, c, d, N, u, v):
    """(q, s, r, rtilde) built from (a, b; Nc, d) with q = a - uNc, s = d - vNc."""
    if a * d - b * N * c != 1:
        raise RelationError("(a, b; Nc, d) must have determinant 1")
    q = a - u * N * c
    s = d - v * N * c
    r = b - a * v + u * v * N * c - u * d
    return q, s, r, c


# ---- Cayley transform and metric ------------------------------------------------

class Cayley:
    """z -> (z - z0)/(z - conj z0), sending z0 to 0 and H onto the unit disk."""

    def __init__(self, z0):
        z0 = complex(z0)
        if z0.imag <= 0:
            raise DomainError("Cayley centre must lie in H")
        self.z0 = z0
        self.matrix = np.array([[1, -z0], [1, -z0.conjugate()]], dtype=np.complex128)

    def __call__(self, z):
        z = np.asarray(z, dtype=np.complex128)
        return (z - self.z0) / (z - self.z0.conjugate())

    def inverse(self, w):
        w = np.asarray(w, dtype=np.complex128)
        return (self.z0 - self.z0.conjugate() * w) / (1 - w)

    def conjugate(self, m):
        """K M K^-1 as a complex 2x2 array."""
        mat = np.array([[m.a, m.b], [m.c, m.d]], dtype=np.float64).astype(np.complex128)
        return self.matrix @ mat @ np.linalg.inv(self.matrix)


def cayley(z0):
    return Cayley(z0)


def hyp_distance(z1, z2):
    z1, z2 = complex(z1), complex(z2)
    if z1.imag <= 0 or z2.imag <= 0:
        raise DomainError("points must lie in H")
    return 2 * math.asinh(abs(z1 - z2) / (2 * math.sqrt(z1.imag * z2.imag)))


def orbit_max_gap(angle, iterates=10 ** 4):
    """Largest gap on the circle left by {k angle mod 2 pi : 0 <= k <= iterates}."""
    pts = np.sort(np.mod(angle * np.arange(iterates + 1), 2 * math.pi))
    gaps = np.diff(np.concatenate([pts, [pts[0] + 2 * math.pi]]))
    return float(np.max(gaps))


# ---- two circles -----------------------------------------------------------------

def geodesic_midpoint(z1, z2):
    K = Cayley(z1)
    w = complex(K(z2))
    d = hyp_distance(z1, z2)
    return complex(K.inverse(math.tanh(d / 4) * w / abs(w)))


def disk_grid(center, radius=2.0, n_radial=40, n_angular=40):
    """Points at hyperbolic distance radius*(i+1)/n_radial from center, in n_angular directions."""
    K = Cayley(center)
    rho = radius * (np.arange(n_radial) + 1) / n_radial
    phi = 2 * math.pi * np.arange(n_angular) / n_angular
    w = (np.tanh(rho / 2)[:, None] * np.exp(1j * phi)[None, :]).ravel()
    return K.inverse(w)


@dataclass
class TwoCirclesVerdict:
    verdict: str
    defect_m1: float
    defect_m2: float
    spread: float
    eps: float
    delta: float
    lipschitz: float
    fixed_points: tuple
    grid_size: int
    extra: dict = field(default_factory=dict)

    @property
    def passed(self):
        return self.verdict != "invariant but not constant"

    def to_json(self):
        return {"verdict": self.verdict, "defect_m1": self.defect_m1, "defect_m2": self.defect_m2,
                "spread": self.spread, "eps": self.eps, "delta": self.delta, "lipschitz": self.lipschitz,
                "fixed_points": [{"re": z.real, "im": z.imag} for z in self.fixed_points],
                "grid_size": self.grid_size, "extra": self.extra}


def _certificate(m):
    if isinstance(m, EllipticCertificate):
        return m
    cert = classify(m)
    if not cert.elliptic:
        raise ParameterError("two-circles test needs elliptic matrices")
    return cert


def two_circles_test(h, m1, m2, grid=None, eps=1e-9, lipschitz=1.0):
    """Invariance defects of h under m1, m2 and its spread on a grid.

    If both defects are below eps the spread must be below lipschitz*eps,
    otherwise the verdict names the matrix that h fails to respect.
    """
    c1, c2 = _certificate(m1), _certificate(m2)
    z1, z2 = c1.fixed_point, c2.fixed_point
    if abs(z1 - z2) <= 1e-6:
        raise DegenerateFixedPoints("the two fixed points coincide")
    if grid is None:
        grid = disk_grid(geodesic_midpoint(z1, z2))
    grid = np.asarray(grid, dtype=np.complex128).ravel()
    vals = np.array([h(z) for z in grid], dtype=np.complex128)
    img1 = np.array([h(act(c1.matrix, z)) for z in grid], dtype=np.complex128)
    img2 = np.array([h(act(c2.matrix, z)) for z in grid], dtype=np.complex128)
    d1 = float(np.max(np.abs(img1 - vals)))
    d2 = float(np.max(np.abs(img2 - vals)))
    spread = float(np.max(np.abs(vals - np.mean(vals))))
    delta = lipschitz * eps
    inv1, inv2 = d1 < eps, d2 < eps
    if inv1 and inv2:
        verdict = "consistent with constant" if spread < delta else "invariant but not constant"
    elif inv1:
        verdict = "not invariant under m2"
    elif inv2:
        verdict = "not invariant under m1"
    else:
        verdict = "not invariant"
    return TwoCirclesVerdict(verdict, d1, d2, spread, eps, delta, lipschitz, (z1, z2), grid.size)


def sample_family(name, center=None):
    """Sample functions for the two-circles suite: constant, radial around center, imag."""
    if name == "constant":
        return lambda z: 1.0
    if name == "radial":
        if center is None:
            raise ParameterError("radial family needs a centre")
        return lambda z: math.exp(-hyp_distance(z, center) ** 2)
    if name == "imag":
        return lambda z: complex(z).imag
    raise ParameterError(f"unknown family {name!r}")


def default_pair():
    """M(3,5,2) with rtilde = 7 and M(7,3,4) with rtilde = 5, both at N = 1."""
    return build_m(3, 5, 2, 7, 1), build_m(7, 3, 4, 5, 1)
