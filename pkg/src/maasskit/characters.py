"""Dirichlet characters with exact values.

A character mod q is stored as an exponent vector against a fixed list of
generators of (Z/q)^x. Its value at n is e(angle) with ``angle`` an exact
fraction, kept as an integer numerator over the group exponent.
"""
from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .errors import ParameterError


def factorize(n):
    out = {}
    p = 2
    while p * p <= n:
        while n % p == 0:
            out[p] = out.get(p, 0) + 1
            n //= p
        p += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def is_prime(n):
    if n < 2:
        return False
    return factorize(n) == {n: 1}


def euler_phi(n):
    out = n
    for p in factorize(n):
        out = out // p * (p - 1)
    return out


def _primitive_root(pk, p):
    phi = euler_phi(pk)
    primes = list(factorize(phi))
    for g in range(2, pk):
        if math.gcd(g, p) != 1:
            continue
        if all(pow(g, phi // r, pk) != 1 for r in primes):
            return g
    return 1


def _crt_lift(residue, modulus, q):
    """Element of Z/q congruent to residue mod `modulus` and to 1 mod q/modulus."""
    other = q // modulus
    if other == 1:
        return residue % q
    # x = residue + modulus*t with x = 1 mod other
    t = ((1 - residue) * pow(modulus, -1, other)) % other
    return (residue + modulus * t) % q


@dataclass(frozen=True)
class CharacterGroup:
    modulus: int
    generators: tuple  # ((residue, order), ...)
    exponent: int
    log_table: dict = field(repr=False, compare=False)

    @property
    def order(self):
        return math.prod(o for _, o in self.generators)

    def characters(self):
        """All characters, lexicographic in exponent vectors."""
        ranges = [range(o) for _, o in self.generators]
        return [DirichletCharacter(self.modulus, tuple(v)) for v in itertools.product(*ranges)]

    def __iter__(self):
        return iter(self.characters())

    def __len__(self):
        return self.order


@lru_cache(maxsize=None)
def character_group(q):
    if q < 1:
        raise ParameterError("modulus must be positive")
    gens = []
    for p, e in sorted(factorize(q).items()):
        pk = p ** e
        if p == 2:
            if e == 1:
                continue
            gens.append((_crt_lift(pk - 1, pk, q), 2))
            if e >= 3:
                gens.append((_crt_lift(5, pk, q), 2 ** (e - 2)))
        else:
            gens.append((_crt_lift(_primitive_root(pk, p), pk, q), euler_phi(pk)))
    exponent = 1
    for _, o in gens:
        exponent = exponent * o // math.gcd(exponent, o)
    # discrete logs by enumeration of the group
    table = {}
    for vec in itertools.product(*[range(o) for _, o in gens]):
        r = 1
        for (g, _), k in zip(gens, vec):
            r = r * pow(g, k, q) % q
        table[r % q if q > 1 else 0] = vec
    return CharacterGroup(q, tuple(gens), exponent, table)


@dataclass(frozen=True)
class DirichletCharacter:
    modulus: int
    exponent_vector: tuple

    def __post_init__(self):
        object.__setattr__(self, "exponent_vector", tuple(int(v) for v in self.exponent_vector))
        grp = character_group(self.modulus)
        if len(self.exponent_vector) != len(grp.generators):
            raise ParameterError(f"exponent vector needs {len(grp.generators)} entries for modulus {self.modulus}")
        for v, (_, o) in zip(self.exponent_vector, grp.generators):
            if not 0 <= v < o:
                raise ParameterError(f"exponent {v} out of range for generator order {o}")

    @property
    def group(self):
        return character_group(self.modulus)

    def angle(self, n):
        """Exact angle in [0, 1) with psi(n) = e(angle), or None if gcd(n, q) > 1."""
        q = self.modulus
        if q == 1:
            return Fraction(0)
        if math.gcd(n, q) != 1:
            return None
        logs = self.group.log_table[n % q]
        total = Fraction(0)
        for k, e, (_, o) in zip(logs, self.exponent_vector, self.group.generators):
            total += Fraction(k * e, o)
        return total - math.floor(total)

    def __call__(self, n):
        a = self.angle(n)
        if a is None:
            return 0j
        return _root_of_unity(a)

    @property
    def is_principal(self):
        return all(v == 0 for v in self.exponent_vector)

    @property
    def parity(self):
        """0 for even, 1 for odd."""
        return 0 if self.angle(-1) == 0 else 1

    @property
    def conductor(self):
        return _conductor(self)

    @property
    def primitive(self):
        return self.conductor == self.modulus

    def conj(self):
        grp = self.group
        return DirichletCharacter(self.modulus, tuple((-v) % o for v, (_, o) in zip(self.exponent_vector, grp.generators)))

    def __mul__(self, other):
        if other.modulus != self.modulus:
            raise ParameterError("characters must share a modulus")
        grp = self.group
        return DirichletCharacter(self.modulus, tuple((u + v) % o for u, v, (_, o) in zip(self.exponent_vector, other.exponent_vector, grp.generators)))

    def order(self):
        return max((a.denominator for a in (self.angle(r) for r in self.group.log_table)), default=1)

    def to_json(self):
        return {"modulus": self.modulus, "exponent_vector": list(self.exponent_vector)}

    @classmethod
    def from_json(cls, obj):
        return cls(int(obj["modulus"]), tuple(obj["exponent_vector"]))

    def label(self):
        return f"{self.modulus}:{','.join(map(str, self.exponent_vector))}"


def _root_of_unity(frac):
    # exact for the common quarter turns
    table = {Fraction(0): 1 + 0j, Fraction(1, 4): 1j, Fraction(1, 2): -1 + 0j, Fraction(3, 4): -1j}
    if frac in table:
        return table[frac]
    return cmath.exp(2j * math.pi * frac)


@lru_cache(maxsize=None)
def _conductor(psi):
    q = psi.modulus
    for d in sorted(_divisors(q)):
        if all(psi.angle(n) == 0 for n in psi.group.log_table if n % d == 1 % d):
            return d
    return q


def _divisors(n):
    return [d for d in range(1, n + 1) if n % d == 0]


def trivial_character(q=1):
    return character_group(q).characters()[0]


def principal_character(q):
    return trivial_character(q)


def primitive_characters(q):
    return [psi for psi in character_group(q).characters() if psi.primitive]


def quadratic_character(q):
    """The real non-principal character mod an odd prime q."""
    for psi in character_group(q).characters():
        if not psi.is_principal and psi.order() == 2:
            return psi
    raise ParameterError(f"no quadratic character mod {q}")


def gauss_sum(psi):
    q = psi.modulus
    total = 0j
    for a in range(q):
        v = psi(a)
        if v:
            total += v * cmath.exp(2j * math.pi * a / q)
    return total


# ---- exact orthogonality -------------------------------------------------

@lru_cache(maxsize=None)
def cyclotomic(n):
    """Integer coefficients (low degree first) of the n-th cyclotomic polynomial."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in _divisors(n):
        if d < n:
            num = _poly_div_exact(num, cyclotomic(d))
    return tuple(num)


def _poly_div_exact(num, den):
    num = list(num)
    out = [0] * (len(num) - len(den) + 1)
    for i in range(len(out) - 1, -1, -1):
        coef = num[i + len(den) - 1] // den[-1]
        out[i] = coef
        for j, d in enumerate(den):
            num[i + j] -= coef * d
    if any(num):
        raise ArithmeticError("inexact polynomial division")
    return out


def _poly_mod(num, den):
    num = list(num)
    for i in range(len(num) - len(den), -1, -1):
        coef = num[i + len(den) - 1]
        if coef:
            for j, d in enumerate(den):
                num[i + j] -= coef * d
    return num[: len(den) - 1]


def exact_character_sum(angles, exponent):
    """Exact value of sum e(angle) as an integer, or None if it is irrational.

    Works in Z[x]/Phi_E(x) with x = e(1/E).
    """
    counts = [0] * exponent
    for a in angles:
        k = a * exponent
        if k.denominator != 1:
            raise ParameterError("angle not a multiple of 1/exponent")
        counts[int(k) % exponent] += 1
    phi = cyclotomic(exponent)
    rem = _poly_mod(counts, list(phi)) if len(counts) >= len(phi) else counts
    if any(rem[1:]):
        return None
    return rem[0] if rem else 0


def orthogonality_sum(psi1, psi2):
    """sum_a psi1(a) conj(psi2(a)) over a mod q, computed exactly."""
    prod = psi1 * psi2.conj()
    grp = prod.group
    angles = [prod.angle(r) for r in grp.log_table]
    return exact_character_sum(angles, grp.exponent)


# ---- additive <-> multiplicative ------------------------------------------

def cos_sin_decomposition_residual(n, a, q, kind):
    """|LHS - RHS| for the cos/sin expansion of e(na/q) over characters mod prime q."""
    if not is_prime(q) or q == 2:
        raise ParameterError("q must be an odd prime")
    if math.gcd(a, q) != 1:
        raise ParameterError("a must be coprime to q")
    chars = character_group(q).characters()
    principal = chars[0]
    if kind == "cos":
        lhs = math.cos(2 * math.pi * n * a / q)
        rhs = 1 - q / (q - 1) * principal(n).real
        for psi in chars[1:]:
            if psi.parity == 0:
                rhs += gauss_sum(psi.conj()) * psi(a * n) / (q - 1)
    elif kind == "sin":
        lhs = math.sin(2 * math.pi * n * a / q)
        rhs = 0j
        for psi in chars:
            if psi.parity == 1:
                rhs += gauss_sum(psi.conj()) * psi(a * n)
        rhs *= -1j / (q - 1)
    else:
        raise ParameterError("kind must be 'cos' or 'sin'")
    return abs(lhs - rhs)
