"""Dirichlet L-functions continued through the Hurwitz zeta function."""
import cmath
import math

from .errors import PoleError
from .specfun import hurwitz_zeta

# near s = 1 the Hurwitz poles cancel only in the character sum, so a
# non-principal L is taken as its mean over a small circle there
_NEAR_ONE = 1e-3
_CIRCLE_RADIUS = 0.05
_CIRCLE_NODES = 32


def _hurwitz_sum(psi, s):
    q = psi.modulus
    total = 0j
    for a in range(1, q + 1):
        v = psi(a)
        if v:
            total += v * hurwitz_zeta(s, a / q)
    return cmath.exp(-s * math.log(q)) * total


def dirichlet_l(psi, s):
    """L(s, psi) = q^(-s) sum_{a=1}^q psi(a) zeta(s, a/q), any character mod q."""
    s = complex(s)
    near_one = abs(s - 1) < _NEAR_ONE
    if psi.is_principal:
        if abs(s - 1) < 1e-15:
            raise PoleError(1)
        return _hurwitz_sum(psi, s)
    if not near_one:
        return _hurwitz_sum(psi, s)
    total = 0j
    for k in range(_CIRCLE_NODES):
        total += _hurwitz_sum(psi, s + _CIRCLE_RADIUS * cmath.exp(2j * math.pi * (k + 0.5) / _CIRCLE_NODES))
    return total / _CIRCLE_NODES
