"""Pure-numpy kernels: K-Bessel of real argument and Whittaker series sums.

Mirrors ``_ckernels.pyx`` exactly (same nodes, same cutoffs) so the two
backends agree to rounding.
"""
import numpy as np

STEP = 0.1
ASYMPTOTIC_FROM = 30.0
# terms with 2*pi*n*y beyond this are below 1e-40 and skipped
SERIES_CUTOFF = 95.0
_BLOCK = 2048


def _nodes_needed(u):
    x_max = np.arccosh(1.0 + 45.0 / u) + 2.0
    return np.ceil(x_max / STEP).astype(np.int64) + 1


def _k_quadrature(nu, u):
    out = np.empty(u.shape, dtype=np.complex128)
    order = np.argsort(u)
    for start in range(0, u.size, _BLOCK):
        idx = order[start:start + _BLOCK]
        ub = u[idx]
        n = int(_nodes_needed(ub.min()))
        x = np.arange(n) * STEP
        w = np.full(n, STEP)
        w[0] *= 0.5
        vals = np.exp(-np.outer(ub, np.cosh(x))) * np.cosh(nu * x)[None, :]
        out[idx] = vals @ w
    return out


def _k_asymptotic(nu, u):
    mu = 4.0 * nu * nu
    total = np.ones(u.shape, dtype=np.complex128)
    term = np.ones(u.shape, dtype=np.complex128)
    for k in range(1, 80):
        term = term * (mu - (2 * k - 1) ** 2) / (8.0 * k * u)
        total += term
        if np.all(np.abs(term) < 1e-17 * np.abs(total)):
            break
    return np.sqrt(np.pi / (2.0 * u)) * np.exp(-u) * total


def bessel_k(nu, u):
    nu = complex(nu)
    u = np.ascontiguousarray(u, dtype=np.float64)
    out = np.empty(u.shape, dtype=np.complex128)
    small = u <= ASYMPTOTIC_FROM
    if small.any():
        out[small] = _k_quadrature(nu, u[small])
    if (~small).any():
        out[~small] = _k_asymptotic(nu, u[~small])
    return out


def whittaker_series(coeffs, nu, y, x, eps):
    """Return sum_n coeffs[n-1] * K_nu(2 pi n y_j) * cos^(eps)(2 pi n x_j) per point."""
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    y = np.ascontiguousarray(y, dtype=np.float64)
    x = np.ascontiguousarray(x, dtype=np.float64)
    n_all = np.arange(1, coeffs.size + 1, dtype=np.float64)
    out = np.zeros(y.size, dtype=np.complex128)
    for j in range(y.size):
        count = min(coeffs.size, int(SERIES_CUTOFF / (2.0 * np.pi * y[j])) + 1)
        n = n_all[:count]
        kv = bessel_k(nu, 2.0 * np.pi * n * y[j])
        phase = 2.0 * np.pi * np.mod(n * x[j], 1.0)
        trig = np.cos(phase) if eps == 0 else -np.sin(phase)
        out[j] = np.sum(coeffs[:count] * kv * trig)
    return out
