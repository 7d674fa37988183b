# Compiled twin of _pykernels.py; same nodes and cutoffs.
import numpy as np
cimport numpy as cnp
from libc.math cimport exp, cosh, sinh, cos, sin, acosh, ceil, sqrt, fmod, fabs, M_PI

cdef double STEP = 0.1
cdef double ASYMPTOTIC_FROM = 30.0
cdef double SERIES_CUTOFF = 95.0


cdef double[::1] _COSH_NODES = np.cosh(np.arange(4096) * 0.1)


cdef long _nodes(double u) noexcept nogil:
    return <long>ceil((acosh(1.0 + 45.0 / u) + 2.0) / STEP) + 1


cdef double complex _k_quad(double complex[::1] table, double u) noexcept nogil:
    # table[i] = cosh(nu * i * STEP), long enough for the smallest u of the call
    cdef long n = _nodes(u)
    cdef long i
    cdef double complex acc = 0.5 * exp(-u) * table[0]
    for i in range(1, n):
        acc = acc + exp(-u * _COSH_NODES[i]) * table[i]
    return STEP * acc


cdef double complex _k_asym(double complex nu, double u) noexcept nogil:
    cdef double complex mu = 4.0 * nu * nu
    cdef double complex total = 1.0
    cdef double complex term = 1.0
    cdef int k
    for k in range(1, 80):
        term = term * (mu - (2 * k - 1) * (2 * k - 1)) / (8.0 * k * u)
        total = total + term
        if abs(term) < 1e-17 * abs(total):
            break
    return sqrt(M_PI / (2.0 * u)) * exp(-u) * total


cdef inline double complex _k(double complex nu, double complex[::1] table, double u) noexcept nogil:
    if u <= ASYMPTOTIC_FROM:
        return _k_quad(table, u)
    return _k_asym(nu, u)


def _cosh_table(nu, double u_min):
    cdef long n = _nodes(min(u_min, ASYMPTOTIC_FROM))
    if n > _COSH_NODES.shape[0]:
        raise ValueError("argument too close to zero for the K-Bessel quadrature")
    x = np.arange(n) * STEP
    return np.ascontiguousarray(np.cosh(complex(nu) * x), dtype=np.complex128)


def bessel_k(nu, u):
    cdef double complex cnu = complex(nu)
    cdef double[::1] uv = np.ascontiguousarray(u, dtype=np.float64).ravel()
    out = np.empty(uv.shape[0], dtype=np.complex128)
    cdef double complex[::1] ov = out
    cdef double complex[::1] table = _cosh_table(cnu, np.min(uv) if uv.shape[0] else 1.0)
    cdef Py_ssize_t i
    with nogil:
        for i in range(uv.shape[0]):
            ov[i] = _k(cnu, table, uv[i])
    return out.reshape(np.shape(u))


def whittaker_series(coeffs, nu, y, x, int eps):
    cdef double complex[::1] c = np.ascontiguousarray(coeffs, dtype=np.complex128)
    cdef double[::1] yv = np.ascontiguousarray(y, dtype=np.float64)
    cdef double[::1] xv = np.ascontiguousarray(x, dtype=np.float64)
    cdef double complex cnu = complex(nu)
    out = np.zeros(yv.shape[0], dtype=np.complex128)
    cdef double complex[::1] ov = out
    cdef double complex[::1] table = _cosh_table(cnu, 2.0 * M_PI * np.min(yv) if yv.shape[0] else 1.0)
    cdef Py_ssize_t j, n, count
    cdef double phase, trig
    cdef double complex acc
    with nogil:
        for j in range(yv.shape[0]):
            count = <Py_ssize_t>(SERIES_CUTOFF / (2.0 * M_PI * yv[j])) + 1
            if count > c.shape[0]:
                count = c.shape[0]
            acc = 0.0
            for n in range(1, count + 1):
                phase = 2.0 * M_PI * fmod(n * xv[j], 1.0)
                if eps == 0:
                    trig = cos(phase)
                else:
                    trig = -sin(phase)
                acc = acc + c[n - 1] * _k(cnu, table, 2.0 * M_PI * n * yv[j]) * trig
            ov[j] = acc
    return out
