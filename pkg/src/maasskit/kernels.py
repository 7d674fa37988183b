"""Backend selection for the hot loops.

The compiled extension is used when it imports; ``MAASSKIT_PURE=1`` forces
the numpy fallback.
"""
import os

from . import _pykernels

BACKEND = "python"
SERIES_CUTOFF = _pykernels.SERIES_CUTOFF
_impl = _pykernels

if not os.environ.get("MAASSKIT_PURE"):
    try:
        from . import _ckernels as _impl  # noqa: F811

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels


def get(name):
    """Return a kernel module by name: 'cython' or 'python'."""
    if name == "python":
        return _pykernels
    from . import _ckernels

    return _ckernels


def bessel_k(nu, u):
    return _impl.bessel_k(nu, u)


def whittaker_series(coeffs, nu, y, x, eps):
    return _impl.whittaker_series(coeffs, nu, y, x, eps)
