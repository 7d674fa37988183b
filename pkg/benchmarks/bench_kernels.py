"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat 5]
"""
import argparse
import time

import numpy as np

from maasskit import kernels
from maasskit.corpus import eisenstein_coeffs


def best_of(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    py = kernels.get("python")
    try:
        cy = kernels.get("cython")
    except ImportError:
        print("compiled extension not built; only the python backend is available")
        return

    nu = 0.25 + 0j
    u = np.linspace(0.01, 60, 20000)
    coeffs = eisenstein_coeffs(nu, 2000)
    y = np.linspace(0.05, 1.5, 40)
    x = np.linspace(-0.5, 0.5, 40)

    cases = {
        "bessel_k (20000 args)": lambda m: m.bessel_k(nu, u),
        "whittaker_series (2000 terms, 40 pts)": lambda m: m.whittaker_series(coeffs, nu, y, x, 0),
    }
    print(f"{'kernel':40s} {'python ms':>10s} {'cython ms':>10s} {'speedup':>8s} {'max diff':>10s}")
    for name, call in cases.items():
        tp = best_of(lambda: call(py), args.repeat)
        tc = best_of(lambda: call(cy), args.repeat)
        diff = np.max(np.abs(np.asarray(call(py)) - np.asarray(call(cy))))
        print(f"{name:40s} {tp * 1e3:10.2f} {tc * 1e3:10.2f} {tp / tc:8.2f} {diff:10.2e}")


if __name__ == "__main__":
    main()
