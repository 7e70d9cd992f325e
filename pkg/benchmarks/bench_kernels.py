"""Benchmark the compiled kernels against the pure-numpy fallback.

Usage: python benchmarks/bench_kernels.py [node_count ...]
"""

import sys
import time

import numpy as np

from gcflow import _kernels_py

try:
    from gcflow import _kernels_cy
except ImportError:
    _kernels_cy = None


def _time(fn, *args, repeat=200):
    best = np.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - t0)
    return best


def bench(node_count):
    rng = np.random.default_rng(0)
    s = 1.0 + 0.1 * rng.standard_normal(node_count)
    s_tt = -0.1 * rng.standard_normal(node_count)
    h11 = 1.0 + 0.05 * rng.standard_normal(node_count)
    h12 = 0.05 * rng.standard_normal(node_count)
    h22 = 1.0 + 0.05 * rng.standard_normal(node_count)
    sigma = s + 0.5
    cases = [
        ("curvature_2d", (s, s_tt)),
        ("curvature_3d", (s, h11, h12, h22)),
        ("shrink_step", (s, sigma, 1e-6)),
    ]
    print(f"\nnode_count = {node_count}")
    print(f"{'kernel':14s} {'numpy':>12s} {'cython':>12s} {'speedup':>9s}")
    for name, args in cases:
        t_py = _time(getattr(_kernels_py, name), *args)
        if _kernels_cy is None:
            print(f"{name:14s} {t_py * 1e6:10.2f}us {'n/a':>12s}")
            continue
        t_cy = _time(getattr(_kernels_cy, name), *args)
        out_py = getattr(_kernels_py, name)(*args)
        out_cy = getattr(_kernels_cy, name)(*args)
        if isinstance(out_py, tuple):
            assert all(np.allclose(a, b) for a, b in zip(out_py, out_cy))
        else:
            assert np.allclose(out_py, out_cy)
        print(
            f"{name:14s} {t_py * 1e6:10.2f}us {t_cy * 1e6:10.2f}us {t_py / t_cy:8.2f}x"
        )


if __name__ == "__main__":
    sizes = [int(a) for a in sys.argv[1:]] or [128, 512, 4608]
    if _kernels_cy is None:
        print("compiled extension not available; timing fallback only")
    for size in sizes:
        bench(size)
