"""Time the compiled and numpy samplers on the same workload.

Usage: python3 benchmarks/bench_kernels.py [--paths N] [--repeat R]
"""

import argparse
import math
import time

import numpy as np

from eps_pricing import kernels
from eps_pricing.mc_oracle import poisson_cdf_table

CASES = {
    "unconditional lambda=0.5": (kernels.MODE_POISSON, 0),
    "exactly 2 jumps": (kernels.MODE_FIXED, 2),
    "at most one jump": (kernels.MODE_AT_MOST_ONE, 0),
}


def bench(sampler, paths, mode, fixed_n, repeat):
    table = poisson_cdf_table(0.5)
    drift = (0.015 - 0.5 * 0.04) * 1.0
    best = math.inf
    for _ in range(repeat):
        t0 = time.perf_counter()
        sampler(12345, 0, paths, drift, 0.2, -0.2, 0.1, mode, table, fixed_n, 1 / 1.5, False)
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--paths", type=int, default=10**6)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = ["numpy"]
    try:
        kernels.get_sampler("cython")
        backends.insert(0, "cython")
    except ImportError:
        print("compiled kernel not built; timing numpy only")

    print(f"{'case':28s} " + " ".join(f"{b:>10s}" for b in backends) + "   speedup")
    for name, (mode, n) in CASES.items():
        times = [bench(kernels.get_sampler(b), args.paths, mode, n, args.repeat) for b in backends]
        speed = f"{times[-1] / times[0]:8.1f}x" if len(times) == 2 else ""
        print(f"{name:28s} " + " ".join(f"{t:9.3f}s" for t in times) + "  " + speed)

    if len(backends) == 2:
        table = poisson_cdf_table(0.5)
        args_ = (7, 0, 200_000, -0.005, 0.2, -0.2, 0.1, kernels.MODE_POISSON, table, 0, 0.0, False)
        a = kernels.get_sampler("cython")(*args_)
        b = kernels.get_sampler("numpy")(*args_)
        print(f"max |log S_T| difference: {np.max(np.abs(a[0] - b[0])):.2e}; "
              f"jump counts identical: {np.array_equal(a[1], b[1])}")


if __name__ == "__main__":
    main()
