"""Benchmark the hot kernels on both backends.

Runs each kernel through the plain-numpy implementation and, when numba is
importable, the JIT-compiled twin, then prints per-call timings and the
speedup. Sizes mirror the heavy spots in the test suite: many RK4 steps on
small systems, repeated small eigendecompositions, and pairwise scans.

    python benchmarks/bench_kernels.py [--repeats N]
"""

import argparse
import time

import numpy as np

from swarmcast._kernels import BACKENDS


def time_call(fn, args, repeats):
    fn(*args)  # warm (JIT compile / cache touch)
    t0 = time.perf_counter()
    for _ in range(repeats):
        fn(*args)
    return (time.perf_counter() - t0) / repeats


def build_cases(rng):
    n = 12
    a = rng.normal(size=(n, n))
    sym = np.ascontiguousarray(a + a.T)
    L = np.ascontiguousarray(np.diag(np.abs(a).sum(1)) - np.abs(a))
    b = (rng.random(n) < 0.4).astype(float)
    x0 = rng.normal(size=n)
    y0 = rng.normal(size=n)
    big_x = rng.normal(size=120)
    big_y = rng.normal(size=120)
    return {
        "jacobi_eigh (12x12)": ("jacobi_eigh", (sym, 1e-14)),
        "rk4_advance (n=12, 5000 steps)": (
            "rk4_advance",
            (L, b, 1.0, -0.5, x0, y0, 1e-3, 5000),
        ),
        "pairwise_dist2 (n=120)": ("pairwise_dist2", (big_x, big_y)),
    }


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeats", type=int, default=20)
    args = ap.parse_args()

    rng = np.random.default_rng(0)
    cases = build_cases(rng)
    names = list(BACKENDS)
    print(f"backends: {', '.join(names)}   repeats: {args.repeats}")
    header = f"{'kernel':<34}" + "".join(f"{n:>14}" for n in names)
    if len(names) == 2:
        header += f"{'speedup':>10}"
    print(header)
    print("-" * len(header))
    for label, (key, call_args) in cases.items():
        per = []
        for backend in names:
            per.append(time_call(BACKENDS[backend][key], call_args, args.repeats))
        row = f"{label:<34}" + "".join(f"{p * 1e3:>11.3f} ms" for p in per)
        if len(per) == 2:
            row += f"{per[0] / per[1]:>9.1f}x"
        print(row)


if __name__ == "__main__":
    main()
