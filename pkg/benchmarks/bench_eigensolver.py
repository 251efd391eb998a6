#!/usr/bin/env python3
"""Time the eigensolver backends on circular-ensemble members.

    python benchmarks/bench_eigensolver.py [--sizes 32,64,128,256] [--repeat 3]

The numba column excludes JIT compilation (one warm-up call first). The
max |diff| column compares each backend's eigenvalues with the numba run.
"""
import argparse
import time

import numpy as np

from specergo.core import eigenvalues
from specergo.ensembles import chunk_stream, sample

BACKENDS = ("numba", "numpy", "lapack")


def best_time(fn, repeat):
    best = np.inf
    out = None
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        best = min(best, time.perf_counter() - t0)
    return best, out


def main():
    p = argparse.ArgumentParser()
    p.add_argument("--sizes", default="32,64,128,256")
    p.add_argument("--kind", default="COE")
    p.add_argument("--repeat", type=int, default=3)
    args = p.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    t0 = time.perf_counter()
    eigenvalues(np.eye(3), backend="numba")
    print(f"numba warm-up (compile or cache load): {time.perf_counter() - t0:.2f}s\n")

    head = f"{'n':>6}" + "".join(f"{b + ' (s)':>14}" for b in BACKENDS)
    print(head + f"{'numpy/numba':>13}{'max |diff|':>12}")
    print("-" * len(head) + "-" * 25)
    for n in sizes:
        a = sample(args.kind, n, chunk_stream(n))
        times, vals = {}, {}
        for b in BACKENDS:
            times[b], sp = best_time(lambda: eigenvalues(a, backend=b), args.repeat)
            vals[b] = sp.values
        diff = max(np.max(np.abs(vals[b] - vals["numba"])) for b in BACKENDS)
        row = f"{n:>6}" + "".join(f"{times[b]:>14.4f}" for b in BACKENDS)
        print(row + f"{times['numpy'] / times['numba']:>12.1f}x{diff:>12.1e}")


if __name__ == "__main__":
    main()
