"""Compare the numba kernels against their pure-numpy fallbacks.

Run:  python benchmarks/bench_kernels.py
The same workloads run through both backends (NNAPPROX_BACKEND only picks
the default; here each path is invoked explicitly).
"""

import os
import sys
import time

sys.path.insert(0, os.path.join(os.path.dirname(__file__), "..", "src"))

import numpy as np

from nnapprox import _kernels, build_mon, build_mult, build_multr, build_sq, evaluate


def timeit(fn, repeats=3):
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def bench_eval(name, net, x):
    rows = []
    if _kernels.HAVE_NUMBA:
        evaluate(net, x[:64], backend="numba")  # JIT warmup
        rows.append(("numba", timeit(lambda: evaluate(net, x, backend="numba"))))
    rows.append(("numpy", timeit(lambda: evaluate(net, x, backend="numpy"))))
    for backend, secs in rows:
        print(f"  {name:34s} {backend:6s} {secs * 1e3:10.1f} ms")
    if len(rows) == 2:
        print(f"  {'':34s} ratio  {rows[1][1] / rows[0][1]:10.1f} x")


def bench_cover(vectors, eps):
    rows = []
    if _kernels.HAVE_NUMBA:
        _kernels.greedy_cover(vectors[:16], eps, backend="numba")
        rows.append(("numba", timeit(lambda: _kernels.greedy_cover(vectors, eps, backend="numba"))))
    rows.append(("numpy", timeit(lambda: _kernels.greedy_cover(vectors, eps, backend="numpy"))))
    for backend, secs in rows:
        print(f"  {'greedy cover 5000x32':34s} {backend:6s} {secs * 1e3:10.1f} ms")
    if len(rows) == 2:
        print(f"  {'':34s} ratio  {rows[1][1] / rows[0][1]:10.1f} x")


def main():
    print(f"numba available: {_kernels.HAVE_NUMBA}; default backend: {_kernels.backend_name()}")
    rng = np.random.default_rng(0)

    x = np.linspace(0, 1, 100000)
    print("network evaluation (100k points):")
    bench_eval("sq m=10 (narrow chain)", build_sq(10), np.column_stack([np.ones_like(x), x]))

    xy = rng.uniform(0, 1, (100000, 2))
    bench_eval("mult m=8 rescaled", build_mult(8, "rescaled"), np.column_stack([np.ones(len(xy)), xy]))

    x8 = rng.uniform(0, 0.5, (100000, 8))
    bench_eval("multr r=8 m=7 literal", build_multr(7, 8, "literal"), np.column_stack([np.ones(len(x8)), x8]))

    x2 = rng.uniform(0, 1, (10000, 2))
    bench_eval("mon m=6 gamma=4 d=2 (10k points)", build_mon(6, 4, 2, "rescaled"), np.column_stack([np.ones(len(x2)), x2]))

    print("covering oracle:")
    bench_cover(rng.normal(size=(5000, 32)), 0.5)


if __name__ == "__main__":
    main()
