#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

Times the dense solver and the Jacobi eigensolver on random
Laplacian-like systems and reports the speedup, verifying on the way that
both backends return bit-identical results.

Usage: python benchmarks/bench_backends.py [--sizes 50 100 200] [--repeats 3]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from rank_forge import _pykernels

try:
    from rank_forge import _core
except ImportError:
    _core = None


def laplacian_system(rng: np.random.Generator, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Connected-graph Laplacian with its last row replaced by ones, plus a
    compatible zero-sum right-hand side: the shape of a real rating solve."""
    adjacency = (rng.random((n, n)) < 0.3).astype(float)
    adjacency = np.triu(adjacency, 1)
    for i in range(1, n):  # spanning path keeps it connected
        adjacency[i - 1, i] = 1.0
    adjacency = adjacency + adjacency.T
    laplacian = np.diag(adjacency.sum(axis=1)) - adjacency
    replaced = laplacian.copy()
    replaced[-1, :] = 1.0
    rhs = rng.normal(size=n)
    rhs -= rhs.mean()
    rhs[-1] = 0.0
    return replaced, rhs


def timeit(fn, repeats: int) -> float:
    best = float("inf")
    for _ in range(repeats):
        started = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - started)
    return best


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[50, 100, 200])
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()

    if _core is None:
        print("compiled kernels not available; only timing the pure-Python fallback")

    rng = np.random.default_rng(0)
    header = f"{'kernel':<10} {'n':>5} {'python':>12} {'compiled':>12} {'speedup':>9}  identical"
    print(header)
    print("-" * len(header))
    for n in args.sizes:
        replaced, rhs = laplacian_system(rng, n)
        tol = 1e-12 * (1 + abs(replaced).max())

        py_time = timeit(lambda: _pykernels.gauss_solve(replaced, rhs, tol), args.repeats)
        if _core is not None:
            c_time = timeit(lambda: _core.gauss_solve(replaced, rhs, tol), args.repeats)
            same = np.array_equal(
                _pykernels.gauss_solve(replaced, rhs, tol), _core.gauss_solve(replaced, rhs, tol)
            )
            print(f"{'solve':<10} {n:>5} {py_time:>11.4f}s {c_time:>11.4f}s {py_time / c_time:>8.1f}x  {same}")
        else:
            print(f"{'solve':<10} {n:>5} {py_time:>11.4f}s {'-':>12} {'-':>9}")

        symmetric = replaced + replaced.T
        py_time = timeit(lambda: _pykernels.jacobi_eigenvalues(symmetric, 1e-10, 100), args.repeats)
        if _core is not None:
            c_time = timeit(lambda: _core.jacobi_eigenvalues(symmetric, 1e-10, 100), args.repeats)
            same = np.array_equal(
                _pykernels.jacobi_eigenvalues(symmetric, 1e-10, 100),
                _core.jacobi_eigenvalues(symmetric, 1e-10, 100),
            )
            print(f"{'jacobi':<10} {n:>5} {py_time:>11.4f}s {c_time:>11.4f}s {py_time / c_time:>8.1f}x  {same}")
        else:
            print(f"{'jacobi':<10} {n:>5} {py_time:>11.4f}s {'-':>12} {'-':>9}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
