#!/usr/bin/env python3
"""Benchmark the point-enumeration kernels: numba @njit vs the numpy fallback.

Usage: python benchmarks/bench_kernels.py [--quick]

Counts are asserted equal between backends before timings are reported, so a
speedup never comes from a wrong answer.
"""

import argparse
import time

from heightlab import counting
from heightlab.data import load_model

CASES = [
    ("p1", 10**7),
    ("p1", 10**8),
    ("p2", 10**6),
    ("blowup_p2", 10**5),
    ("blowup_p2", 10**6),
]

QUICK_CASES = [
    ("p1", 10**6),
    ("p2", 10**5),
    ("blowup_p2", 10**4),
]


def run_case(model_name, bound):
    m = load_model(model_name)
    # warm the jit so compile time is not billed to the kernel
    counting.enumerate_points(m, min(bound, 1000), backend="numba")
    t0 = time.perf_counter()
    n_numba = counting.enumerate_points(m, bound, backend="numba")
    t_numba = time.perf_counter() - t0
    t0 = time.perf_counter()
    n_numpy = counting.enumerate_points(m, bound, backend="numpy")
    t_numpy = time.perf_counter() - t0
    assert n_numba == n_numpy, (model_name, bound, n_numba, n_numpy)
    return n_numba, t_numba, t_numpy


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--quick", action="store_true", help="small bounds only")
    args = parser.parse_args()
    cases = QUICK_CASES if args.quick else CASES
    print(f"{'model':<12} {'B':>10} {'N(B)':>12} {'numba[s]':>9} {'numpy[s]':>9} {'speedup':>8}")
    for model_name, bound in cases:
        n, t_nb, t_np = run_case(model_name, bound)
        print(f"{model_name:<12} {bound:>10} {n:>12} {t_nb:>9.3f} {t_np:>9.3f} {t_np / t_nb:>7.1f}x")


if __name__ == "__main__":
    main()
