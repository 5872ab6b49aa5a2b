#!/usr/bin/env python3
"""Benchmark the compiled convolution kernel against the NumPy fallback.

Runs the same float-mode workloads through both backends and reports
wall times plus the speedup:

* pairwise convolution chains at several atom counts;
* a lazy-greedy search over a 200-column synthetic objective.

Usage: python benchmarks/bench_convolve.py [--columns 200] [--k 10]
"""

from __future__ import annotations

import argparse
import random
import time

import numpy as np

from crossgreed import _convkernel_py
from crossgreed import score_dist, selector, synth
from crossgreed.nb_model import NbObjective

try:
    from crossgreed import _convkernel_c
except ImportError:
    _convkernel_c = None


def random_atoms(rng: np.random.Generator, n: int):
    keys = np.sort(rng.integers(-5 * 10**10, 5 * 10**10, n)).astype(np.int64)
    w1 = rng.random(n)
    w0 = rng.random(n)
    return keys, w1 / w1.sum(), w0 / w0.sum()


def bench_kernel(kernel, sizes, repeats=5) -> dict[int, float]:
    rng = np.random.default_rng(12345)
    out = {}
    for n in sizes:
        ka, a1, a0 = random_atoms(rng, n)
        kb, b1, b0 = random_atoms(rng, 64)
        start = time.perf_counter()
        for _ in range(repeats):
            kernel.convolve_pairs(ka, a1, a0, kb, b1, b0, 1e-12)
        out[n] = (time.perf_counter() - start) / repeats
    return out


def bench_search(backend_module, columns: int, k: int) -> tuple[float, float]:
    # pin the backend regardless of what import-time selection chose
    original = score_dist._kernel
    try:
        score_dist.__dict__["_kernel"] = backend_module
        cols = synth.lattice_nb_objective(random.Random(99), columns)
        objective = NbObjective(cols, prune_eps=1e-12)
        start = time.perf_counter()
        report = selector.lazy_greedy_select(objective.f_of, objective.universe(), k)
        elapsed = time.perf_counter() - start
        _, bound = objective.auc_star_with_bound(set(report.selected))
        return elapsed, bound
    finally:
        score_dist.__dict__["_kernel"] = original


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--columns", type=int, default=200)
    parser.add_argument("--k", type=int, default=10)
    args = parser.parse_args()

    sizes = [256, 1024, 4096, 16384, 65536]
    numpy_times = bench_kernel(_convkernel_py, sizes)
    print(f"{'atoms':>8} {'numpy':>10} {'cython':>10} {'speedup':>8}")
    if _convkernel_c is None:
        print("compiled kernel not available; showing fallback only")
        for n in sizes:
            print(f"{n:>8} {numpy_times[n] * 1e3:>9.2f}ms {'-':>10} {'-':>8}")
    else:
        cython_times = bench_kernel(_convkernel_c, sizes)
        for n in sizes:
            ratio = numpy_times[n] / cython_times[n]
            print(f"{n:>8} {numpy_times[n] * 1e3:>9.2f}ms "
                  f"{cython_times[n] * 1e3:>9.2f}ms {ratio:>7.2f}x")

    print(f"\nlazy greedy, {args.columns} columns, k={args.k}, prune_eps=1e-12:")
    t_numpy, bound = bench_search(_convkernel_py, args.columns, args.k)
    print(f"  numpy fallback : {t_numpy:.3f}s (certified AUC bound {bound:.2e})")
    if _convkernel_c is not None:
        t_cython, bound = bench_search(_convkernel_c, args.columns, args.k)
        print(f"  compiled kernel: {t_cython:.3f}s (certified AUC bound {bound:.2e})")
        print(f"  speedup        : {t_numpy / t_cython:.2f}x")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
