#!/usr/bin/env python3
"""Benchmark the numba Sinkhorn kernels against the pure-numpy fallback.

Times repeated solves at pipeline-realistic sizes (the hot path is many
independent solves on small matrices), checks that both engines agree
numerically, and reports the speedup. Select the engine used by the package
at runtime with OTALIGN_ENGINE=numba|numpy.

Usage:
    python benchmarks/bench_sinkhorn.py [--solves N] [--repeats R]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from otalign import _kernels

SIZES = [(90, 20), (90, 10), (16, 6)]


def make_instances(n, m, count, seed, dim=32):
    rng = np.random.default_rng(seed)
    instances = []
    for _ in range(count):
        a = rng.normal(size=(n, dim))
        b = rng.normal(size=(m, dim))
        a /= np.linalg.norm(a, axis=1, keepdims=True)
        b /= np.linalg.norm(b, axis=1, keepdims=True)
        cost = np.ascontiguousarray(1.0 - a @ b.T)
        instances.append(np.exp(-cost / 0.1))
    r = np.full(n, 1.0 / n)
    c = np.full(m, 1.0 / m)
    return instances, r, c


def bench(fn, kernels, r, c, repeats):
    times = []
    for _ in range(repeats):
        started = time.perf_counter()
        for K in kernels:
            fn(K, r, c, 1e-6, 100)
        times.append(time.perf_counter() - started)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description="Sinkhorn kernel benchmark")
    parser.add_argument("--solves", type=int, default=400, help="solves per size (default 400)")
    parser.add_argument("--repeats", type=int, default=5, help="timing repeats (default 5)")
    args = parser.parse_args()

    if not _kernels.HAS_NUMBA:
        print("numba is not importable; nothing to compare")
        return

    print("warming up JIT...", end=" ", flush=True)
    _kernels.warmup()
    print("done")
    print(f"{'size':>8} {'numpy (ms)':>12} {'numba (ms)':>12} {'speedup':>8}   agreement")
    for n, m in SIZES:
        kernels, r, c = make_instances(n, m, args.solves, seed=n * 1000 + m)
        t_np = bench(_kernels.scaling_numpy, kernels, r, c, args.repeats)
        t_nb = bench(_kernels.scaling_numba, kernels, r, c, args.repeats)

        u1, v1, *_ = _kernels.scaling_numpy(kernels[0], r, c, 1e-6, 100)
        u2, v2, *_ = _kernels.scaling_numba(kernels[0], r, c, 1e-6, 100)
        plan_np = u1[:, None] * kernels[0] * v1[None, :]
        plan_nb = u2[:, None] * kernels[0] * v2[None, :]
        dev = float(np.abs(plan_np - plan_nb).max())
        print(
            f"{n:>4}x{m:<3} {t_np * 1e3:>12.2f} {t_nb * 1e3:>12.2f} "
            f"{t_np / t_nb:>7.1f}x   max|dT| {dev:.1e}"
        )


if __name__ == "__main__":
    main()
