"""Timing comparison of the Euler path kernels.

Runs the batched path simulation through the compiled kernel (when
available) and the numpy fallback on identical inputs, reports throughput,
and checks that the outputs agree. Invoke directly:

    python3 benchmarks/bench_backends.py [--reps 4096] [--dt 0.01]
"""

from __future__ import annotations

import argparse
import importlib
import time

import numpy as np

from longcycle import _numpy_kernel
from longcycle.diffusion import n_steps


def _load_compiled():
    try:
        return importlib.import_module("longcycle._kernel")
    except ImportError:
        return None


def bench(kernel, c, d, dW, dt, repeats=3) -> float:
    best = float("inf")
    for _ in range(repeats):
        t0 = time.perf_counter()
        kernel.em_paths(c, d, dW, dt)
        best = min(best, time.perf_counter() - t0)
    return best


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--reps", type=int, default=4096, help="paths per batch")
    ap.add_argument("--dt", type=float, default=0.01, help="Euler step")
    ap.add_argument("--c", type=float, default=-5.0)
    ap.add_argument("--d", type=float, default=20.0)
    args = ap.parse_args()

    N = n_steps(args.dt)
    rng = np.random.default_rng(0)
    dW = np.sqrt(args.dt) * rng.standard_normal((args.reps, N))

    compiled = _load_compiled()
    results = {}
    J_np, K_np, G_np = _numpy_kernel.em_paths(args.c, args.d, dW, args.dt)
    results["numpy"] = bench(_numpy_kernel, args.c, args.d, dW, args.dt)
    if compiled is not None:
        J_cy, K_cy, G_cy = compiled.em_paths(args.c, args.d, dW, args.dt)
        results["cython"] = bench(compiled, args.c, args.d, dW, args.dt)
        worst = max(
            np.max(np.abs(J_cy - J_np)),
            np.max(np.abs(K_cy - K_np)),
            np.max(np.abs(G_cy - G_np)),
        )
        print(f"max |cython - numpy| over all outputs: {worst:.3e}")

    cells = args.reps * N
    print(f"batch: {args.reps} paths x {N} steps (c={args.c:g}, d={args.d:g})")
    for name, secs in results.items():
        print(f"  {name:>7}: {secs * 1e3:8.2f} ms   ({cells / secs / 1e6:7.1f} M steps/s)")
    if compiled is None:
        print("  cython : not built (pure-python install); numpy fallback is active")
    elif results["numpy"] > 0:
        print(f"  speedup: {results['numpy'] / results['cython']:.2f}x")


if __name__ == "__main__":
    main()
