#!/usr/bin/env python3
"""Benchmark the Gibbs kernels: compiled extension vs numpy fallback.

Usage: python benchmarks/bench_gibbs.py [--chains M] [--steps V] [--repeat R]

The workload mirrors one gradient-estimation batch of the 4x4-grid worked
example (M=1533 chains, v=561 single-site updates) and reports site updates
per second for every available backend, plus a bit-identity check.
"""

import argparse
import time

import numpy as np

from mixmle import ChainConfig, Parameters, available_backends, draw_batch, grid_topology


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--chains", type=int, default=1533)
    ap.add_argument("--steps", type=int, default=561)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    g = grid_topology(4, 4)
    theta = Parameters(np.full(g.num_edges, 0.2))
    cfg = ChainConfig(num_steps=args.steps, master_seed=12345)
    updates = args.chains * args.steps

    results = {}
    for backend in available_backends():
        best = float("inf")
        for _ in range(args.repeat):
            t0 = time.perf_counter()
            out = draw_batch(theta, g, args.chains, cfg, stream_index=1,
                             backend=backend)
            best = min(best, time.perf_counter() - t0)
        results[backend] = (best, out)
        print(f"{backend:>9}: {best:8.4f} s  "
              f"({updates / best / 1e6:8.2f} M updates/s)")

    if len(results) == 2:
        a, b = (results[k][1] for k in results)
        print("bit-identical outputs:", np.array_equal(a, b))
        fast, slow = results["compiled"][0], results["python"][0]
        print(f"speedup: {slow / fast:.1f}x")


if __name__ == "__main__":
    main()
