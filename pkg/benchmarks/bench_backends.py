#!/usr/bin/env python3
"""Benchmark the compiled kernel extension against the pure-Python fallback.

Times the hot primitives (dual solves, reduced profiles, objective
grids) and two composite workloads (the full two-parameter optimizer,
one complete sweep row).  Run from the repo root:

    python benchmarks/bench_backends.py [--repeat N]
"""

from __future__ import annotations

import argparse
import time

import numpy as np

import tailbounds as tb


def time_call(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def workloads():
    model = tb.make_model(tb.parse_spec("gamma:8,1"))
    ys = np.linspace(8.5, 40.0, 2000)

    def xi_solves():
        for y in ys:
            tb.xi(model, float(y))

    def tilted_rates():
        for y in ys[:500]:
            tb.tilted_rate(model, 1.3, 2.2, float(y))

    def grid():
        tb.objective_grid(
            model, 16.0, np.linspace(1.001, 1.35, 200), np.linspace(1.1, 6.0, 200)
        )

    def optimizer():
        tb.lower_bound_new(model, 16.0)

    def sweep_row():
        tb.chernoff_upper(model, 16.0)
        tb.lower_bound_new(model, 16.0)
        tb.stroock_lower(model, 16.0)
        tb.bo_lower(model, 16.0)
        tb.saddlepoint_tail(model, 16.0)

    return [
        ("xi solve x2000", xi_solves),
        ("tilted rate x500", tilted_rates),
        ("objective grid 200x200", grid),
        ("lower_bound_new", optimizer),
        ("full sweep row", sweep_row),
    ]


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--repeat", type=int, default=5)
    args = ap.parse_args()

    if not tb.has_compiled():
        print("compiled backend not built; nothing to compare")
        return

    results = {}
    for backend in ("python", "compiled"):
        tb.set_backend(backend)
        for name, fn in workloads():
            fn()  # warm up
            results[(backend, name)] = time_call(fn, args.repeat)
    tb.set_backend("auto")

    names = [name for name, _ in workloads()]
    width = max(len(n) for n in names)
    print(f"{'workload':<{width}}  {'python':>10}  {'compiled':>10}  {'speedup':>8}")
    for name in names:
        py = results[("python", name)]
        cy = results[("compiled", name)]
        print(f"{name:<{width}}  {py * 1e3:>8.2f}ms  {cy * 1e3:>8.2f}ms  {py / cy:>7.1f}x")


if __name__ == "__main__":
    main()
