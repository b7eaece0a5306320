#!/usr/bin/env python3
"""Time the hot kernels with numba against the pure-Python fallback.

Run from an environment where wifimap is installed:

    python3 benchmarks/bench_kernels.py

The script measures in the current interpreter first (numba on, unless
WIFIMAP_NO_NUMBA is already set), then re-runs itself in a child process
with WIFIMAP_NO_NUMBA=1 and prints both columns with the speedup.
"""

from __future__ import annotations

import argparse
import json
import os
import statistics
import subprocess
import sys
import time

import numpy as np

MIN_TOTAL_SECONDS = 1.0
MAX_REPEATS = 10


def build_workloads() -> list[tuple[str, object]]:
    """Fixed-input (name, callable) pairs covering every kernel family."""
    from wifimap import classify, kvisibility, maps, simulate, sparse

    grid = maps.three_room_map(0.05)
    router_world = maps.three_room_router()
    router = grid.world_to_cell(router_world)

    rng = np.random.default_rng(3)
    free_rows, free_cols = np.nonzero(~grid.occupied_mask())
    pick = rng.integers(0, len(free_cols), size=5000)
    tc = free_cols[pick].astype(np.int32)
    tr = free_rows[pick].astype(np.int32)

    rssi = np.concatenate([rng.normal(c, 2.0, 1000) for c in (-35.0, -55.0, -75.0)])

    trace = simulate.generate_trace(
        grid,
        router_world,
        maps.three_room_trajectory(spacing=0.02),
        10.0,
        simulate.PathLossParams(),
    )
    for s in trace:
        s.k = s.k_true

    return [
        ("kvis_plot 100x100", lambda: kvisibility.kvis_plot(grid, router)),
        ("crossings_batch 5000 rays", lambda: kvisibility.count_crossings_batch(grid, router, tc, tr)),
        ("kmeans_1d n=3000 clusters=3", lambda: classify.fit_kmeans_1d(rssi, 3)),
        (f"sparse pipeline {len(trace)} samples", lambda: sparse.build_sparse_map(trace, router_world, grid)),
    ]


def time_workload(fn) -> list[float]:
    fn()  # warmup; the first call pays any JIT compilation
    times: list[float] = []
    total = 0.0
    while total < MIN_TOTAL_SECONDS and len(times) < MAX_REPEATS:
        t0 = time.perf_counter()
        fn()
        dt = time.perf_counter() - t0
        times.append(dt)
        total += dt
    return times


def measure() -> dict[str, dict[str, float]]:
    from wifimap import kernels

    t0 = time.perf_counter()
    kernels.warmup()
    warm = time.perf_counter() - t0

    out = {"_warmup": {"mean": warm, "median": warm, "repeats": 1}}
    for name, fn in build_workloads():
        times = time_workload(fn)
        out[name] = {
            "mean": statistics.mean(times),
            "median": statistics.median(times),
            "repeats": len(times),
        }
    return out


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[1])
    parser.add_argument(
        "--emit-json",
        action="store_true",
        help="print raw timings as JSON (used by the self re-run)",
    )
    args = parser.parse_args(argv)

    from wifimap import kernels

    results = measure()

    if args.emit_json:
        json.dump(results, sys.stdout)
        return 0

    if not kernels.NUMBA_ENABLED:
        print("WIFIMAP_NO_NUMBA is set; timing the fallback only\n")
        print(f"{'workload':<34}{'median s':>12}{'repeats':>9}")
        for name, r in results.items():
            if name == "_warmup":
                continue
            print(f"{name:<34}{r['median']:>12.6f}{r['repeats']:>9}", flush=True)
        return 0

    env = dict(os.environ, WIFIMAP_NO_NUMBA="1")
    child = subprocess.run(
        [sys.executable, os.path.abspath(__file__), "--emit-json"],
        env=env,
        capture_output=True,
        text=True,
    )
    if child.returncode != 0:
        sys.stderr.write(child.stderr)
        return 1
    fallback = json.loads(child.stdout)

    print(f"{'workload':<34}{'numba s':>12}{'fallback s':>12}{'speedup':>9}")
    for name in results:
        if name == "_warmup":
            continue
        a = results[name]["median"]
        b = fallback[name]["median"]
        print(f"{name:<34}{a:>12.6f}{b:>12.6f}{b / a:>8.1f}x", flush=True)
    print(f"\njit warmup (compile or cache load): {results['_warmup']['mean']:.3f} s")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
