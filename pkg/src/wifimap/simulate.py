"""Synthetic RSSI generation over a known map.

Log-distance path loss plus a fixed per-wall attenuation:

    rssi = p0 - 10 * n * log10(max(d, d0) / d0) - wall_loss * crossings + noise

with p0 the power at reference distance d0. Noise is zero-mean gaussian,
drawn from a generator seeded by (seed, sample index), so any sample can be
reproduced in isolation and traces may be generated in parallel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import RouterInsideWallError, RouterOutOfBoundsError, TrajectoryThroughWallError
from .grid import GridMap
from .kvisibility import count_crossings_batch
from .traces import TrajectorySample


@dataclass
class PathLossParams:
    p0: float = -30.0          # dBm at the reference distance
    n: float = 2.0             # path loss exponent
    wall_loss: float = 12.0    # dB per wall crossing
    noise_sigma: float = 0.0   # dB
    d0: float = 1.0            # reference distance, meters
    seed: int = 0

    def __post_init__(self) -> None:
        if not (self.d0 > 0.0):
            raise ValueError(f"d0 must be positive, got {self.d0}")
        if self.noise_sigma < 0.0:
            raise ValueError(f"noise_sigma must be >= 0, got {self.noise_sigma}")


def _noise(params: PathLossParams, index: int) -> float:
    if params.noise_sigma == 0.0:
        return 0.0
    rng = np.random.default_rng([params.seed, index])
    return float(rng.normal(0.0, params.noise_sigma))


def _router_cell(grid: GridMap, router: tuple[float, float]) -> tuple[int, int]:
    try:
        cell = grid.world_to_cell(router)
    except Exception as exc:
        raise RouterOutOfBoundsError(str(exc)) from exc
    if grid.is_occupied(cell):
        raise RouterInsideWallError(f"router {router} falls in Occupied cell {cell}")
    return cell


def rssi_at(
    grid: GridMap,
    router: tuple[float, float],
    p: tuple[float, float],
    params: PathLossParams,
    index: int = 0,
) -> float:
    """Simulated RSSI at world point ``p``; deterministic given (seed, index)."""
    cell = grid.world_to_cell(p)
    if grid.is_occupied(cell):
        raise TrajectoryThroughWallError(f"sample point {p} falls in Occupied cell {cell}")
    rc = _router_cell(grid, router)
    k = count_crossings_batch(grid, rc, np.array([cell[0]]), np.array([cell[1]]))[0]
    d = math.hypot(p[0] - router[0], p[1] - router[1])
    loss = 10.0 * params.n * math.log10(max(d, params.d0) / params.d0)
    return params.p0 - loss - params.wall_loss * float(k) + _noise(params, index)


def generate_trace(
    grid: GridMap,
    router: tuple[float, float],
    trajectory: list[tuple[float, float]],
    rate: float,
    params: PathLossParams,
) -> list[TrajectorySample]:
    """One RSSI sample per trajectory point, timestamped at 1/rate spacing.

    Every sample carries the true crossing count in ``k_true``.
    """
    if not trajectory:
        raise TrajectoryThroughWallError("empty trajectory")
    if not (rate > 0.0):
        raise ValueError(f"rate must be positive, got {rate}")
    rc = _router_cell(grid, router)

    cols = np.empty(len(trajectory), np.int32)
    rows = np.empty(len(trajectory), np.int32)
    for i, p in enumerate(trajectory):
        cell = grid.world_to_cell(p)
        if grid.is_occupied(cell):
            raise TrajectoryThroughWallError(f"trajectory point {i} at {p} falls in Occupied cell {cell}")
        cols[i], rows[i] = cell
    ks = count_crossings_batch(grid, rc, cols, rows)

    samples = []
    for i, p in enumerate(trajectory):
        d = math.hypot(p[0] - router[0], p[1] - router[1])
        loss = 10.0 * params.n * math.log10(max(d, params.d0) / params.d0)
        rssi = params.p0 - loss - params.wall_loss * float(ks[i]) + _noise(params, i)
        samples.append(
            TrajectorySample(index=i, t=i / rate, x=p[0], y=p[1], rssi=rssi, k_true=int(ks[i]))
        )
    return samples


def densify(waypoints: list[tuple[float, float]], spacing: float) -> list[tuple[float, float]]:
    """Resample a waypoint polyline at roughly ``spacing`` meters per step."""
    if spacing <= 0.0:
        raise ValueError(f"spacing must be positive, got {spacing}")
    if len(waypoints) < 2:
        return list(waypoints)
    points: list[tuple[float, float]] = []
    for (x0, y0), (x1, y1) in zip(waypoints[:-1], waypoints[1:]):
        seg_len = math.hypot(x1 - x0, y1 - y0)
        steps = max(1, int(round(seg_len / spacing)))
        for s in range(steps):
            f = s / steps
            points.append((x0 + f * (x1 - x0), y0 + f * (y1 - y0)))
    points.append(waypoints[-1])
    return points
