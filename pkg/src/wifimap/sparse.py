"""Sparse probabilistic inversion: occupancy from a trajectory with per-sample
wall counts.

The input is what a robot actually has: its own path and, for every sample,
how many walls stand between it and the router (classified from RSSI or
taken from a simulator). Two estimates are built side by side and composed
at the end:

* free space: a per-cell score, 127 at start, nudged by ``sigma_step`` per
  rule application. Rule 1 pins every trajectory cell Free (collision
  samples pin Occupied instead). Rule 2 raises the whole router-to-sample
  ray for k=0 samples. Rule 3 lowers the interior of k>=1 rays. Rule 4
  raises cells lying between two equal-k trajectory crossings of any ray
  through a trajectory cell. Scores are exposed clamped to [0, 255], but the
  accumulator keeps exact signed counts underneath, so the result is
  independent of the order rules are applied in.

* walls: each router-to-sample ray is cut into segments at its trajectory
  crossings (router and sample act as k=0 / k=i pseudo-crossings). A segment
  whose endpoint k-values differ carries wall evidence: a bump over its
  interior cells, dk modes for a dk-step jump, with per-cell deviation
  sigma = M (interior cell count), so long segments say little. Per-cell
  evidence is fused by inverse-variance weighting, which is commutative and
  associative, so processing order does not matter there either.

Segments with dk < 0 can only come from misclassified k; they contribute
nothing and are counted in the result stats. Collision-flagged samples
contribute only their Occupied pin.
"""

from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    DegenerateRayError,
    EmptyTrajectoryError,
    NonpositiveSigmaError,
    RouterOutOfBoundsError,
)
from .grid import FREE_VALUE, GridMap, OCCUPIED_VALUE, UNKNOWN_VALUE
from .kernels import trace_cells
from .traces import TrajectorySample

log = logging.getLogger(__name__)

MODE_GAUSSIAN = "gaussian-midpoint"
MODE_LITERAL = "literal-eq4"
MODES = (MODE_GAUSSIAN, MODE_LITERAL)

# a ray may touch the same trajectory segment on nearby (not strictly
# consecutive) cells when rasters have small gaps; treat touches within this
# many ray steps as one crossing
_CROSSING_GAP = 2


@dataclass
class SparseParams:
    mode: str = MODE_GAUSSIAN
    sigma_step: int = 16
    free_threshold: int = 160
    wall_threshold_frac: float = 0.5
    threads: int = 1

    def __post_init__(self) -> None:
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}, got {self.mode!r}")
        if self.threads < 1:
            raise ValueError(f"threads must be >= 1, got {self.threads}")


@dataclass
class TrajectorySegment:
    """Maximal run of consecutive samples sharing one k-value."""

    start: int            # first sample list position (inclusive)
    end: int              # last sample list position (inclusive)
    k: int


@dataclass
class Crossing:
    """Where a ray meets the rasterized trajectory."""

    pos: int              # index along the ray cell list
    col: int
    row: int
    k: int
    # True when the cell sits on a k transition of the trajectory (a
    # 4-neighbor belongs to the adjacent trajectory segment with another k),
    # so the inherited k may be off by one for this particular ray
    ambiguous: bool = False


@dataclass
class RaySegment:
    """A stretch of one ray between two crossings (or pseudo-crossings)."""

    cols: np.ndarray      # full ray, shared between segments
    rows: np.ndarray
    start: int            # boundary positions on the ray, inclusive
    end: int
    k_lower: int          # k at the boundary closer to the router
    k_upper: int
    boundary_ambiguous: bool = False  # either bounding crossing sits on a k transition

    @property
    def dk(self) -> int:
        return self.k_upper - self.k_lower

    @property
    def cell_count(self) -> int:
        """Segment length L, counted in cells including both boundaries."""
        return self.end - self.start + 1

    def _inner(self) -> tuple[int, int]:
        # Interior positions [lo, hi). A cell that is the diagonal corner
        # partner of a boundary cell was touched at the boundary's own ray
        # point, so it belongs to the boundary, not to the interior.
        lo = self.start + 1
        hi = self.end
        if lo < hi and self.cols[lo] != self.cols[self.start] and self.rows[lo] != self.rows[self.start]:
            lo += 1
        if hi - 1 >= lo and self.cols[hi - 1] != self.cols[self.end] and self.rows[hi - 1] != self.rows[self.end]:
            hi -= 1
        return lo, hi

    @property
    def intermediate_count(self) -> int:
        """M: cells strictly between the boundaries."""
        lo, hi = self._inner()
        return hi - lo

    def intermediate_cells(self) -> tuple[np.ndarray, np.ndarray]:
        lo, hi = self._inner()
        return self.cols[lo:hi], self.rows[lo:hi]

    def upper_cell(self) -> tuple[int, int]:
        return int(self.cols[self.end]), int(self.rows[self.end])


@dataclass
class FreeSpaceAccumulator:
    """Per-cell free-space score with trajectory pins.

    ``steps`` holds the net signed number of rule applications; the exposed
    score is 127 + sigma_step * steps clamped to [0, 255], with trajectory
    cells pinned to 255 and collision cells to 0.
    """

    steps: np.ndarray
    traj: np.ndarray
    collision: np.ndarray
    sigma_step: int = 16

    @classmethod
    def blank(cls, shape: tuple[int, int], sigma_step: int = 16) -> "FreeSpaceAccumulator":
        return cls(
            steps=np.zeros(shape, np.int32),
            traj=np.zeros(shape, bool),
            collision=np.zeros(shape, bool),
            sigma_step=sigma_step,
        )

    def score(self) -> np.ndarray:
        raw = 127 + self.sigma_step * self.steps.astype(np.int64)
        out = np.clip(raw, 0, 255).astype(np.uint8)
        out[self.traj & ~self.collision] = 255
        out[self.collision] = 0
        return out

    def free_mask(self, threshold: int = 160) -> np.ndarray:
        return self.score() >= threshold


@dataclass
class WallBeliefGrid:
    """Per-cell wall evidence: mean, deviation and a seen flag."""

    mu: np.ndarray
    sigma: np.ndarray
    seen: np.ndarray

    @classmethod
    def blank(cls, shape: tuple[int, int]) -> "WallBeliefGrid":
        return cls(np.zeros(shape), np.ones(shape), np.zeros(shape, bool))

    def max_mu(self) -> float:
        if not self.seen.any():
            return 0.0
        return float(self.mu[self.seen].max())


@dataclass
class SparseResult:
    occupancy: GridMap
    beliefs: WallBeliefGrid
    free_space: FreeSpaceAccumulator
    coverage: np.ndarray
    stats: dict = field(default_factory=dict)


# ----------------------------------------------------------------------
# trajectory handling


def segment_trajectory(samples: list[TrajectorySample]) -> list[TrajectorySegment]:
    """Cut a trace into maximal constant-k runs.

    Runs also break where sample indices are non-contiguous. Samples must
    already carry k.
    """
    if not samples:
        raise EmptyTrajectoryError("no samples")
    for s in samples:
        if s.k is None:
            raise ValueError(f"sample {s.index} has no k; classify the trace first")
    segments: list[TrajectorySegment] = []
    start = 0
    for i in range(1, len(samples)):
        breaks = samples[i].k != samples[start].k or samples[i].index != samples[i - 1].index + 1
        if breaks:
            segments.append(TrajectorySegment(start, i - 1, int(samples[start].k)))
            start = i
    segments.append(TrajectorySegment(start, len(samples) - 1, int(samples[start].k)))
    return segments


def _rasterize(
    samples: list[TrajectorySample], grid: GridMap
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Sample cells plus trajectory lookup grids.

    Returns (cols, rows) per sample and three grids: segment id, k and a
    collision mask. Where several samples share a cell, the sample with the
    smallest trace index wins, which keeps the grids independent of the
    order the caller happens to hand samples over in.
    """
    n = len(samples)
    cols = np.empty(n, np.int32)
    rows = np.empty(n, np.int32)
    for i, s in enumerate(samples):
        c, r = grid.world_to_cell(s.position)
        cols[i] = c
        rows[i] = r

    order = sorted(range(n), key=lambda i: samples[i].index)
    segments = segment_trajectory([samples[i] for i in order])
    seg_of = np.empty(n, np.int32)
    for si, seg in enumerate(segments):
        for j in range(seg.start, seg.end + 1):
            seg_of[order[j]] = si

    shape = grid.cells.shape
    traj_seg = np.full(shape, -1, np.int32)
    traj_k = np.full(shape, -1, np.int16)
    collision = np.zeros(shape, bool)
    claimed = np.full(shape, np.iinfo(np.int64).max, np.int64)
    for i in range(n):
        s = samples[i]
        r, c = rows[i], cols[i]
        if s.collision:
            collision[r, c] = True
            continue
        if s.index < claimed[r, c]:
            claimed[r, c] = s.index
            traj_seg[r, c] = seg_of[i]
            traj_k[r, c] = int(s.k)
    return cols, rows, traj_seg, traj_k, collision, seg_of


# ----------------------------------------------------------------------
# crossings and ray segmentation


def find_crossings(
    ray_cols: np.ndarray,
    ray_rows: np.ndarray,
    traj_seg: np.ndarray,
    traj_k: np.ndarray,
    include_terminal: bool = False,
) -> list[Crossing]:
    """Trajectory crossings along a ray, nearest first.

    Ray position 0 (the router) is never a crossing; the terminal cell only
    counts when ``include_terminal`` is set. Touches of one trajectory
    segment within _CROSSING_GAP ray steps collapse to a single crossing at
    the touch closest to the router. A crossing lands ``ambiguous`` when its
    cell borders the adjacent trajectory segment with a different k: the k
    the ray inherits there is uncertain by one, because the ray meets the
    trajectory somewhere inside the cell, not at the stored sample.
    """
    n = len(ray_cols)
    h, w = traj_seg.shape
    hi = n if include_terminal else n - 1
    out: list[Crossing] = []
    last_seg = -1
    last_pos = -10 * _CROSSING_GAP
    for p in range(1, hi):
        c, r = int(ray_cols[p]), int(ray_rows[p])
        seg = traj_seg[r, c]
        if seg < 0:
            continue
        if seg == last_seg and p - last_pos <= _CROSSING_GAP:
            last_pos = p
            continue
        k = int(traj_k[r, c])
        ambiguous = False
        for nc, nr in ((c - 1, r), (c + 1, r), (c, r - 1), (c, r + 1)):
            if 0 <= nc < w and 0 <= nr < h:
                nseg = traj_seg[nr, nc]
                if nseg >= 0 and abs(int(nseg) - int(seg)) == 1 and traj_k[nr, nc] != k:
                    ambiguous = True
                    break
        out.append(Crossing(p, c, r, k, ambiguous))
        last_seg = seg
        last_pos = p
    return out


def update_endpoints(
    ray_cols: np.ndarray,
    ray_rows: np.ndarray,
    crossings: list[Crossing],
    terminal_k: int,
) -> tuple[Crossing, Crossing]:
    """Tighten the wall search interval of a ray.

    The lower endpoint moves out to the farthest k=0 crossing (default: the
    router); the upper endpoint moves in to the nearest k>=1 crossing
    (default: the sample itself). Raises DegenerateRayError when the
    interval collapses.
    """
    n = len(ray_cols)
    lower = Crossing(0, int(ray_cols[0]), int(ray_rows[0]), 0)
    upper = Crossing(n - 1, int(ray_cols[n - 1]), int(ray_rows[n - 1]), int(terminal_k))
    for c in crossings:
        if c.k == 0 and c.pos > lower.pos:
            lower = c
    for c in crossings:
        if c.k >= 1 and c.pos < upper.pos:
            upper = c
    if lower.pos >= upper.pos:
        raise DegenerateRayError(f"endpoints collapsed at ray position {lower.pos}")
    return lower, upper


def segment_ray(
    ray_cols: np.ndarray,
    ray_rows: np.ndarray,
    crossings: list[Crossing],
    terminal_k: int,
) -> list[RaySegment]:
    """Cut a ray at its crossings; router and terminal act as pseudo-crossings.

    Consecutive boundary k-values define each segment's dk; summed over the
    ray they telescope to the terminal k.
    """
    n = len(ray_cols)
    bounds = [(0, 0, False)]
    bounds += [(c.pos, c.k, c.ambiguous) for c in crossings]
    bounds += [(n - 1, int(terminal_k), False)]
    segments = []
    for (p0, k0, a0), (p1, k1, a1) in zip(bounds[:-1], bounds[1:]):
        if p1 <= p0:
            continue
        segments.append(RaySegment(ray_cols, ray_rows, p0, p1, int(k0), int(k1), a0 or a1))
    return segments


# ----------------------------------------------------------------------
# wall evidence


def _bump_profile(seg: RaySegment, mode: str) -> np.ndarray:
    """Per-intermediate-cell wall probability for a dk >= 1 segment."""
    s_cells = seg.cell_count
    m = seg.intermediate_count
    dk = seg.dk
    lo, hi = seg._inner()
    p = np.arange(lo - seg.start, hi - seg.start, dtype=np.float64)
    amp = math.exp(-1.0 / (m * m))
    if mode == MODE_LITERAL:
        d = np.abs(p - (s_cells - 1) / 2.0)
        return amp * d / s_cells
    if dk == 1:
        s = s_cells / 4.0
        g = np.exp(-(((p - (s_cells - 1) / 2.0) / s) ** 2))
        return (amp / 2.0) * (g / g.max())
    s = s_cells / (4.0 * dk)
    total = np.zeros_like(p)
    for mode_i in range(1, dk + 1):
        center = mode_i * s_cells / (dk + 1.0)
        total += (amp / 2.0) * np.exp(-(((p - center) / s) ** 2))
    return np.clip(total, 0.0, 1.0)


def assign_wall_probability(seg: RaySegment, mode: str = MODE_GAUSSIAN) -> tuple[np.ndarray, np.ndarray, np.ndarray, float]:
    """Wall evidence for one segment: (cols, rows, mu, sigma).

    dk=0 segments carry no wall mass (all-zero mu; the pipeline scores them
    free instead). A dk>=1 segment with no interior cells pins the wall to
    its far boundary cell with mu=1, sigma=1. Otherwise mu is a bump over
    the interior with sigma = M, so evidence from long segments fuses
    weakly.
    """
    if mode not in MODES:
        raise ValueError(f"mode must be one of {MODES}, got {mode!r}")
    if seg.dk < 0:
        raise ValueError(f"segment has dk={seg.dk}; negative jumps carry no evidence")
    cols, rows = seg.intermediate_cells()
    if seg.dk == 0:
        return cols, rows, np.zeros(len(cols)), float(max(seg.intermediate_count, 1))
    if seg.intermediate_count == 0:
        c, r = seg.upper_cell()
        return np.array([c], np.int32), np.array([r], np.int32), np.array([1.0]), 1.0
    return cols, rows, _bump_profile(seg, mode), float(seg.intermediate_count)


def fuse_beliefs(beliefs: WallBeliefGrid, cell: tuple[int, int], mu: float, sigma: float) -> tuple[float, float]:
    """Merge one observation into a cell by inverse-variance weighting."""
    if sigma <= 0.0:
        raise NonpositiveSigmaError(f"sigma must be positive, got {sigma}")
    c, r = int(cell[0]), int(cell[1])
    if not beliefs.seen[r, c]:
        beliefs.mu[r, c] = mu
        beliefs.sigma[r, c] = sigma
        beliefs.seen[r, c] = True
    else:
        m1 = beliefs.mu[r, c]
        v1 = beliefs.sigma[r, c] ** 2
        v2 = sigma * sigma
        denom = v1 + v2
        beliefs.mu[r, c] = (v1 * mu + v2 * m1) / denom
        beliefs.sigma[r, c] = math.sqrt(v1 * v2 / denom)
    return float(beliefs.mu[r, c]), float(beliefs.sigma[r, c])


def _fuse_many(beliefs: WallBeliefGrid, cols: np.ndarray, rows: np.ndarray, mu: np.ndarray, sigma: float) -> None:
    # vectorized fuse_beliefs; cells within one call are distinct
    if sigma <= 0.0:
        raise NonpositiveSigmaError(f"sigma must be positive, got {sigma}")
    fresh = ~beliefs.seen[rows, cols]
    if fresh.any():
        fr, fc = rows[fresh], cols[fresh]
        beliefs.mu[fr, fc] = mu[fresh]
        beliefs.sigma[fr, fc] = sigma
        beliefs.seen[fr, fc] = True
    old = ~fresh
    if old.any():
        orr, oc = rows[old], cols[old]
        m1 = beliefs.mu[orr, oc]
        v1 = beliefs.sigma[orr, oc] ** 2
        v2 = sigma * sigma
        denom = v1 + v2
        beliefs.mu[orr, oc] = (v1 * mu[old] + v2 * m1) / denom
        beliefs.sigma[orr, oc] = np.sqrt(v1 * v2 / denom)


def _merge_beliefs(base: WallBeliefGrid, part: WallBeliefGrid) -> None:
    only_new = part.seen & ~base.seen
    if only_new.any():
        base.mu[only_new] = part.mu[only_new]
        base.sigma[only_new] = part.sigma[only_new]
        base.seen[only_new] = True
    both = part.seen & base.seen & ~only_new
    if both.any():
        v1 = base.sigma[both] ** 2
        v2 = part.sigma[both] ** 2
        denom = v1 + v2
        base.mu[both] = (v1 * part.mu[both] + v2 * base.mu[both]) / denom
        base.sigma[both] = np.sqrt(v1 * v2 / denom)


# ----------------------------------------------------------------------
# free space rules


def mark_free_space(
    samples: list[TrajectorySample],
    router: tuple[int, int],
    grid: GridMap,
    params: SparseParams | None = None,
) -> FreeSpaceAccumulator:
    """Apply free-space Rules 1-4 for a classified trace.

    ``router`` is a cell index. The returned accumulator holds exact signed
    rule counts; combine with ``score()`` / ``free_mask()``.
    """
    params = params or SparseParams()
    if not samples:
        raise EmptyTrajectoryError("no samples")
    rc, rr = grid._require_cell(router)
    cols, rows, traj_seg, traj_k, collision, _ = _rasterize(samples, grid)

    acc = FreeSpaceAccumulator.blank(grid.cells.shape, params.sigma_step)
    acc.collision = collision
    for i, s in enumerate(samples):
        if not s.collision:
            acc.traj[rows[i], cols[i]] = True

    # Rules 2 and 3, one ray per sample
    for i, s in enumerate(samples):
        if s.collision:
            continue
        rcols, rrows = trace_cells(rc, rr, int(cols[i]), int(rows[i]))
        if s.k == 0:
            acc.steps[rrows, rcols] += 1
        elif len(rcols) > 2:
            acc.steps[rrows[1:-1], rcols[1:-1]] -= 1

    # Rule 4, one ray through every sample's cell (the terminal counts as a
    # crossing); repeated samples on a cell reweight its line by dwell time
    for i, s in enumerate(samples):
        if s.collision:
            continue
        cell = (int(cols[i]), int(rows[i]))
        if cell == (rc, rr):
            continue
        rcols, rrows = trace_cells(rc, rr, cell[0], cell[1])
        crossings = find_crossings(rcols, rrows, traj_seg, traj_k, include_terminal=True)
        by_k: dict[int, list[int]] = {}
        for x in crossings:
            if not x.ambiguous:
                by_k.setdefault(x.k, []).append(x.pos)
        for positions in by_k.values():
            if len(positions) < 2:
                continue
            lo, hi = min(positions), max(positions)
            if hi - lo > 1:
                acc.steps[rrows[lo + 1 : hi], rcols[lo + 1 : hi]] += 1
    return acc


# ----------------------------------------------------------------------
# full pipeline


def _process_rays(
    sample_rows: list[tuple[int, int, int, bool]],
    router: tuple[int, int],
    shape: tuple[int, int],
    traj_seg: np.ndarray,
    traj_k: np.ndarray,
    mode: str,
) -> tuple[WallBeliefGrid, np.ndarray, np.ndarray, dict]:
    """Belief pass over (col, row, k, collision) sample tuples.

    Returns partial beliefs, extra free-step counts (dk=0 segments), a
    coverage mask and counters. Trajectory cells never receive wall
    evidence: Rule 1 already pins them Free, and letting segment-boundary
    pins land there would both waste evidence and skew the max-relative
    wall threshold. Self-contained so chunks can run on worker threads and
    merge deterministically.
    """
    beliefs = WallBeliefGrid.blank(shape)
    steps = np.zeros(shape, np.int32)
    coverage = np.zeros(shape, bool)
    stats = {
        "rays": 0,
        "zero_length": 0,
        "negative_dk": 0,
        "ambiguous_boundary": 0,
        "telescope_violations": 0,
        "suppressed_on_trajectory": 0,
    }
    on_traj = traj_seg >= 0
    rc, rr = router
    for col, row, k, collision in sample_rows:
        if collision:
            continue
        if (col, row) == (rc, rr):
            stats["zero_length"] += 1
            continue
        rcols, rrows = trace_cells(rc, rr, col, row)
        stats["rays"] += 1
        coverage[rrows, rcols] = True
        crossings = find_crossings(rcols, rrows, traj_seg, traj_k)
        segments = segment_ray(rcols, rrows, crossings, k)
        if sum(s.dk for s in segments) != k:
            stats["telescope_violations"] += 1
        for seg in segments:
            if seg.dk < 0:
                stats["negative_dk"] += 1
                continue
            if seg.boundary_ambiguous:
                stats["ambiguous_boundary"] += 1
                continue
            if seg.dk == 0:
                icols, irows = seg.intermediate_cells()
                if len(icols):
                    steps[irows, icols] += 1
                continue
            cols_s, rows_s, mu, sigma = assign_wall_probability(seg, mode)
            keep = ~on_traj[rows_s, cols_s]
            stats["suppressed_on_trajectory"] += int(len(cols_s) - keep.sum())
            if keep.any():
                _fuse_many(beliefs, cols_s[keep], rows_s[keep], mu[keep], sigma)
    return beliefs, steps, coverage, stats


def occupancy_from(
    acc: FreeSpaceAccumulator,
    beliefs: WallBeliefGrid,
    grid: GridMap,
    params: SparseParams,
) -> GridMap:
    """Compose the final map: belief walls, score free space, trajectory pins."""
    cells = np.full(grid.cells.shape, UNKNOWN_VALUE, np.uint8)
    occ_mask = np.zeros(grid.cells.shape, bool)
    mmax = beliefs.max_mu()
    if mmax > 0.0:
        occ_mask = beliefs.seen & (beliefs.mu >= params.wall_threshold_frac * mmax)
    free = acc.free_mask(params.free_threshold) & ~occ_mask
    cells[occ_mask] = OCCUPIED_VALUE
    cells[free] = FREE_VALUE
    cells[acc.traj & ~acc.collision] = FREE_VALUE
    cells[acc.collision] = OCCUPIED_VALUE
    return GridMap(cells, grid.resolution, grid.origin)


def build_sparse_map(
    samples: list[TrajectorySample],
    router_world: tuple[float, float],
    grid: GridMap,
    params: SparseParams | None = None,
) -> SparseResult:
    """Run the whole sparse pipeline for one router.

    ``grid`` supplies geometry (shape, resolution, origin); its cell values
    are not consulted. Samples must carry k. ``params.threads`` > 1 splits
    ray processing into contiguous chunks whose partial results merge in a
    fixed order, so the outcome matches the single-threaded run.
    """
    params = params or SparseParams()
    if not samples:
        raise EmptyTrajectoryError("no samples")
    try:
        router = grid.world_to_cell(router_world)
    except Exception as exc:
        raise RouterOutOfBoundsError(str(exc)) from exc

    cols, rows, traj_seg, traj_k, collision, _ = _rasterize(samples, grid)
    acc = mark_free_space(samples, router, grid, params)

    rows_spec = [
        (int(cols[i]), int(rows[i]), int(s.k), bool(s.collision)) for i, s in enumerate(samples)
    ]
    shape = grid.cells.shape
    chunk_count = min(params.threads, max(1, len(rows_spec)))
    chunks = [list(c) for c in np.array_split(np.arange(len(rows_spec)), chunk_count)]
    args = [([rows_spec[i] for i in chunk], router, shape, traj_seg, traj_k, params.mode) for chunk in chunks]

    if chunk_count == 1:
        partials = [_process_rays(*args[0])]
    else:
        with ThreadPoolExecutor(max_workers=chunk_count) as pool:
            partials = list(pool.map(lambda a: _process_rays(*a), args))

    beliefs = WallBeliefGrid.blank(shape)
    coverage = np.zeros(shape, bool)
    stats = {
        "rays": 0,
        "zero_length": 0,
        "negative_dk": 0,
        "ambiguous_boundary": 0,
        "telescope_violations": 0,
        "suppressed_on_trajectory": 0,
    }
    for part_beliefs, part_steps, part_cov, part_stats in partials:
        _merge_beliefs(beliefs, part_beliefs)
        acc.steps += part_steps
        coverage |= part_cov
        for key in stats:
            stats[key] += part_stats[key]
    if stats["negative_dk"]:
        log.debug("skipped %d segments with negative dk (noisy k input)", stats["negative_dk"])

    occupancy = occupancy_from(acc, beliefs, grid, params)
    return SparseResult(occupancy=occupancy, beliefs=beliefs, free_space=acc, coverage=coverage, stats=stats)
