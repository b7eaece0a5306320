"""Hot inner loops, compiled with numba when available.

Set ``WIFIMAP_NO_NUMBA=1`` to skip JIT compilation entirely; every kernel
then runs as the same plain Python loop (or a vectorized numpy variant where
one exists). Outputs are identical on both paths, only speed differs. See
``benchmarks/bench_kernels.py`` for the comparison.
"""

from __future__ import annotations

import os

import numpy as np


def _numba_wanted() -> bool:
    flag = os.environ.get("WIFIMAP_NO_NUMBA", "").strip().lower()
    return flag not in ("1", "true", "yes", "on")


NUMBA_ENABLED = False
if _numba_wanted():
    try:
        import numba

        NUMBA_ENABLED = True
    except ImportError:  # pragma: no cover - numba is a declared dependency
        numba = None


def ray_capacity(dc: int, dr: int) -> int:
    """Upper bound on the number of cells a supercover ray can touch."""
    dc = abs(int(dc))
    dr = abs(int(dr))
    return dc + dr + min(dc, dr) + 2


def _supercover_fill(ac, ar, bc, br, cols, rows):
    # Integer supercover walk from cell (ac, ar) to (bc, br): every cell whose
    # closed unit square the center-to-center segment touches, in traversal
    # order. When the segment passes exactly through a cell corner, both side
    # cells are emitted (axis-of-travel neighbor first); this tie order makes
    # the traversal an exact mirror of the reverse walk.
    n = 0
    x = ac
    y = ar
    dx = bc - ac
    dy = br - ar
    sx = 0
    sy = 0
    if dx > 0:
        sx = 1
    elif dx < 0:
        sx = -1
    if dy > 0:
        sy = 1
    elif dy < 0:
        sy = -1
    if dx < 0:
        dx = -dx
    if dy < 0:
        dy = -dy
    cols[n] = x
    rows[n] = y
    n += 1
    ddx = 2 * dx
    ddy = 2 * dy
    if ddx >= ddy:
        error = dx
        errorprev = error
        for _ in range(dx):
            x += sx
            error += ddy
            if error > ddx:
                y += sy
                error -= ddx
                if error + errorprev < ddx:
                    cols[n] = x
                    rows[n] = y - sy
                    n += 1
                elif error + errorprev > ddx:
                    cols[n] = x - sx
                    rows[n] = y
                    n += 1
                else:
                    cols[n] = x
                    rows[n] = y - sy
                    n += 1
                    cols[n] = x - sx
                    rows[n] = y
                    n += 1
            cols[n] = x
            rows[n] = y
            n += 1
            errorprev = error
    else:
        error = dy
        errorprev = error
        for _ in range(dy):
            y += sy
            error += ddx
            if error > ddy:
                x += sx
                error -= ddy
                if error + errorprev < ddy:
                    cols[n] = x - sx
                    rows[n] = y
                    n += 1
                elif error + errorprev > ddy:
                    cols[n] = x
                    rows[n] = y - sy
                    n += 1
                else:
                    cols[n] = x - sx
                    rows[n] = y
                    n += 1
                    cols[n] = x
                    rows[n] = y - sy
                    n += 1
            cols[n] = x
            rows[n] = y
            n += 1
            errorprev = error
    return n


def _count_runs(occ, cols, rows, n):
    # Number of maximal Occupied runs along the listed cells. Consecutive
    # list entries that are diagonal neighbors are a corner pair: both were
    # touched at the same point of the ray, so they merge into one step
    # whose occupancy is the OR of the two (otherwise a free side cell
    # would split a single grazed wall into two runs). A run containing
    # the final cell is not counted (a ray ending inside a wall counts
    # only the walls strictly before it).
    runs = 0
    inside = False
    i = 0
    while i < n:
        o = occ[rows[i], cols[i]]
        if i + 1 < n and cols[i + 1] != cols[i] and rows[i + 1] != rows[i]:
            o = o or occ[rows[i + 1], cols[i + 1]]
            i += 1
        if o and not inside:
            runs += 1
        inside = o
        i += 1
    if inside:
        runs -= 1
    return runs


def _crossings_from(occ, ac, ar, bc, br, cols, rows):
    n = _supercover_fill(ac, ar, bc, br, cols, rows)
    return _count_runs(occ, cols, rows, n)


def _kvis_grid(occ, rc, rr):
    h, w = occ.shape
    out = np.full((h, w), -1, np.int16)
    cap = w + h + min(w, h) + 2
    cols = np.empty(cap, np.int32)
    rows = np.empty(cap, np.int32)
    for r in range(h):
        for c in range(w):
            if occ[r, c]:
                continue
            out[r, c] = _crossings_from(occ, rc, rr, c, r, cols, rows)
    return out


def _pairs_crossings(occ, acs, ars, bcs, brs):
    h, w = occ.shape
    cap = w + h + min(w, h) + 2
    cols = np.empty(cap, np.int32)
    rows = np.empty(cap, np.int32)
    m = acs.shape[0]
    out = np.empty(m, np.int32)
    for i in range(m):
        out[i] = _crossings_from(occ, acs[i], ars[i], bcs[i], brs[i], cols, rows)
    return out


def _symmetry_mismatches(w, h):
    # Exhaustively compare trace(a, b) with reversed trace(b, a) for every
    # ordered cell pair on a w x h grid. Returns the number of mismatches.
    cap = w + h + min(w, h) + 2
    c1 = np.empty(cap, np.int32)
    r1 = np.empty(cap, np.int32)
    c2 = np.empty(cap, np.int32)
    r2 = np.empty(cap, np.int32)
    bad = 0
    for ac in range(w):
        for ar in range(h):
            for bc in range(w):
                for br in range(h):
                    n1 = _supercover_fill(ac, ar, bc, br, c1, r1)
                    n2 = _supercover_fill(bc, br, ac, ar, c2, r2)
                    if n1 != n2:
                        bad += 1
                        continue
                    for i in range(n1):
                        j = n1 - 1 - i
                        if c1[i] != c2[j] or r1[i] != r2[j]:
                            bad += 1
                            break
    return bad


def _kmeans_dp_loop(s1, s2, kk):
    # Exact 1-D k-means on sorted data via the contiguous-partition dynamic
    # program. s1/s2 are prefix sums of the samples and their squares
    # (length n + 1). Returns the start index of each of the kk clusters.
    n = s1.shape[0] - 1
    prev = np.empty(n, np.float64)
    cur = np.empty(n, np.float64)
    parent = np.zeros((kk, n), np.int32)
    for j in range(n):
        ln = j + 1
        prev[j] = s2[j + 1] - s1[j + 1] * s1[j + 1] / ln
    for k in range(1, kk):
        for j in range(n):
            if j < k:
                cur[j] = np.inf
                parent[k, j] = j
                continue
            best = np.inf
            argi = k
            for i in range(k, j + 1):
                width = j - i + 1
                ds = s1[j + 1] - s1[i]
                c = prev[i - 1] + (s2[j + 1] - s2[i]) - ds * ds / width
                if c < best:
                    best = c
                    argi = i
            cur[j] = best
            parent[k, j] = argi
        for j in range(n):
            prev[j] = cur[j]
    bounds = np.empty(kk, np.int32)
    j = n - 1
    for k in range(kk - 1, 0, -1):
        i = parent[k, j]
        bounds[k] = i
        j = i - 1
    bounds[0] = 0
    return bounds


def _kmeans_dp_numpy(s1, s2, kk):
    # Vectorized twin of _kmeans_dp_loop: identical arithmetic per element,
    # identical first-hit tie breaking via argmin.
    n = s1.shape[0] - 1
    idx = np.arange(n + 1)
    prev = s2[1:] - s1[1:] * s1[1:] / idx[1:]
    parent = np.zeros((kk, n), np.int32)
    for k in range(1, kk):
        cur = np.full(n, np.inf)
        for j in range(k, n):
            i = idx[k : j + 1]
            width = j - i + 1
            ds = s1[j + 1] - s1[i]
            c = prev[i - 1] + (s2[j + 1] - s2[i]) - ds * ds / width
            a = int(np.argmin(c))
            cur[j] = c[a]
            parent[k, j] = k + a
        parent[k, :k] = idx[:k]
        prev = cur
    bounds = np.empty(kk, np.int32)
    j = n - 1
    for k in range(kk - 1, 0, -1):
        i = parent[k, j]
        bounds[k] = i
        j = i - 1
    bounds[0] = 0
    return bounds


if NUMBA_ENABLED:
    # rebind the private names in dependency order so callers compile against
    # the jitted callees, not the plain Python ones
    _jit = numba.njit(cache=True, nogil=True)
    _supercover_fill = _jit(_supercover_fill)
    _count_runs = _jit(_count_runs)
    _crossings_from = _jit(_crossings_from)
    _kvis_grid = _jit(_kvis_grid)
    _pairs_crossings = _jit(_pairs_crossings)
    _symmetry_mismatches = _jit(_symmetry_mismatches)
    kmeans_dp = _jit(_kmeans_dp_loop)
else:
    kmeans_dp = _kmeans_dp_numpy

supercover_fill = _supercover_fill
count_runs = _count_runs
crossings_from = _crossings_from
kvis_grid = _kvis_grid
pairs_crossings = _pairs_crossings
symmetry_mismatches = _symmetry_mismatches


def trace_cells(ac: int, ar: int, bc: int, br: int) -> tuple[np.ndarray, np.ndarray]:
    """Supercover cells from (ac, ar) to (bc, br) as (cols, rows) arrays."""
    cap = ray_capacity(bc - ac, br - ar)
    cols = np.empty(cap, np.int32)
    rows = np.empty(cap, np.int32)
    n = supercover_fill(ac, ar, bc, br, cols, rows)
    return cols[:n], rows[:n]


def warmup() -> None:
    """Force compilation of every kernel (no-op without numba)."""
    occ = np.zeros((4, 4), np.bool_)
    trace_cells(0, 0, 3, 3)
    kvis_grid(occ, 0, 0)
    one = np.zeros(1, np.int32)
    pairs_crossings(occ, one, one, one + 3, one + 3)
    symmetry_mismatches(2, 2)
    x = np.array([0.0, 1.0, 5.0, 6.0])
    s1 = np.concatenate(([0.0], np.cumsum(x)))
    s2 = np.concatenate(([0.0], np.cumsum(x * x)))
    kmeans_dp(s1, s2, 2)
