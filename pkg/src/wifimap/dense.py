"""Dense inversion: recover walls from a complete k-grid.

Walls are the Undefined cells of the k-grid. When the grid has no Undefined
band at all (idealized plots where consecutive k regions touch directly),
the higher-k cell of every 4-adjacent |dk| = 1 pair is marked instead: the
wall occludes the higher-k side first along the ray from the router. The
two rules never mix. In a grid that labels its walls, a defined |dk| = 1
pair can only straddle a shadow edge (two rays that disagree, no wall
between the cells), and marking those would paint walls in open space.
Pairs differing by more than one are left alone and logged for inspection.
"""

from __future__ import annotations

import logging

import numpy as np

from .errors import InvalidKGridError
from .grid import FREE_VALUE, GridMap, OCCUPIED_VALUE
from .kvisibility import K_UNDEFINED

log = logging.getLogger(__name__)

_SHIFTS = ((0, 1), (1, 0), (0, -1), (-1, 0))


def border_cells(kgrid: np.ndarray) -> set[tuple[int, int]]:
    """Higher-k cells of all 4-adjacent defined pairs with |dk| == 1.

    Pure pair scan, (col, row) tuples. invert_dense applies this set only
    to grids without Undefined cells; on labeled grids the walls themselves
    carry the border information.
    """
    k = np.asarray(kgrid)
    defined = k != K_UNDEFINED
    marked = np.zeros(k.shape, bool)
    big_gaps = 0
    for dc, dr in _SHIFTS:
        a = np.s_[max(dr, 0) : k.shape[0] + min(dr, 0), max(dc, 0) : k.shape[1] + min(dc, 0)]
        b = np.s_[max(-dr, 0) : k.shape[0] + min(-dr, 0), max(-dc, 0) : k.shape[1] + min(-dc, 0)]
        both = defined[a] & defined[b]
        diff = k[a].astype(np.int32) - k[b].astype(np.int32)
        marked[a] |= both & (diff == 1)
        big_gaps += int(np.count_nonzero(both & (np.abs(diff) > 1)))
    if big_gaps:
        log.debug("border scan: %d 4-adjacent pairs with |dk| > 1 left unmarked", big_gaps)
    rows, cols = np.nonzero(marked)
    return {(int(c), int(r)) for c, r in zip(cols, rows)}


def invert_dense(
    kgrid: np.ndarray,
    router: tuple[int, int],
    resolution: float = 1.0,
    origin: tuple[float, float] = (0.0, 0.0),
) -> GridMap:
    """Occupancy map from a k-grid.

    Undefined cells become Occupied. If the grid has no Undefined cells,
    the |dk| = 1 border cells become Occupied instead. Everything else is
    Free.
    """
    k = np.asarray(kgrid)
    if k.ndim != 2:
        raise InvalidKGridError(f"k-grid must be 2D, got shape {k.shape}")
    c, r = int(router[0]), int(router[1])
    if not (0 <= c < k.shape[1] and 0 <= r < k.shape[0]):
        raise InvalidKGridError(f"router {router} outside k-grid {k.shape[1]}x{k.shape[0]}")
    if k[r, c] != 0:
        raise InvalidKGridError(f"router cell must have k=0, found {k[r, c]}")

    cells = np.full(k.shape, FREE_VALUE, np.uint8)
    undefined = k == K_UNDEFINED
    if undefined.any():
        cells[undefined] = OCCUPIED_VALUE
    else:
        for col, row in border_cells(k):
            cells[row, col] = OCCUPIED_VALUE
    return GridMap(cells, resolution, origin)
