"""Forward k-visibility: how many walls a straight ray crosses.

The k-value of a cell with respect to a router is the number of maximal
contiguous Occupied runs the router-to-cell ray passes through, counted on
the supercover cell list. A wall three cells thick is one crossing; Unknown
cells count as Free; a ray that ends inside a wall counts only the walls
strictly before it. Rays that merely graze a wall corner do count that wall
(the supercover includes corner-touched cells).
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from . import kernels
from .errors import PgmFormatError, SourceInsideWallError
from .grid import GridMap, load_pgm, save_pgm

K_UNDEFINED = -1


def count_crossings(grid: GridMap, frm: tuple[int, int], to: tuple[int, int]) -> int:
    """Wall crossings along the ray from cell ``frm`` to cell ``to``."""
    frm = grid._require_cell(frm)
    to = grid._require_cell(to)
    if grid.is_occupied(frm):
        raise SourceInsideWallError(f"ray source {frm} is an Occupied cell")
    occ = grid.occupied_mask()
    return int(kernels.crossings_from(occ, frm[0], frm[1], to[0], to[1], *_ray_buffers(grid)))


def _ray_buffers(grid: GridMap) -> tuple[np.ndarray, np.ndarray]:
    cap = grid.width + grid.height + min(grid.width, grid.height) + 2
    return np.empty(cap, np.int32), np.empty(cap, np.int32)


def count_crossings_batch(
    grid: GridMap,
    frm: tuple[int, int],
    targets_cols: np.ndarray,
    targets_rows: np.ndarray,
) -> np.ndarray:
    """count_crossings from one source to many targets, as an int32 array."""
    frm = grid._require_cell(frm)
    if grid.is_occupied(frm):
        raise SourceInsideWallError(f"ray source {frm} is an Occupied cell")
    occ = grid.occupied_mask()
    n = len(targets_cols)
    acs = np.full(n, frm[0], np.int32)
    ars = np.full(n, frm[1], np.int32)
    return kernels.pairs_crossings(
        occ, acs, ars, np.asarray(targets_cols, np.int32), np.asarray(targets_rows, np.int32)
    )


def kvis_plot(grid: GridMap, router: tuple[int, int]) -> np.ndarray:
    """k-value of every cell as int16; Occupied cells get K_UNDEFINED (-1).

    The router cell itself always comes out 0.
    """
    router = grid._require_cell(router)
    if grid.is_occupied(router):
        raise SourceInsideWallError(f"router cell {router} is an Occupied cell")
    occ = grid.occupied_mask()
    return kernels.kvis_grid(occ, router[0], router[1])


def save_kgrid_pgm(kgrid: np.ndarray, path: str | Path, resolution: float = 1.0, origin=(0.0, 0.0)) -> None:
    """Export a k-grid as PGM: k clipped to 0..254, Undefined becomes 255."""
    k = np.asarray(kgrid)
    out = np.clip(k, 0, 254).astype(np.uint8)
    out[k == K_UNDEFINED] = 255
    save_pgm(GridMap(out, resolution, origin), path)


def load_kgrid_pgm(path: str | Path) -> tuple[np.ndarray, GridMap]:
    """Inverse of save_kgrid_pgm. Returns (kgrid, carrier GridMap)."""
    carrier = load_pgm(path)
    k = carrier.cells.astype(np.int16)
    k[carrier.cells == 255] = K_UNDEFINED
    if k.size == 0:
        raise PgmFormatError(f"{path}: empty k-grid")
    return k, carrier
