"""Occupancy grid map: storage, coordinate transforms, ray tracing, PGM I/O.

Grids are dense uint8 arrays in image convention: row-major, row 0 at the
top, so a PGM file maps directly onto the array. The grayscale byte of a
cell doubles as its occupancy state:

    value >= 250   Free
    value <= 50    Occupied
    otherwise      Unknown

Canonical bytes for the three states are 255, 0 and 127; conversion between
the occupancy view and the grayscale view through these constants is
lossless.

World coordinates are meters. ``origin`` is the world position of the
corner of cell (0, 0), whose center therefore sits at
``origin + resolution / 2`` on each axis. Rows grow with world y.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DimensionMismatchError, OutOfBoundsError, PgmFormatError
from .kernels import trace_cells

FREE_MIN = 250
OCCUPIED_MAX = 50
FREE_VALUE = 255
OCCUPIED_VALUE = 0
UNKNOWN_VALUE = 127

# occupancy codes used by to_occupancy / from_occupancy
UNKNOWN = 0
FREE = 1
OCCUPIED = 2

_OCC_TO_GRAY = np.array([UNKNOWN_VALUE, FREE_VALUE, OCCUPIED_VALUE], dtype=np.uint8)


@dataclass
class GridMap:
    """A 2D occupancy grid with world georeferencing."""

    cells: np.ndarray
    resolution: float = 1.0
    origin: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self) -> None:
        self.cells = np.asarray(self.cells, dtype=np.uint8)
        if self.cells.ndim != 2:
            raise ValueError(f"cells must be 2D, got shape {self.cells.shape}")
        if not (self.resolution > 0.0):
            raise ValueError(f"resolution must be positive, got {self.resolution}")
        self.origin = (float(self.origin[0]), float(self.origin[1]))

    @classmethod
    def blank(
        cls,
        width: int,
        height: int,
        resolution: float = 1.0,
        origin: tuple[float, float] = (0.0, 0.0),
        value: int = UNKNOWN_VALUE,
    ) -> "GridMap":
        """All cells set to ``value`` (Unknown by default)."""
        return cls(np.full((height, width), value, np.uint8), resolution, origin)

    @property
    def width(self) -> int:
        return self.cells.shape[1]

    @property
    def height(self) -> int:
        return self.cells.shape[0]

    def copy(self) -> "GridMap":
        return GridMap(self.cells.copy(), self.resolution, self.origin)

    # ------------------------------------------------------------------
    # coordinates

    def in_bounds(self, cell: tuple[int, int]) -> bool:
        c, r = cell
        return 0 <= c < self.width and 0 <= r < self.height

    def world_to_cell(self, p: tuple[float, float]) -> tuple[int, int]:
        """Cell (col, row) containing world point ``p``.

        Raises OutOfBoundsError when p falls outside the grid."""
        c = math.floor((p[0] - self.origin[0]) / self.resolution)
        r = math.floor((p[1] - self.origin[1]) / self.resolution)
        if not (0 <= c < self.width and 0 <= r < self.height):
            raise OutOfBoundsError(f"point {p} maps to cell ({c}, {r}) outside {self.width}x{self.height} grid")
        return (c, r)

    def cell_to_world(self, cell: tuple[int, int]) -> tuple[float, float]:
        """World coordinates of the center of ``cell``."""
        c, r = cell
        return (
            self.origin[0] + (c + 0.5) * self.resolution,
            self.origin[1] + (r + 0.5) * self.resolution,
        )

    def _require_cell(self, cell: tuple[int, int]) -> tuple[int, int]:
        cell = (int(cell[0]), int(cell[1]))
        if not self.in_bounds(cell):
            raise OutOfBoundsError(f"cell {cell} outside {self.width}x{self.height} grid")
        return cell

    # ------------------------------------------------------------------
    # occupancy views

    def occupied_mask(self) -> np.ndarray:
        return self.cells <= OCCUPIED_MAX

    def free_mask(self) -> np.ndarray:
        return self.cells >= FREE_MIN

    def unknown_mask(self) -> np.ndarray:
        return ~(self.occupied_mask() | self.free_mask())

    def is_occupied(self, cell: tuple[int, int]) -> bool:
        c, r = self._require_cell(cell)
        return bool(self.cells[r, c] <= OCCUPIED_MAX)

    def to_occupancy(self) -> np.ndarray:
        """Occupancy codes (UNKNOWN / FREE / OCCUPIED) for every cell."""
        out = np.full(self.cells.shape, UNKNOWN, np.uint8)
        out[self.free_mask()] = FREE
        out[self.occupied_mask()] = OCCUPIED
        return out

    @classmethod
    def from_occupancy(
        cls,
        codes: np.ndarray,
        resolution: float = 1.0,
        origin: tuple[float, float] = (0.0, 0.0),
    ) -> "GridMap":
        codes = np.asarray(codes)
        return cls(_OCC_TO_GRAY[codes], resolution, origin)

    # ------------------------------------------------------------------
    # rays

    def trace_ray(self, a: tuple[int, int], b: tuple[int, int]) -> np.ndarray:
        """Supercover rasterization of the segment between cell centers.

        Returns an (n, 2) int array of (col, row), ordered from a to b,
        including both endpoints. Every cell whose closed square the ideal
        segment touches is present, so the segment never slips between two
        diagonal cells; reversing a and b yields the exact reversed list.
        """
        a = self._require_cell(a)
        b = self._require_cell(b)
        cols, rows = trace_cells(a[0], a[1], b[0], b[1])
        return np.stack((cols, rows), axis=1)


def require_same_shape(a: GridMap | np.ndarray, b: GridMap | np.ndarray) -> None:
    sa = a.cells.shape if isinstance(a, GridMap) else a.shape
    sb = b.cells.shape if isinstance(b, GridMap) else b.shape
    if sa != sb:
        raise DimensionMismatchError(f"grid shapes differ: {sa} vs {sb}")


# ----------------------------------------------------------------------
# PGM (P5) + sidecar metadata


def _meta_path(path: Path) -> Path:
    return path.with_name(path.name + ".meta")


def save_pgm(grid: GridMap, path: str | Path, meta: bool = True) -> None:
    """Write a binary PGM (P5, maxval 255); optionally a key=value sidecar
    carrying resolution and origin next to it as ``<name>.meta``."""
    path = Path(path)
    header = f"P5\n{grid.width} {grid.height}\n255\n".encode("ascii")
    path.write_bytes(header + grid.cells.tobytes())
    if meta:
        _meta_path(path).write_text(
            f"resolution={grid.resolution!r}\n"
            f"origin_x={grid.origin[0]!r}\n"
            f"origin_y={grid.origin[1]!r}\n"
        )


def _read_pgm_tokens(data: bytes, count: int) -> tuple[list[int], int]:
    # Tokenize the PGM header after the magic: whitespace separated integers,
    # '#' comments run to end of line. Returns tokens and the offset just
    # past the single whitespace byte that terminates the last token.
    tokens: list[int] = []
    i = 0
    n = len(data)
    while len(tokens) < count:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i < n and data[i] == ord("#"):
            while i < n and data[i] != ord("\n"):
                i += 1
            continue
        j = i
        while j < n and not data[j : j + 1].isspace():
            j += 1
        if j == i:
            raise PgmFormatError("truncated PGM header")
        try:
            tokens.append(int(data[i:j]))
        except ValueError as exc:
            raise PgmFormatError(f"bad PGM header token {data[i:j]!r}") from exc
        i = j
    if i >= n or not data[i : i + 1].isspace():
        raise PgmFormatError("missing whitespace after PGM maxval")
    return tokens, i + 1


def load_pgm(path: str | Path) -> GridMap:
    """Read a binary PGM written by save_pgm (or any P5 with maxval 255).

    Picks up ``<name>.meta`` georeferencing when present; otherwise the map
    gets resolution 1.0 and origin (0, 0).
    """
    path = Path(path)
    data = path.read_bytes()
    if data[:2] != b"P5":
        raise PgmFormatError(f"{path}: not a binary PGM (magic {data[:2]!r})")
    (width, height, maxval), offset = _read_pgm_tokens(data[2:], 3)
    offset += 2
    if maxval != 255:
        raise PgmFormatError(f"{path}: unsupported maxval {maxval} (need 255)")
    if width <= 0 or height <= 0:
        raise PgmFormatError(f"{path}: bad dimensions {width}x{height}")
    body = data[offset : offset + width * height]
    if len(body) != width * height:
        raise PgmFormatError(f"{path}: expected {width * height} pixel bytes, found {len(body)}")
    cells = np.frombuffer(body, np.uint8).reshape(height, width).copy()

    resolution = 1.0
    origin = (0.0, 0.0)
    mp = _meta_path(path)
    if mp.exists():
        kv: dict[str, float] = {}
        for line in mp.read_text().splitlines():
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            key, _, value = line.partition("=")
            kv[key.strip()] = float(value)
        resolution = kv.get("resolution", resolution)
        origin = (kv.get("origin_x", 0.0), kv.get("origin_y", 0.0))
    return GridMap(cells, resolution, origin)
