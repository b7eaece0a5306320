"""PNG views of grids, k-value plots and belief fields.

Every function returns raw PNG bytes so callers decide about paths; the
encoder is driven deterministically, identical inputs give identical bytes.
"""

from __future__ import annotations

import io

import numpy as np
from PIL import Image

from .errors import DimensionMismatchError, InvalidKGridError, UnsupportedGridKindError
from .grid import GridMap
from .kvisibility import K_UNDEFINED
from .sparse import WallBeliefGrid

# wall-count palette, cycling after the fourth class
K_COLORS = (
    (255, 0, 0),      # k = 0, red
    (0, 200, 0),      # k = 1, green
    (0, 80, 255),     # k = 2, blue
    (230, 200, 0),    # k = 3, yellow
)
K_UNDEFINED_COLOR = (0, 0, 0)


def _png_bytes(img: Image.Image) -> bytes:
    buf = io.BytesIO()
    img.save(buf, format="PNG")
    return buf.getvalue()


def _rgb_from(arr: np.ndarray) -> Image.Image:
    return Image.fromarray(arr, mode="RGB")


def render_occupancy(grid: GridMap, scale: int = 1) -> bytes:
    """Grayscale view: white free, black walls, mid-gray unknown."""
    img = Image.fromarray(grid.cells, mode="L")
    if scale > 1:
        img = img.resize((img.width * scale, img.height * scale), Image.NEAREST)
    return _png_bytes(img)


def render_kgrid(kgrid: np.ndarray, scale: int = 1) -> bytes:
    """Color-coded wall counts, one color per k, black where undefined."""
    if kgrid.ndim != 2:
        raise InvalidKGridError(f"expected a 2-D k-grid, got shape {kgrid.shape}")
    h, w = kgrid.shape
    rgb = np.zeros((h, w, 3), np.uint8)
    defined = kgrid != K_UNDEFINED
    for ci, color in enumerate(K_COLORS):
        sel = defined & (kgrid % len(K_COLORS) == ci)
        rgb[sel] = color
    rgb[~defined] = K_UNDEFINED_COLOR
    img = _rgb_from(rgb)
    if scale > 1:
        img = img.resize((w * scale, h * scale), Image.NEAREST)
    return _png_bytes(img)


def render_belief(beliefs: WallBeliefGrid, scale: int = 1) -> bytes:
    """Wall belief as grayscale, brightest at the strongest mean."""
    mmax = beliefs.max_mu()
    if mmax <= 0.0:
        gray = np.zeros(beliefs.mu.shape, np.uint8)
    else:
        gray = np.zeros(beliefs.mu.shape, np.uint8)
        vals = np.clip(beliefs.mu / mmax, 0.0, 1.0) * 255.0
        gray[beliefs.seen] = np.round(vals[beliefs.seen]).astype(np.uint8)
    img = Image.fromarray(gray, mode="L")
    if scale > 1:
        img = img.resize((img.width * scale, img.height * scale), Image.NEAREST)
    return _png_bytes(img)


def render(obj, scale: int = 1) -> bytes:
    """Render whatever grid kind is handed in, picking the palette by type.

    GridMap gets the occupancy grayscale, an integer array the k palette,
    WallBeliefGrid the belief grayscale.
    """
    if isinstance(obj, GridMap):
        return render_occupancy(obj, scale)
    if isinstance(obj, WallBeliefGrid):
        return render_belief(obj, scale)
    if isinstance(obj, np.ndarray) and obj.ndim == 2 and np.issubdtype(obj.dtype, np.integer):
        return render_kgrid(obj, scale)
    raise UnsupportedGridKindError(f"no renderer for {type(obj).__name__}")


def render_composite(
    grid: GridMap,
    beliefs: WallBeliefGrid | None = None,
    trajectory: list[tuple[int, int, int]] | None = None,
    scale: int = 1,
) -> bytes:
    """Occupancy base with a red belief overlay and k-colored trajectory dots.

    ``trajectory`` entries are (col, row, k) tuples.
    """
    h, w = grid.cells.shape
    rgb = np.stack([grid.cells] * 3, axis=-1).astype(np.uint8)
    if beliefs is not None:
        if beliefs.mu.shape != grid.cells.shape:
            raise DimensionMismatchError(
                f"belief shape {beliefs.mu.shape} does not match grid {grid.cells.shape}"
            )
        mmax = beliefs.max_mu()
        if mmax > 0.0:
            strength = np.where(beliefs.seen, np.clip(beliefs.mu / mmax, 0.0, 1.0), 0.0)
            base = rgb.astype(np.float64)
            red = np.array([255.0, 0.0, 0.0])
            blended = base * (1.0 - strength[..., None]) + red * strength[..., None]
            rgb = np.round(blended).astype(np.uint8)
    if trajectory:
        for col, row, k in trajectory:
            if 0 <= row < h and 0 <= col < w:
                rgb[row, col] = K_COLORS[int(k) % len(K_COLORS)]
    img = _rgb_from(rgb)
    if scale > 1:
        img = img.resize((w * scale, h * scale), Image.NEAREST)
    return _png_bytes(img)
