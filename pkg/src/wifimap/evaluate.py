"""Map-against-map scoring.

Reconstructions are compared to ground truth per cell class: IoU over Free,
precision/recall over Occupied. Wall checks accept a Chebyshev tolerance,
since a reconstructed wall one cell off is usually a rasterization artifact
rather than an error worth punishing.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass

import numpy as np

from .errors import DimensionMismatchError
from .grid import GridMap


def _dilate(mask: np.ndarray, radius: int) -> np.ndarray:
    """Chebyshev dilation by OR-ing shifted copies."""
    if radius <= 0:
        return mask.copy()
    out = np.zeros_like(mask)
    h, w = mask.shape
    for dr in range(-radius, radius + 1):
        for dc in range(-radius, radius + 1):
            src_r = slice(max(0, -dr), min(h, h - dr))
            src_c = slice(max(0, -dc), min(w, w - dc))
            dst_r = slice(max(0, dr), min(h, h + dr))
            dst_c = slice(max(0, dc), min(w, w + dc))
            out[dst_r, dst_c] |= mask[src_r, src_c]
    return out


@dataclass
class EvalReport:
    """Scores plus the cell-class census of the prediction.

    count_unknown + count_free + count_occupied equals the number of scored
    cells (the whole grid unless a region mask was given).
    """

    free_iou: float
    wall_precision: float
    wall_recall: float
    explored_fraction: float
    tolerance_cells: int
    count_unknown: int
    count_free: int
    count_occupied: int
    n_free_true: int
    n_wall_true: int
    no_wall_predictions: bool

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    def to_text(self) -> str:
        lines = []
        for key, value in asdict(self).items():
            if isinstance(value, bool):
                lines.append(f"{key}={str(value).lower()}")
            elif isinstance(value, float):
                lines.append(f"{key}={value:.6f}")
            else:
                lines.append(f"{key}={value}")
        return "\n".join(lines)


def evaluate_maps(
    predicted: GridMap,
    truth: GridMap,
    tolerance_cells: int = 1,
    region: np.ndarray | None = None,
) -> EvalReport:
    """Score a reconstruction against ground truth.

    ``region`` optionally restricts scoring to a boolean mask (e.g. the
    ray-covered area); cells outside it are ignored. Conventions: free IoU
    of two empty free sets is 1.0; with zero predicted walls precision is
    1.0 and ``no_wall_predictions`` is set; explored_fraction is the share
    of ground-truth Free cells the prediction also marks Free.
    """
    if predicted.cells.shape != truth.cells.shape:
        raise DimensionMismatchError(
            f"shape mismatch: predicted {predicted.cells.shape} vs truth {truth.cells.shape}"
        )
    if region is None:
        region = np.ones(truth.cells.shape, bool)
    elif region.shape != truth.cells.shape:
        raise DimensionMismatchError(f"region shape {region.shape} does not match {truth.cells.shape}")

    free_t = truth.free_mask() & region
    free_p = predicted.free_mask() & region
    union = int((free_t | free_p).sum())
    inter = int((free_t & free_p).sum())
    free_iou = 1.0 if union == 0 else inter / union
    n_free_true = int(free_t.sum())
    explored = 1.0 if n_free_true == 0 else inter / n_free_true

    wall_t = truth.occupied_mask() & region
    wall_p = predicted.occupied_mask() & region
    # dilate over the full grid so matches just outside the region still count
    wall_t_halo = _dilate(truth.occupied_mask(), tolerance_cells)
    wall_p_halo = _dilate(predicted.occupied_mask(), tolerance_cells)

    n_pred = int(wall_p.sum())
    no_pred = n_pred == 0
    precision = 1.0 if no_pred else int((wall_p & wall_t_halo).sum()) / n_pred
    n_true = int(wall_t.sum())
    recall = 1.0 if n_true == 0 else int((wall_t & wall_p_halo).sum()) / n_true

    n_region = int(region.sum())
    count_free = int(free_p.sum())
    count_occupied = n_pred
    return EvalReport(
        free_iou=free_iou,
        wall_precision=precision,
        wall_recall=recall,
        explored_fraction=explored,
        tolerance_cells=tolerance_cells,
        count_unknown=n_region - count_free - count_occupied,
        count_free=count_free,
        count_occupied=count_occupied,
        n_free_true=n_free_true,
        n_wall_true=n_true,
        no_wall_predictions=no_pred,
    )
