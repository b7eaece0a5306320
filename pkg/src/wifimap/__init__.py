"""Indoor occupancy mapping from a robot trajectory and router signal strength.

The library covers the full loop. RSSI is simulated over a known floor plan
and classified into per-sample wall counts; those counts then invert back
into a map, either densely from a complete wall-count plot or sparsely from
the trajectory alone. ``python -m wifimap.cli`` (or the ``wifimap`` script)
exposes the same steps as subcommands.

Hot geometry kernels are JIT-compiled when numba is importable; set the
environment variable WIFIMAP_NO_NUMBA=1 before import to force the plain
numpy implementations.
"""

from .classify import (
    RssiClassifier,
    classify_rssi,
    fit_kmeans_1d,
    smooth_rssi,
    thresholds_from_centroids,
)
from .dense import border_cells, invert_dense
from .errors import WifimapError
from .evaluate import EvalReport, evaluate_maps
from .grid import GridMap, load_pgm, save_pgm
from .kvisibility import (
    K_UNDEFINED,
    count_crossings,
    count_crossings_batch,
    kvis_plot,
    load_kgrid_pgm,
    save_kgrid_pgm,
)
from .maps import three_room_map, three_room_router, three_room_trajectory
from .render import render, render_belief, render_composite, render_kgrid, render_occupancy
from .simulate import PathLossParams, densify, generate_trace, rssi_at
from .sparse import (
    MODE_GAUSSIAN,
    MODE_LITERAL,
    FreeSpaceAccumulator,
    SparseParams,
    SparseResult,
    WallBeliefGrid,
    assign_wall_probability,
    build_sparse_map,
    fuse_beliefs,
    mark_free_space,
    segment_ray,
    segment_trajectory,
    update_endpoints,
)
from .traces import TrajectorySample, load_trace, save_trace

__version__ = "0.1.0"

__all__ = [
    "EvalReport",
    "FreeSpaceAccumulator",
    "GridMap",
    "K_UNDEFINED",
    "MODE_GAUSSIAN",
    "MODE_LITERAL",
    "PathLossParams",
    "RssiClassifier",
    "SparseParams",
    "SparseResult",
    "TrajectorySample",
    "WallBeliefGrid",
    "WifimapError",
    "assign_wall_probability",
    "border_cells",
    "build_sparse_map",
    "classify_rssi",
    "count_crossings",
    "count_crossings_batch",
    "densify",
    "evaluate_maps",
    "fit_kmeans_1d",
    "fuse_beliefs",
    "generate_trace",
    "invert_dense",
    "kvis_plot",
    "load_kgrid_pgm",
    "load_pgm",
    "load_trace",
    "mark_free_space",
    "render",
    "render_belief",
    "render_composite",
    "render_kgrid",
    "render_occupancy",
    "rssi_at",
    "save_kgrid_pgm",
    "save_pgm",
    "save_trace",
    "segment_ray",
    "segment_trajectory",
    "smooth_rssi",
    "three_room_map",
    "three_room_router",
    "three_room_trajectory",
    "thresholds_from_centroids",
    "update_endpoints",
]
