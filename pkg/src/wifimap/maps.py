"""Bundled demo floor plan: three rooms in a row at desk scale.

The building lives in a 5 x 5 m world. Outer walls 0.1 m thick enclose
[0.2, 4.8] x [0.5, 4.4]; two vertical partitions at x = [1.7, 1.8] and
x = [3.2, 3.3] cut the interior into rooms A, B and C of 1.4 x 3.7 m each.
The A-B door sits at the far end of its partition (y in [3.5, 4.3]), the
B-C door at the near end (y in [0.6, 1.4]), so no straight line from room A
passes through both. Free area is 15.7 m^2. All wall coordinates are
multiples of 0.1 m, so any resolution dividing 0.1 rasterizes them exactly;
0.025 gives a 200 x 200 grid.

With the suggested router in room A, room B sits one wall away and most of
room C two, giving traces the full k = 0, 1, 2 range. The demo trajectory
walks a wall-hugging loop in each room at a constant 0.3 m offset, passing
through both doors. Keeping the offset identical on both sides of every
partition puts each partition exactly midway between neighboring loops,
which is what lets midpoint-peaked wall estimates land on the actual walls.
"""

from __future__ import annotations

import numpy as np

from .grid import FREE_VALUE, GridMap, OCCUPIED_VALUE, UNKNOWN_VALUE
from .simulate import densify

WORLD_SIZE = 5.0

# wall rectangles, meters: (x0, y0, x1, y1)
_WALLS = (
    (0.2, 0.5, 4.8, 0.6),    # outer, top row of the image
    (0.2, 4.3, 4.8, 4.4),    # outer, bottom
    (0.2, 0.6, 0.3, 4.3),    # outer, left
    (4.7, 0.6, 4.8, 4.3),    # outer, right
    (1.7, 0.6, 1.8, 3.5),    # partition A-B, door at y in [3.5, 4.3]
    (3.2, 1.4, 3.3, 4.3),    # partition B-C, door at y in [0.6, 1.4]
)

# interior rectangles, meters
_ROOMS = (
    (0.3, 0.6, 1.7, 4.3),    # A: left room (router's room)
    (1.8, 0.6, 3.2, 4.3),    # B: middle room
    (3.3, 0.6, 4.7, 4.3),    # C: right room
    (1.7, 3.5, 1.8, 4.3),    # door A-B
    (3.2, 0.6, 3.3, 1.4),    # door B-C
)

ROUTER = (1.0, 2.4)

# wall-hugging loops at 0.3 m offset, door transits at loop-edge height so
# the path never cuts across a room
_LOOP_WAYPOINTS = (
    (1.4, 4.0),
    (0.6, 4.0),
    (0.6, 0.9),
    (1.4, 0.9),
    (1.4, 4.0),      # room A loop closed at the door-1 mouth
    (2.1, 4.0),      # through door A-B
    (2.9, 4.0),
    (2.9, 0.9),
    (2.1, 0.9),
    (2.1, 4.0),      # room B loop closed
    (2.1, 0.9),      # back down the B loop's left edge
    (2.9, 0.9),      # along the bottom to the door-2 mouth
    (3.6, 0.9),      # through door B-C
    (4.4, 0.9),
    (4.4, 4.0),
    (3.6, 4.0),
    (3.6, 0.9),      # room C loop closed
)


def _paint(cells: np.ndarray, rect: tuple[float, float, float, float], resolution: float, value: int) -> None:
    x0, y0, x1, y1 = rect
    c0 = int(round(x0 / resolution))
    c1 = int(round(x1 / resolution))
    r0 = int(round(y0 / resolution))
    r1 = int(round(y1 / resolution))
    cells[r0:r1, c0:c1] = value


def three_room_map(resolution: float = 0.05) -> GridMap:
    """Rasterize the demo plan; exterior stays Unknown."""
    size = int(round(WORLD_SIZE / resolution))
    cells = np.full((size, size), UNKNOWN_VALUE, np.uint8)
    for room in _ROOMS:
        _paint(cells, room, resolution, FREE_VALUE)
    for wall in _WALLS:
        _paint(cells, wall, resolution, OCCUPIED_VALUE)
    return GridMap(cells, resolution, (0.0, 0.0))


def three_room_router() -> tuple[float, float]:
    return ROUTER


def three_room_trajectory(spacing: float = 0.05) -> list[tuple[float, float]]:
    """Perimeter trajectory through all three rooms at ``spacing`` meters."""
    return densify(list(_LOOP_WAYPOINTS), spacing)
