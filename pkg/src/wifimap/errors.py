"""Exception types shared across the package."""


class WifimapError(Exception):
    """Base class for errors raised by this package."""


class OutOfBoundsError(WifimapError, ValueError):
    """A world point or cell index falls outside the grid."""


class PgmFormatError(WifimapError, ValueError):
    """A PGM file could not be parsed (bad magic, maxval, or size)."""


class SourceInsideWallError(WifimapError, ValueError):
    """A ray source cell is Occupied."""


class InvalidKGridError(WifimapError, ValueError):
    """A k-grid is inconsistent with the router (router cell must be k=0)."""


class EmptyTraceError(WifimapError, ValueError):
    """A trace has no samples."""


class InvalidWindowError(WifimapError, ValueError):
    """A smoothing window is even or non-positive."""


class TooFewSamplesError(WifimapError, ValueError):
    """Fewer samples than requested clusters."""


class DegenerateClustersError(WifimapError, ValueError):
    """Clustering produced coincident centroids (K too high for the data)."""


class NotDescendingError(WifimapError, ValueError):
    """Centroids passed to threshold derivation are not strictly descending."""


class EmptyTrajectoryError(WifimapError, ValueError):
    """A trajectory has no usable samples."""


class RouterOutOfBoundsError(WifimapError, ValueError):
    """The router position falls outside the grid."""


class RouterInsideWallError(WifimapError, ValueError):
    """The router cell is Occupied."""


class TrajectoryThroughWallError(WifimapError, ValueError):
    """A trajectory point lies inside an Occupied cell."""


class DegenerateRayError(WifimapError, ValueError):
    """Ray endpoint refinement collapsed to a single point."""


class NonpositiveSigmaError(WifimapError, ValueError):
    """A belief observation carries sigma <= 0."""


class DimensionMismatchError(WifimapError, ValueError):
    """Two grids that must share a shape do not."""


class UnsupportedGridKindError(WifimapError, TypeError):
    """render() was handed an object it has no palette for."""
