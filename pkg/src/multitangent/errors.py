"""Exception and warning types shared across the package."""

from __future__ import annotations


class MultitangentError(Exception):
    """Base class for all package errors."""


class ZeroVectorError(MultitangentError, ValueError):
    """A projective element was built from the zero vector."""


class AtInfinityError(MultitangentError, ValueError):
    """Chart coordinates requested for a point on the chart's infinity hyperplane."""


class ChartNotFoundError(MultitangentError):
    """No affine chart separates the shape from the hyperplane's infinity locus.

    Unreachable for the bounded shape kinds bundled here; kept for API
    completeness.
    """


class NotTouchingError(MultitangentError):
    """Contact points requested for a hyperplane that does not touch the shape."""


class NoComponentsError(MultitangentError):
    """Implicit curve has no sign change anywhere on the sample grid."""


class OpenComponentError(MultitangentError):
    """A traced contour component touches the bounding box boundary."""


class SceneError(MultitangentError, ValueError):
    """Scene construction or scene file validation failed."""

    def __init__(self, message: str, field: str | None = None):
        self.field = field
        if field:
            message = f"{message} (field: {field})"
        super().__init__(message)


class PointOnShapeError(MultitangentError, ValueError):
    """Candidate condition point lies on (or inside) one of the scene's shapes."""


class UnsupportedDimensionError(MultitangentError, ValueError):
    """Operation not available in this ambient dimension."""


class NoContactError(MultitangentError):
    """A shape lies strictly on one side of the hyperplane with no contact."""

    def __init__(self, shape_index: int):
        self.shape_index = shape_index
        super().__init__(f"shape {shape_index} does not touch the hyperplane")


class NotSupportingError(MultitangentError):
    """The hyperplane cuts through a shape instead of supporting it."""

    def __init__(self, shape_index: int):
        self.shape_index = shape_index
        super().__init__(f"hyperplane cuts shape {shape_index}")


class RefinementDivergedError(MultitangentError):
    """Tangency refinement did not reach a verifiable support."""

    def __init__(self, best_residual: float):
        self.best_residual = best_residual
        super().__init__(f"refinement stalled at residual {best_residual:.3e}")


class ConditionNotEstablishedError(MultitangentError):
    """No accepted condition point was found; the dual pipeline cannot run."""


class RegionNotCompactError(MultitangentError):
    """The sampled dual region kept hitting the grid boundary up to the bounds cap."""


class RenderUnsupportedError(MultitangentError, ValueError):
    """SVG rendering is only available for planar scenes."""


class EmptyRegionWarning(UserWarning):
    """The dual region sample came back empty; likely under-resolved."""
