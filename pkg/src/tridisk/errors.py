"""Exception hierarchy used across the package."""


class TridiskError(Exception):
    """Base class for all package-specific errors."""


class ValidationError(TridiskError):
    """A quadrilateral failed one of its structural invariants."""


class NotSimple(ValidationError):
    pass


class WrongOrientation(ValidationError):
    pass


class DegenerateArea(ValidationError):
    pass


class BadQuadIndices(ValidationError):
    pass


class DegenerateInput(ValidationError):
    pass


class OutsidePolygon(TridiskError):
    pass


class Disconnected(TridiskError):
    """A medial-axis graph failed to form a single connected tree."""


class ReflexQuadVertex(TridiskError):
    """A sweep was requested on a quadrilateral with a non-convex quad-vertex."""


class SweepFailure(TridiskError):
    """No sweep parameter with three touched sides was found."""


class NoneFound(TridiskError):
    """Grid search found no disk with enough side contacts."""


class NonPositiveDistance(TridiskError):
    pass


class BadK(TridiskError):
    pass


class ModulusOutOfRange(TridiskError):
    pass


class RasterTooCoarse(TridiskError):
    pass


class InsetCollapse(TridiskError):
    """The requested inward offset destroys the polygon.

    Carries ``feasible_level``: the smallest level known to work, or None.
    """

    def __init__(self, message, feasible_level=None):
        super().__init__(message)
        self.feasible_level = feasible_level


class NotNested(TridiskError):
    pass


class SideDistanceIncreased(TridiskError):
    pass


class LabelMismatch(TridiskError):
    pass
