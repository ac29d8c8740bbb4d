"""Exception types raised by the library.

Everything derives from GeometryError so callers can catch the whole
family at once; the classify pipeline does exactly that and converts
failures into a Degenerate verdict.
"""


class GeometryError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(GeometryError):
    """Inputs that must share a dimension do not."""


class DegenerateInput(GeometryError):
    """Leading input vector is numerically zero."""


class TooFewSamples(GeometryError):
    """Not enough samples for the requested stencil or quadrature."""


class NonFiniteField(GeometryError):
    """ODE right-hand side returned NaN or Inf."""


class OffManifold(GeometryError):
    """Point violates the manifold constraint beyond tolerance."""


class NonTangentSeed(GeometryError):
    """Transport seed vector is not tangent at its base point."""


class GridMismatch(GeometryError):
    """Field and curve are sampled on different grids."""


class DegenerateCurve(GeometryError):
    """Curve has a stationary point; arclength parametrization fails."""


class NonMonotoneLength(GeometryError):
    """Numerical arclength failed to be strictly increasing."""


class BadParams(GeometryError):
    """Generator parameters violate a constraint."""


class DegenerateCurvature(GeometryError):
    """A required curvature vanishes on too much of the curve."""


class DimensionTooHigh(GeometryError):
    """Intrinsic dimension exceeds the supported cap (16)."""


class EvenDimension(GeometryError):
    """Operation defined only in odd intrinsic dimension."""


class NotAHelix(GeometryError):
    """Verification requested for a curve that does not classify as a helix."""
