"""Exception hierarchy shared across the package."""


class GeometryError(ValueError):
    """Base class for violated geometric preconditions."""


class MetricError(GeometryError):
    """Metric singular, asymmetric, or of the wrong signature."""


class DegeneratePlaneError(GeometryError):
    pass


class SpacelikeViolation(GeometryError):
    """A graph fails ``1 + eps |grad u|^2 > 0`` at an evaluation point."""


class NotASolitonError(GeometryError):
    """A soliton-only identity was requested on a graph not flagged as a soliton."""


class PreconditionError(GeometryError):
    """A caller-supplied hypothesis (curvature bound, H <= G, ...) fails."""
