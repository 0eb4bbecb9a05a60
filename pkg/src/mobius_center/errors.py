"""Exception hierarchy shared by all modules."""


class GeometryError(Exception):
    """Base class for every error raised by this package."""


class SingularMatrix(GeometryError):
    pass


class DegenerateSimplex(GeometryError):
    pass


class DegenerateTriangulation(GeometryError):
    """A cone triangulation contains simplices below the degeneracy threshold."""

    def __init__(self, message, indices=()):
        super().__init__(message)
        self.indices = tuple(indices)


class ZeroVolume(GeometryError):
    pass


class InvalidSimilarity(GeometryError):
    pass


class InvalidField(GeometryError):
    pass


class DimensionMismatch(GeometryError, ValueError):
    pass


class PoleHit(GeometryError):
    pass


class FlowError(GeometryError):
    """Base for failures while integrating a flow; ``time`` is when it happened."""

    def __init__(self, message, time):
        super().__init__(message)
        self.time = float(time)
        self.trajectory = None


class VolumeCollapse(FlowError):
    pass


class NonFinite(FlowError):
    pass


class FormatError(GeometryError, ValueError):
    """Input file does not match the expected JSON schema."""
