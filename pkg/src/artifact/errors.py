"""Exception types shared across the package."""


class ArtifactError(Exception):
    """Base class for every error raised by this package."""


class InvalidArgument(ArtifactError, ValueError):
    """An input is outside the documented domain."""


class ResourceLimit(ArtifactError):
    """The requested computation exceeds a configured size budget."""


class OutOfRegime(ArtifactError, ValueError):
    """The inputs fall outside the regime where the model is valid."""


class Infeasible(ArtifactError):
    """No parameter value can meet the requested target."""

    def __init__(self, message: str, reason: str = "infeasible"):
        super().__init__(message)
        self.reason = reason


class ConsistencyError(ArtifactError):
    """Two independent evaluations of the same quantity disagree."""
