"""Exception types raised on invalid inputs."""


class PoseWeightsError(ValueError):
    """Base class for all input and validation errors in this package."""


class SkeletonError(PoseWeightsError):
    """Malformed or inconsistent skeleton definition."""


class AnnotationError(PoseWeightsError):
    """Malformed annotation corpus or annotation entry."""


class CoverageError(AnnotationError):
    """Edge-length statistics leave one or more edges without data."""


class DegenerateScopeError(PoseWeightsError):
    """Centrality scope in which the requested vertex is isolated."""


class RenderError(PoseWeightsError):
    """Weight table, layout, and graph do not fit together."""
