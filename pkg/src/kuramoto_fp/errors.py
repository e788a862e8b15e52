"""Exception types raised by kuramoto_fp."""


class KuramotoError(Exception):
    """Base class for all package errors."""


class InvalidSizeError(KuramotoError, ValueError):
    """Node count (or search size) outside the supported range."""


class InvalidOffsetError(KuramotoError, ValueError):
    pass


class FormatError(KuramotoError, ValueError):
    """Malformed edge-list, phase or config text."""


class ShapeError(KuramotoError, ValueError):
    pass


class PreconditionError(KuramotoError, ValueError):
    pass


class ScopeError(KuramotoError, ValueError):
    """Input lies outside the hypothesis of the theorem being applied."""
