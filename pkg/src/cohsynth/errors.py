"""Exception types shared across the package."""


class CohsynthError(Exception):
    """Base class for package-specific errors."""


class InvalidStateError(CohsynthError, ValueError):
    """A matrix or vector fails the density-matrix / state-vector checks."""


class ProtocolImpossibleError(CohsynthError, ValueError):
    """The success projector carries no weight (e.g. every TLS starts in |g>)."""


class SystemSizeError(CohsynthError, ValueError):
    """Requested system exceeds the dense-simulation size cap."""
