"""Exception hierarchy shared across the package."""


class ResilienceKitError(Exception):
    """Base class for all package errors."""


class DimensionError(ResilienceKitError):
    """Operands have incompatible or invalid dimensions."""


class PreconditionError(ResilienceKitError):
    """A documented mathematical precondition is violated."""


class NumericalError(ResilienceKitError):
    """An iterative or numerical routine failed to produce a usable result."""


class CapacityError(ResilienceKitError):
    """A combinatorial enumeration exceeded its configured cap."""


class RankError(ResilienceKitError):
    """A set is degenerate (flat) where full dimension is required."""
