"""Exception hierarchy.

Each family maps to one CLI exit code (see :mod:`surfdyn.cli`).
"""


class SurfdynError(Exception):
    exit_code = 1


class DataConsistencyError(SurfdynError):
    """Supplied data contradicts an identity it is required to satisfy."""

    exit_code = 2


class DimensionError(DataConsistencyError):
    pass


class PreconditionError(DataConsistencyError):
    pass


class StructureError(DataConsistencyError):
    pass


class ParityError(DataConsistencyError):
    """Riemann-Roch numerator (D.D) - (D.K) is odd."""


class CapabilityError(SurfdynError):
    """An operation needs data the object does not carry (e.g. an inverse)."""

    exit_code = 3


class ResourceError(SurfdynError):
    """A degree or coefficient budget was exceeded.

    ``partial`` holds whatever was computed before the budget ran out.
    """

    exit_code = 4

    def __init__(self, message, partial=None):
        super().__init__(message)
        self.partial = partial


class PrecisionError(SurfdynError):
    exit_code = 5


class InsufficientDataError(SurfdynError):
    exit_code = 2


class InternalError(SurfdynError):
    """Two independent computations of the same quantity disagree."""


class FormalResultWarning(UserWarning):
    """Result relies on (sigma^n)^* = (sigma^*)^n without a stability certificate."""
