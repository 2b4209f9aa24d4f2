"""
Exceptions raised by the sparse multiple-kernel regression package.

Every error derives from SparseMKRError. Errors that describe a bad argument
also derive from ValueError so they can be raised from pydantic validators.
"""


class SparseMKRError(Exception):
    """Base class for all package errors."""


class InvalidSpec(SparseMKRError, ValueError):
    """A kernel specification violates one of its invariants."""


class TableMissing(SparseMKRError):
    """A table-based kernel was evaluated outside its tabulated range."""


class ResolutionTooCoarse(SparseMKRError):
    """A numerical Fourier table cannot reach the requested accuracy."""


class ProbeRangeInvalid(SparseMKRError, ValueError):
    """The admissibility probe ranges are empty or non-positive."""


class InvalidData(SparseMKRError, ValueError):
    """A training set is empty, non-finite or has repeated sites."""


class TooManyCenters(SparseMKRError, ValueError):
    """A center grid would exceed the configured center cap."""


class InvalidConfig(SparseMKRError, ValueError):
    """Solver inputs or configuration are inconsistent."""


class SingularSystem(SparseMKRError):
    """An unregularized linear system is numerically singular."""


class RankDeficientSupport(SparseMKRError):
    """The columns selected for a refit are linearly dependent."""


class InsufficientData(SparseMKRError, ValueError):
    """Cross-validation would produce an empty fold."""


class NotConverged(SparseMKRError):
    """An iterative solver stopped before meeting its tolerances.

    The partial result is kept on the exception so callers can still use it.
    """

    def __init__(self, message: str, result=None):
        super().__init__(message)
        self.result = result


class EmptyModel(SparseMKRError):
    """The coarsest refinement round selected no atom at all."""

    def __init__(self, message: str, trace=None):
        super().__init__(message)
        self.trace = trace
