"""Exception hierarchy shared by the library and the CLI.

Each family maps to one CLI exit code: domain errors (bad arguments or
inputs) exit 2, regime errors (asymptotic formula used outside its
validity window) exit 3, numerical errors (a computation that started
from valid inputs could not be completed to tolerance) exit 4.
"""


class FidelityError(Exception):
    """Base class for all library errors."""

    exit_code = 1


class DomainError(FidelityError):
    """An argument violates a documented precondition."""

    exit_code = 2


class RegimeError(FidelityError):
    """An asymptotic formula was requested outside its validity regime."""

    exit_code = 3


class NumericalError(FidelityError):
    """A numerical procedure failed to reach its target tolerance."""

    exit_code = 4


class ResourceError(DomainError):
    """Request exceeds the documented resource bound (e.g. ED size cap)."""


class PrecisionError(NumericalError):
    """Result cannot be resolved in double precision (e.g. degenerate pair)."""


class RangeError(NumericalError):
    """A search over computed data found no admissible point."""


class DataQualityError(NumericalError):
    """Computed data violates a shape assumption (e.g. non-monotone slope)."""


class DegenerateDataError(NumericalError):
    """Input data is degenerate for the requested statistic."""
