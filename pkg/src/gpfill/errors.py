"""Exception types shared across the package.

Every failure mode raised by gpfill is an instance of :class:`GpfillError`,
so callers can catch the whole family with one clause while tests pin the
specific subclass.
"""


class GpfillError(Exception):
    """Base class for all gpfill errors."""


class DomainError(GpfillError):
    """A parameter is outside its admissible domain (message names the field)."""


class DimensionMismatch(GpfillError):
    """Point or vector dimensions are inconsistent with the kernel parameters."""


class AsymmetryError(GpfillError):
    """A matrix required to be symmetric is not, beyond tolerance."""


class CholeskyFailure(GpfillError):
    """Factorization failed even after maximum diagonal jitter."""


class InfeasibleSparsity(GpfillError):
    """The minimum-gap constraint cannot host the requested observation count."""


class EmptyObservations(GpfillError):
    """A fit was requested on zero observations (use GPPosterior.prior instead)."""


class SeriesTooShort(GpfillError):
    """A series is too short for the requested differencing or model order."""


class StateMismatch(GpfillError):
    """A differencing inversion state does not match the supplied vector."""


class SingularToeplitz(GpfillError):
    """The Yule-Walker autocovariance system is singular (near-constant series)."""


class NonFiniteObjective(GpfillError):
    """The optimizer encountered a NaN objective, or the start point is not finite."""


class OptimizerFailure(GpfillError):
    """Model estimation could not find a finite objective anywhere reachable."""


class LengthMismatch(GpfillError):
    """Paired vectors have different lengths."""


class NoEvaluablePoints(GpfillError):
    """Every observation was skipped; no forecast error can be aggregated."""


class ParseError(GpfillError):
    """A config or CSV file failed to parse.  Carries the 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ValidationError(GpfillError):
    """A parsed config value violates a module precondition (message names the field)."""


class NonMonotonicTime(GpfillError):
    """CSV time column is not strictly increasing."""
