"""Exception types shared across the package.

Every failure mode that callers are expected to branch on gets its own class;
generic ValueError/TypeError are reserved for programming errors.
"""


class LogMomentError(Exception):
    """Base class for all package-specific failures."""


class DomainError(LogMomentError, ValueError):
    """Input outside the documented domain (bad exponent, negative slope, ...)."""


class Diverges(LogMomentError):
    """A quantity is infinite where a finite value was required."""


class NotEmbeddable(LogMomentError):
    """The requested class cannot represent the given function."""


class IllConditioned(LogMomentError):
    """A linear solve lost too many digits to be trusted, even after fallback."""


class UnresolvedBand(LogMomentError):
    """Sign analysis hit a near-zero band that refinement could not classify."""


class NonConvergence(LogMomentError):
    """An iteration exhausted its budget without meeting its tolerance."""


class Infeasible(LogMomentError):
    """The target moment vector lies outside the moment body.

    Carries the constraint level at which the violation was detected and the
    feasible interval that was missed, when known.
    """

    def __init__(self, message, level=None, bounds=None):
        super().__init__(message)
        self.level = level
        self.bounds = bounds


class GridTooCoarse(LogMomentError):
    """A density grid failed its mass or resolution sanity check."""
