"""Exception types shared across the package."""


class SnbError(Exception):
    """Base class for every error raised by this package."""


class DomainError(SnbError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class DegenerateDistributionError(DomainError):
    """The requested quantity is degenerate at the given parameters.

    Raised where a closed form stops being informative, for example the
    moment generating function at p = 0 or p = 1, where the stopping time
    is a point mass and E[exp(xY)] collapses to a single exponential.
    """


class TrialStoppedError(DomainError):
    """An interim state already sits on or past a stopping boundary."""


class EnumerationLimitError(DomainError):
    """A brute-force enumeration request exceeds the supported size."""


class AccuracyError(SnbError, RuntimeError):
    """A numeric routine could not certify its advertised accuracy."""
