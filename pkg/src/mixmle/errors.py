"""Exception hierarchy shared across the package."""


class MixmleError(Exception):
    """Base class for all package-specific errors."""


class InvalidInputError(MixmleError, ValueError):
    """An argument violates an operation's precondition."""


class CapacityError(MixmleError):
    """A brute-force oracle was asked for a state space above its guard."""


class NoCertificateError(MixmleError):
    """The requested mixing bound is vacuous for these parameters."""


class ConvergenceError(MixmleError):
    """An iterative procedure ran out of iterations.

    Carries the final residual so callers can decide whether the partial
    answer is usable.
    """

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ModeError(MixmleError):
    """An operation was called in the wrong convexity mode."""


class ConfigurationError(MixmleError):
    """A run configuration fails validation before any work is done."""


class NumericError(MixmleError):
    """A non-finite value appeared mid-computation."""
