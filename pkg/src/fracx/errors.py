"""Exception types raised across the package."""


class FracxError(Exception):
    """Base class for all package errors."""


class DomainError(FracxError, ValueError):
    """A parameter or argument lies outside the admissible domain."""


class NonConvergent(FracxError, ArithmeticError):
    """A certified evaluation could not meet its target within the configured limits."""


class QuadratureFailure(FracxError, ArithmeticError):
    """Adaptive quadrature did not reach the requested tolerance."""


class NotARandomVariable(FracxError, ValueError):
    """The requested Mellin kernel is not the Mellin transform of a positive law."""


class MissingTail(FracxError, ValueError):
    """An integral over an unbounded range was requested without a tail descriptor."""


class EnvelopeViolated(FracxError, ValueError):
    """A hazard rate does not respect its declared envelope."""


class RecursionCap(FracxError, RuntimeWarning):
    """A path recursion hit its depth cap (used as a flag, samples are compensated)."""
