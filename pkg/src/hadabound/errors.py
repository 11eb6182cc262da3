"""Exception types raised by hadabound."""


class HadaboundError(Exception):
    """Base class for all library errors."""


class DimensionError(HadaboundError, ValueError):
    """Operands have incompatible shapes."""


class DomainError(HadaboundError, ValueError):
    """An input violates a mathematical hypothesis (not PSD, zero factor, ...)."""

    def __init__(self, message, lambda_min=None):
        super().__init__(message)
        self.lambda_min = lambda_min


class NumericError(HadaboundError, ArithmeticError):
    """A dense kernel failed to converge or missed its residual contract."""


class UsageError(HadaboundError, ValueError):
    """Arguments are out of the accepted range."""
