"""Exception types shared across the package."""


class EpsError(Exception):
    """Base class for all package errors."""


class ValidationError(EpsError, ValueError):
    """A parameter record or product definition is malformed."""


class DomainError(EpsError, ValueError):
    """An input lies outside the domain of a formula."""


class NotApplicableError(EpsError, ValueError):
    """The requested quantity is undefined for this product."""


class ConfigError(EpsError, ValueError):
    """A run configuration is missing a section or has a bad value."""


class NumericalError(EpsError, ArithmeticError):
    """A series or kernel produced a non-finite value."""

    def __init__(self, message, term=None):
        super().__init__(message)
        self.term = term
