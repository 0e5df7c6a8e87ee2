"""Exception hierarchy shared by every model module."""


class ModelError(Exception):
    """Base class for all errors raised by healthinvest."""


class RangeError(ModelError, ValueError):
    """A parameter lies outside its admissible range."""

    def __init__(self, field, message=None):
        self.field = field
        super().__init__(message or field)


class DomainError(ModelError, ValueError):
    """An operation was called outside its mathematical domain."""


class ConfigError(ModelError, ValueError):
    """Inconsistent or malformed configuration (files, shock processes, paths)."""


class NoThresholdError(ModelError):
    """Fertility never crosses one, so no population threshold exists."""


class NoRootError(ModelError):
    """The stage-3 first-order condition has no sign change on (0, 1)."""

    def __init__(self, message, max_residual=None, argmax=None):
        self.max_residual = max_residual
        self.argmax = argmax
        super().__init__(message)


class PerturbationError(ModelError):
    """The FOC root count changed across a finite-difference step."""
