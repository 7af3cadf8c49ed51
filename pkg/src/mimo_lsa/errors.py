"""Exception types raised across the package."""


class MimoLsaError(Exception):
    """Base class for all package errors."""


class ConfigError(MimoLsaError, ValueError):
    """Invalid or inconsistent configuration.

    ``field`` names the offending configuration key when one is known.
    """

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class DegenerateInputError(MimoLsaError, ValueError):
    """A filter or estimate vector is identically zero."""


class DivergenceError(MimoLsaError, RuntimeError):
    """The adaptive filter norm left the admissible region."""
