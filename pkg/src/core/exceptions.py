"""Error hierarchy for the ffheat simulator."""

from typing import Any


class FFHeatError(ValueError):
    """Base error; ``context`` carries the offending key, position, time or step."""

    def __init__(self, message: str, **context: Any):
        super().__init__(message)
        self.message = message
        self.context = dict(context)

    def __str__(self) -> str:
        if not self.context:
            return self.message
        details = ", ".join(f"{key}={value}" for key, value in self.context.items())
        return f"{self.message} ({details})"


class DomainError(FFHeatError):
    """An argument lies outside the domain of an operation."""


class ConfigError(FFHeatError):
    """Config parse or validation failure (exit status 1)."""


class UsageError(FFHeatError):
    """Incompatible inputs handed to an operation."""


class SingularityError(FFHeatError):
    """Node singularity in the regularization phase."""


class StepSizeError(FFHeatError):
    """The implicit step matrix lost diagonal dominance."""


class NumericalBlowupError(FFHeatError):
    """Non-finite values appeared during time integration."""


class UndefinedWidthError(FFHeatError):
    """The field has no positive mass to define a width."""
