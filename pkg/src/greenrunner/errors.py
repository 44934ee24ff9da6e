"""Exception hierarchy shared across the package."""

from __future__ import annotations


class GreenRunnerError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(GreenRunnerError):
    """A document, value, or argument violates its contract."""


class ConfigError(GreenRunnerError):
    """An experiment configuration is unusable (e.g. budget below arm count)."""


class EvaluationUnavailableError(GreenRunnerError):
    """The evaluation backend could not be reached.

    Retryable: distinct from validation errors so callers can tell a flaky
    service apart from a bad request. Never reported as `correct = False`.
    """


class ArmsExhaustedError(GreenRunnerError):
    """Every arm has consumed its full sample set; no selection is possible."""


class ExperimentAborted(GreenRunnerError):
    """An experiment run stopped mid-flight; carries the partial trace."""

    def __init__(self, message: str, pulls: tuple = (), calls_spent: int = 0):
        super().__init__(message)
        self.pulls = pulls
        self.calls_spent = calls_spent


class ReasoningError(GreenRunnerError):
    """Weight suggestion failed (every repeat was unusable)."""


class ReasoningUnavailableError(ReasoningError):
    """The language-model backend could not be reached."""


class StateError(GreenRunnerError):
    """An operation was applied to an experiment record in the wrong state."""


class UnknownExperimentError(GreenRunnerError):
    """No experiment record with the given id exists."""
