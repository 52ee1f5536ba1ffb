"""Exceptions for regimecast.

Every error carries the exit code the CLI reports for it: 1 for usage and
configuration problems, 2 for bad input data, 3 for numerical failures.
"""

import click
import numpy as np

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NUMERICAL = 3


class RegimecastError(click.ClickException):
    """Base exception for regimecast errors."""

    default_exit_code = EXIT_USAGE

    def __init__(self, message: str, exit_code: int | None = None) -> None:
        """Initialize the RegimecastError with a message and exit code.

        Args:
            message: The error message to display.
            exit_code: The exit code to use when the exception reaches the
                CLI. Defaults to the class' ``default_exit_code``.

        """
        super().__init__(message)
        self.exit_code = self.default_exit_code if exit_code is None else exit_code


class ContradictingOptionsError(RegimecastError):
    """Custom exception for contradicting CLI options."""


class MissingOptionsError(RegimecastError):
    """Custom exception for missing CLI options."""


class ConfigLoadError(RegimecastError):
    """Custom exception for configuration loading failures."""


class ParameterError(RegimecastError):
    """A parameter record violates its model's constraints."""


class DataError(RegimecastError):
    """Input data cannot be used."""

    default_exit_code = EXIT_DATA


class PriceFileError(DataError):
    """A price file is missing, malformed or inconsistent."""


class SplitError(DataError):
    """A sample split or window cannot be built from the series."""


class NumericalError(RegimecastError):
    """A numerical routine failed to produce a usable value."""

    default_exit_code = EXIT_NUMERICAL


class FilterError(NumericalError):
    """A variance or regime filter produced non-finite values."""


class EstimationError(NumericalError):
    """Maximum likelihood estimation failed on every restart."""


class ForecastError(NumericalError):
    """A forecast could not be produced."""


class StageError(RegimecastError):
    """A pipeline stage failed; wraps the underlying error."""

    def __init__(self, stage: str, cause: Exception) -> None:
        """Initialize the StageError from the failing stage and its cause.

        Args:
            stage: Name of the pipeline stage that failed.
            cause: The exception raised inside the stage. Its exit code is
                kept; foreign arithmetic and linear algebra failures map to
                the numerical exit code, anything else to the usage one.

        """
        exit_code = getattr(cause, "exit_code", None)
        if exit_code is None:
            numerical = isinstance(cause, ArithmeticError | np.linalg.LinAlgError)
            exit_code = EXIT_NUMERICAL if numerical else EXIT_USAGE
        detail = cause.message if isinstance(cause, click.ClickException) else cause
        super().__init__(f"Stage '{stage}' failed: {detail}", exit_code=exit_code)
        self.stage = stage


class EvaluationError(NumericalError):
    """Forecasts cannot be scored or backtested."""


class SimulationError(NumericalError):
    """A simulated path diverged."""
