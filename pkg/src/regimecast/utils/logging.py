"""Structured logging utilities with context information.

This module provides LoggerAdapter classes that inject run context (model,
data frequency, pipeline stage, timings) into log records, plus the rich
console / plain-text file setup used by the CLI.
"""

import logging
import re
import sys
from collections.abc import Mapping, MutableMapping
from pathlib import Path
from typing import Any

from rich.console import Console
from rich.logging import RichHandler

from regimecast.config.logging import LoggingConfig

_STATUS_COLORS = {
    "SUCCESS": "[bold green]SUCCESS[/bold green]",
    "STARTED": "[bold blue]STARTED[/bold blue]",
    "FAILED": "[bold red]FAILED[/bold red]",
    "SKIPPED": "[bold orange3]SKIPPED[/bold orange3]",
}

_LEVEL_STATUS = {
    "DEBUG": "DEBUG",
    "INFO": "INFO",
    "WARNING": "WARNING",
    "ERROR": "FAILED",
    "CRITICAL": "CRITICAL",
}


class _StatusLoggerAdapter(logging.LoggerAdapter):
    """Base adapter that prefixes messages with an operation and a status."""

    def __init__(
        self,
        logger: logging.Logger,
        operation: str,
        context: Mapping[str, str | int | float] | None = None,
    ) -> None:
        super().__init__(logger, {})
        self.operation = operation.upper()
        self.context = dict(context or {})

    def _status(self, msg: object, level_name: str) -> str:
        """Derive a status token from the level and the message wording."""
        status = _LEVEL_STATUS.get(level_name, level_name)
        msg_str = str(msg).lower()
        if "fail" in msg_str or "error" in msg_str:
            return "FAILED"
        if "success" in msg_str or "complete" in msg_str:
            return "SUCCESS"
        if "skip" in msg_str:
            return "SKIPPED"
        if "starting" in msg_str:
            return "STARTED"
        return status

    def _subject(self) -> str | None:
        """Return the highlighted subject of the message, if any."""
        return None

    def _format_message(self, msg: object, level_name: str) -> str:
        colored_status = _STATUS_COLORS.get(
            status := self._status(msg, level_name), status
        )
        formatted = f"{self.operation} - {colored_status}"
        subject = self._subject()
        if subject:
            formatted += f" - [purple]{subject}[/purple]"
        if str(msg).strip():
            formatted += f" - {msg}"
        return formatted

    def process(
        self, msg: object, kwargs: MutableMapping[str, Any]
    ) -> tuple[object, MutableMapping[str, Any]]:
        """Attach the adapter context to the record's extra mapping.

        Args:
            msg: The log message.
            kwargs: Keyword arguments for the log record.

        Returns:
            Tuple of the message and updated kwargs.

        """
        extra = kwargs.setdefault("extra", {})
        extra.update({"operation": self.operation, **self.context})
        return msg, kwargs

    def log(self, level: int, msg: object, *args: object, **kwargs: Any) -> None:  # noqa: ANN401
        """Log with the status prefix computed from the record level."""
        if self.isEnabledFor(level):
            formatted = self._format_message(msg, logging.getLevelName(level))
            formatted, kwargs = self.process(formatted, kwargs)
            self.logger.log(level, formatted, *args, **kwargs)


class AppLoggerAdapter(_StatusLoggerAdapter):
    """Logger adapter for application-level messages.

    Provides consistent formatting for startup, configuration, data loading
    and other run-wide operations.
    """

    def __init__(
        self,
        logger: logging.Logger,
        operation: str = "APPLICATION",
        **context: str | int | float,
    ) -> None:
        """Initialize the app logger adapter.

        Args:
            logger: The base logger to wrap.
            operation: The type of operation (e.g., "APPLICATION", "DATA_LOAD").
            **context: Additional context information as keyword arguments.

        """
        super().__init__(logger, operation, context)


class ModelLoggerAdapter(_StatusLoggerAdapter):
    """Logger adapter that adds model context to all log messages.

    Injects the model label and data frequency so estimation, forecasting and
    backtest messages of concurrently processed models stay attributable.
    """

    def __init__(
        self,
        logger: logging.Logger,
        model: str,
        frequency: str | None = None,
        task_descriptor: str = "MODEL_PROCESSING",
    ) -> None:
        """Initialize the model logger adapter.

        Args:
            logger: The base logger to wrap.
            model: The model label (e.g. "GARCH", "MRS-GARCH").
            frequency: The data frequency of the series being modelled.
            task_descriptor: The type of task being performed.

        """
        self.model = model
        self.frequency = frequency or "unknown"
        super().__init__(
            logger,
            task_descriptor,
            {"model": self.model, "frequency": self.frequency},
        )

    def _subject(self) -> str:
        return f"{self.model} ({self.frequency})"


class TimingLoggerAdapter(_StatusLoggerAdapter):
    """Logger adapter that adds timing and performance context to log messages.

    Used for stage timings (fit, forecast, evaluation, export) together with
    counts such as restarts, evaluations or forecast rows.
    """

    def __init__(
        self,
        logger: logging.Logger,
        operation_type: str,
        **context: str | int | float,
    ) -> None:
        """Initialize the timing logger adapter.

        Args:
            logger: The base logger to wrap.
            operation_type: The type of operation being timed (e.g.,
                "model_fit", "rolling_forecast", "export").
            **context: Additional context information as keyword arguments.

        """
        super().__init__(logger, operation_type, context)

    def _status(self, msg: object, level_name: str) -> str:
        status = super()._status(msg, level_name)
        msg_str = str(msg).lower()
        if status == "INFO" and ("time:" in msg_str or "rows:" in msg_str):
            return "SUCCESS"
        return status

    def _subject(self) -> str | None:
        model = self.context.get("model")
        if model is None:
            return None
        return f"{model} ({self.context.get('frequency', 'unknown')})"


def _strip_rich_markup(text: str) -> str:
    """Remove Rich markup from text for clean file logging.

    Args:
        text: Text containing Rich markup.

    Returns:
        Text with Rich markup removed.

    """
    return re.sub(r"\[/?[a-z][^\]]*\]", "", text)


class PlainTextFormatter(logging.Formatter):
    """Custom formatter that strips Rich markup for file logging."""

    def format(self, record: logging.LogRecord) -> str:
        """Format the log record and strip Rich markup."""
        formatted = super().format(record)
        return _strip_rich_markup(formatted)


def setup_logging(config: LoggingConfig) -> None:
    """Configure logging for the application using Rich.

    Sets up a Rich handler on stderr (when enabled), an optional plain-text
    file handler, and per-family log levels.

    Args:
        config: LoggingConfig instance containing logging configuration.

    """
    root_logger = logging.getLogger()
    for handler in root_logger.handlers[:]:
        root_logger.removeHandler(handler)

    if config.main.stdout:
        console = Console(file=sys.stderr)
        rich_handler = RichHandler(
            console=console,
            rich_tracebacks=True,
            markup=True,
            show_time=True,
            show_level=True,
            show_path=False,
        )
        root_logger.addHandler(rich_handler)

    if config.main.logfile is not None:
        try:
            logfile_path = Path(config.main.logfile)
            logfile_path.parent.mkdir(parents=True, exist_ok=True)
            file_handler = logging.FileHandler(
                filename=logfile_path, mode="a", encoding="utf-8"
            )
            file_handler.setFormatter(
                PlainTextFormatter(
                    fmt="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
                    datefmt="%Y-%m-%d %H:%M:%S",
                )
            )
            file_handler.setLevel(getattr(logging, config.main.level))
            root_logger.addHandler(file_handler)
        except OSError as e:
            if config.main.stdout:
                logging.warning("Failed to setup file logging: %s", e)

    root_logger.setLevel(logging.DEBUG)

    _configure_logger("regimecast", config.main.level)
    _configure_logger("numba", config.numba.level)
    _configure_logger("pandas", config.pandas.level)

    _suppress_noisy_loggers()


def _configure_logger(logger_name: str, level: str) -> None:
    """Configure a specific logger with the given level.

    Args:
        logger_name: Name of the logger to configure.
        level: Log level as a string (e.g., "INFO", "DEBUG").

    """
    logging.getLogger(logger_name).setLevel(getattr(logging, level.upper()))


def _suppress_noisy_loggers() -> None:
    """Suppress logging from noisy third-party libraries."""
    for logger_name in ("asyncio", "concurrent.futures", "matplotlib"):
        logging.getLogger(logger_name).setLevel(logging.WARNING)
