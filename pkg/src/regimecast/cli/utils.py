"""CLI utility functions."""

import importlib.metadata
from collections.abc import Callable
from functools import wraps
from pathlib import Path
from typing import Any

import typer
from rich import print as rich_print
from typer import Exit as typerExit
from typer import rich_utils

from regimecast.config.config import Config, load_config
from regimecast.config.presets import Presets, load_presets
from regimecast.config.run import RunConfig, load_run_config
from regimecast.exceptions import ConfigLoadError, ParameterError, RegimecastError


def cli_error_handler(
    error_class: type[Exception] = ConfigLoadError,
    error_message_prefix: str = "Error loading",
) -> Callable[[Callable[..., Any]], Callable[..., Any]]:
    """Create a decorator to standardize CLI error handling for loader functions.

    Regimecast errors keep their own exit code; anything else is reported as
    ``error_class`` and aborts with exit code 1.

    Args:
        error_class: The exception class to use for error formatting.
        error_message_prefix: The prefix for error messages.

    Returns:
        A decorator that wraps functions with standardized CLI error handling.

    """

    def decorator(func: Callable[..., Any]) -> Callable[..., Any]:
        @wraps(func)
        def wrapper(*args, **kwargs) -> Any:  # type: ignore[misc] # noqa: ANN002,ANN003,ANN401
            try:
                result = func(*args, **kwargs)
                if result is None:
                    rich_utils.rich_format_error(
                        error_class(f"Failed to load using {func.__name__}.")
                    )
                    raise typer.Abort()
                return result
            except (typer.Abort, typerExit):
                raise
            except RegimecastError as exc:
                rich_utils.rich_format_error(exc)
                raise typerExit(exc.exit_code) from exc
            except Exception as exc:
                rich_utils.rich_format_error(
                    error_class(f"{error_message_prefix}: {exc}")
                )
                raise typer.Abort() from exc

        return wrapper

    return decorator


# https://github.com/fastapi/typer/issues/52
def version_callback(value: bool) -> None:
    """Display the version of the CLI."""
    if value:
        package_version = importlib.metadata.version("regimecast")
        rich_print(f"Regimecast {package_version}")
        raise typerExit(0)


def split_list(value: str | None) -> list[str] | None:
    """Split a comma-separated flag value, dropping blanks."""
    if value is None:
        return None
    return [item.strip() for item in value.split(",") if item.strip()]


def parse_param_overrides(values: list[str] | None) -> dict[str, float]:
    """Parse repeated ``name=value`` flags into a mapping.

    Raises:
        ParameterError: If an entry is not ``name=value`` with a numeric value.

    """
    overrides: dict[str, float] = {}
    for entry in values or []:
        name, sep, raw = entry.partition("=")
        if not sep or not name.strip():
            msg = f"Parameter override '{entry}' is not of the form name=value."
            raise ParameterError(msg)
        try:
            overrides[name.strip()] = float(raw)
        except ValueError as exc:
            msg = f"Parameter override '{entry}' has a non-numeric value."
            raise ParameterError(msg) from exc
    return overrides


@cli_error_handler(ConfigLoadError, "Error loading configuration")
def load_config_with_cli_error_handling(config_file_path: Path | None) -> Config:
    """Load the application config; a missing file yields the defaults."""
    return load_config(config_file_path)


@cli_error_handler(ConfigLoadError, "Error loading presets")
def load_presets_with_cli_error_handling(presets_file_path: Path | None) -> Presets:
    """Load the frequency presets with CLI error handling."""
    return load_presets(presets_file_path)


@cli_error_handler(ConfigLoadError, "Error loading run config")
def load_run_config_with_cli_error_handling(
    run_config_path: Path | None, overrides: dict[str, Any]
) -> RunConfig:
    """Load a run config and layer the given flags over it.

    Args:
        run_config_path: Optional YAML run config.
        overrides: Flag values; only the flags actually given are present.

    Returns:
        The validated run config.

    Raises:
        typer.Exit: With the error's exit code if the config is invalid.

    """
    return load_run_config(run_config_path, overrides)
