"""Utility functions for configuration management."""

import hashlib
import json
import logging
from collections.abc import Callable
from pathlib import Path
from typing import TYPE_CHECKING, Any, TypeVar

import yaml
from pydantic import BaseModel, ValidationError

from regimecast.exceptions import ConfigLoadError

if TYPE_CHECKING:
    from pydantic_core import ErrorDetails

logger = logging.getLogger(__name__)

T = TypeVar("T", bound=BaseModel)


class YamlConfigLoader:
    """Generic YAML loader and writer for Pydantic models."""

    @staticmethod
    def load(
        model_class: type[T],
        yaml_file: Path,
        pre_process_hook: Callable[[dict[str, Any]], dict[str, Any]] | None = None,
        default_factory: Callable[[], T] | None = None,
    ) -> T:
        """Load and validate a YAML configuration file into a Pydantic model.

        Args:
            model_class: The Pydantic model class to validate against.
            yaml_file: Path to the YAML configuration file.
            pre_process_hook: Optional function applied to the raw mapping
                before validation (used to layer CLI flags over file values).
            default_factory: Optional function to create a default instance
                if the file doesn't exist or is empty.

        Returns:
            An instance of the specified Pydantic model.

        Raises:
            ConfigLoadError: If there are validation errors or file loading
                issues.

        """
        if not yaml_file.exists() or yaml_file.stat().st_size == 0:
            return YamlConfigLoader._handle_missing_or_empty_file(
                yaml_file, default_factory
            )

        try:
            yaml_data = YamlConfigLoader._load_yaml_data(yaml_file)
        except yaml.YAMLError as exc:
            logger.error("Configuration file %s is not valid YAML: %s", yaml_file, exc)
            msg = f"Configuration file {yaml_file} is not valid YAML: {exc}"
            raise ConfigLoadError(msg) from exc

        if yaml_data is None:
            return YamlConfigLoader._handle_missing_or_empty_file(
                yaml_file, default_factory, "contains no data"
            )
        if not isinstance(yaml_data, dict):
            msg = f"Configuration file {yaml_file} must contain a mapping."
            raise ConfigLoadError(msg)

        if pre_process_hook:
            yaml_data = pre_process_hook(yaml_data)

        return validate_model(model_class, yaml_data, source=yaml_file.name)

    @staticmethod
    def dump(model: BaseModel, yaml_file: Path, header: str = "") -> Path:
        """Write a model as a flat YAML mapping that `load` reads back losslessly.

        Args:
            model: The Pydantic model instance to serialize.
            yaml_file: Destination path; parent directories are created.
            header: Text written before the mapping, normally ``#`` comment
                lines.

        Returns:
            The path written.

        """
        yaml_file.parent.mkdir(parents=True, exist_ok=True)
        payload = model.model_dump(mode="json")
        with Path.open(yaml_file, "w", encoding="utf-8") as file:
            file.write(header)
            yaml.safe_dump(payload, file, sort_keys=True, allow_unicode=True)
        return yaml_file

    @staticmethod
    def _handle_missing_or_empty_file(
        yaml_file: Path,
        default_factory: Callable[[], T] | None,
        reason: str = "does not exist or is empty",
    ) -> T:
        """Handle missing or empty configuration files."""
        if default_factory:
            logger.info(
                "Configuration file %s %s, using defaults.",
                yaml_file,
                reason,
            )
            return default_factory()
        logger.error("Configuration file %s %s.", yaml_file, reason)
        msg = f"Configuration file {yaml_file} {reason}."
        raise ConfigLoadError(msg)

    @staticmethod
    def _load_yaml_data(yaml_file: Path) -> Any:  # noqa: ANN401
        """Load YAML data from file."""
        with Path.open(yaml_file, encoding="utf-8") as file:
            return yaml.safe_load(file)


def validate_model(model_class: type[T], data: dict[str, Any], source: str) -> T:
    """Validate a mapping into a model, converting errors to ConfigLoadError.

    Args:
        model_class: The Pydantic model class to validate against.
        data: The raw mapping.
        source: Name of where the data came from, used in error messages.

    Returns:
        The validated model instance.

    Raises:
        ConfigLoadError: If validation fails.

    """
    try:
        return model_class.model_validate(data)
    except ValidationError as exc:
        error_msg = validation_errors(filepath=source, errors=exc.errors())
        logger.error(error_msg)
        raise ConfigLoadError(error_msg) from exc


def validation_errors(
    filepath: str,
    errors: list["ErrorDetails"] | list[dict[str, Any]],
) -> str:
    """Format validation errors into a human-readable string.

    Args:
        filepath: The path to the configuration file.
        errors: A list of validation errors.

    Returns:
        A formatted string describing the validation errors.

    """
    sp_4 = " " * 4
    as_human = ["Configuration errors", f"{sp_4}File:[{filepath}]"]

    for _err in errors:
        loc_str = ".".join(map(str, _err.get("loc", [])))
        msg = _err.get("msg", "Unknown error")
        as_human.append(f"{sp_4}Section: [{loc_str}]: {msg}")

    return "\n".join(as_human)


def canonical_hash(payload: Any) -> str:  # noqa: ANN401
    """Return the SHA-256 of a JSON-serializable payload in canonical form."""
    text = json.dumps(payload, sort_keys=True, separators=(",", ":"), default=str)
    return hashlib.sha256(text.encode("utf-8")).hexdigest()


def get_package_file(relative_file_path: str) -> Path:
    """Return the path of a data file shipped in the config package."""
    return Path(__file__).with_name(relative_file_path)


def get_cwd_file(relative_file_path: str) -> Path:
    """Resolve a file name against the current working directory."""
    return Path.cwd() / relative_file_path
