"""Configuration models for the app."""

from pathlib import Path

from pydantic import BaseModel, PositiveInt
from pydantic_settings import BaseSettings, SettingsConfigDict

from regimecast.config.logging import LoggingConfig
from regimecast.config.utils import YamlConfigLoader


class Config(BaseModel):
    """Configuration for the application.

    Attributes:
        logging: Logger levels and destinations.
        presets_file: Optional replacement for the packaged presets.yaml.

    """

    logging: LoggingConfig = LoggingConfig()
    presets_file: Path | None = None


class RuntimeSettings(BaseSettings):
    """Settings read from the environment (``REGIMECAST_*``)."""

    model_config = SettingsConfigDict(env_prefix="REGIMECAST_")

    threads: PositiveInt = 4


def load_config(config_file: Path | None) -> "Config":
    """Load configuration from a file."""

    def default_config() -> "Config":
        """Create a default configuration."""
        return Config(logging=LoggingConfig())

    if config_file is None:
        return default_config()

    return YamlConfigLoader.load(
        model_class=Config,
        yaml_file=config_file,
        default_factory=default_config,
    )
