"""Configuration models for logging."""

from pathlib import Path
from typing import Literal

from pydantic import BaseModel, StrictBool

type LogLevel = Literal["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]


class AppLoggingConfig(BaseModel):
    """Configuration for one logger family."""

    level: LogLevel = "INFO"
    logfile: Path | None = None
    stdout: StrictBool = True


class LoggingConfig(BaseModel):
    """Configuration for logging."""

    main: AppLoggingConfig = AppLoggingConfig(level="INFO")
    numba: AppLoggingConfig = AppLoggingConfig(level="WARNING")
    pandas: AppLoggingConfig = AppLoggingConfig(level="WARNING")
