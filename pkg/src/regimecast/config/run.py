"""Run configuration shared by every CLI command.

A run config is a flat YAML mapping of the fields below. Command-line flags
are layered over the file values, so a saved config plus the same flags
always reproduces the same run.
"""

import datetime as dt
from enum import StrEnum
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, PositiveInt, field_validator

from regimecast.config.presets import Presets
from regimecast.config.utils import YamlConfigLoader, canonical_hash, validate_model
from regimecast.data.market_data import Frequency
from regimecast.exceptions import (
    ContradictingOptionsError,
    MissingOptionsError,
    PriceFileError,
)
from regimecast.models.interfaces import ModelKind

RUN_CONFIG_FILE = "run_config.yaml"


class ReportFormat(StrEnum):
    """Supported report file types."""

    CSV = "csv"
    TEXT = "text"
    JSON = "json"
    PARQUET = "parquet"

    @property
    def extension(self) -> str:
        """Return the file extension written for this format."""
        match self:
            case ReportFormat.CSV:
                return "csv"
            case ReportFormat.TEXT:
                return "txt"
            case ReportFormat.JSON:
                return "json"
            case ReportFormat.PARQUET:
                return "parquet"


class RunConfig(BaseModel):
    """Everything that determines the outputs of a run.

    Attributes:
        input: Price file (CSV with header row).
        frequency: Declared data frequency.
        date_column: Name of the date column in the price file.
        price_column: Name of the price column in the price file.
        in_sample_end: Last in-sample date; the frequency preset when unset.
        models: Models to run, in report order.
        horizons: Forecast horizons; the frequency preset when unset.
        alpha: VaR tail probability.
        seed: Seed for restarts, Monte Carlo forecasts and simulation.
        restarts: Nelder-Mead starts per fit.
        out: Output directory.
        formats: Report formats to write.
        stride: Step between forecast origins.
        reestimate_every: Refit every N origins (expanding window); off when
            unset.
        mc_paths: Monte Carlo paths for EGARCH multi-step forecasts.
        sample_start: Optional first date of a sub-sample window.
        sample_end: Optional last date of a sub-sample window.

    """

    model_config = ConfigDict(extra="forbid")

    input: Path | None = None
    frequency: Frequency = Frequency.DAILY
    date_column: str = "date"
    price_column: str = "price"
    in_sample_end: dt.date | None = None
    models: list[ModelKind] = Field(default_factory=lambda: list(ModelKind))
    horizons: list[PositiveInt] | None = None
    alpha: float = Field(default=0.05, gt=0.0, le=0.5)
    seed: int = 0
    restarts: PositiveInt = 5
    out: Path = Path("regimecast-out")
    formats: list[ReportFormat] = Field(
        default_factory=lambda: [ReportFormat.CSV, ReportFormat.TEXT]
    )
    stride: PositiveInt = 1
    reestimate_every: PositiveInt | None = None
    mc_paths: int = Field(default=10000, ge=1000)
    sample_start: dt.date | None = None
    sample_end: dt.date | None = None

    @field_validator("models", "formats")
    @classmethod
    def _unique_non_empty(cls, value: list[Any]) -> list[Any]:
        if not value:
            msg = "at least one entry is required"
            raise ValueError(msg)
        return list(dict.fromkeys(value))

    @field_validator("horizons")
    @classmethod
    def _sorted_horizons(cls, value: list[int] | None) -> list[int] | None:
        if value is None:
            return None
        if not value:
            msg = "at least one horizon is required"
            raise ValueError(msg)
        return sorted(set(value))

    def require_input(self) -> Path:
        """Return the input path, checking it exists at run start."""
        if self.input is None:
            msg = "An input price file is required ('--input' or 'input:')."
            raise MissingOptionsError(msg)
        if not self.input.is_file():
            msg = f"Price file {self.input} does not exist."
            raise PriceFileError(msg)
        return self.input

    def resolved_horizons(self, presets: Presets) -> list[int]:
        """Return the horizons, falling back to the frequency preset."""
        if self.horizons is not None:
            return list(self.horizons)
        return presets.horizons_for(self.frequency)

    def resolved_in_sample_end(self, presets: Presets) -> dt.date:
        """Return the split date, falling back to the frequency preset."""
        if self.in_sample_end is not None:
            return self.in_sample_end
        return presets.frequencies[self.frequency].in_sample_end

    def check_window(self, presets: Presets) -> dt.date:
        """Return the split date, checking it falls inside the sub-sample window.

        Raises:
            ContradictingOptionsError: If the split date is before
                ``sample_start`` or leaves nothing after ``sample_end``.

        """
        end = self.resolved_in_sample_end(presets)
        if self.sample_start is not None and end < self.sample_start:
            msg = f"In-sample end {end} is before the sample start {self.sample_start}."
            raise ContradictingOptionsError(msg)
        if self.sample_end is not None and end >= self.sample_end:
            msg = (
                f"In-sample end {end} leaves no out-of-sample data before the "
                f"sample end {self.sample_end}."
            )
            raise ContradictingOptionsError(msg)
        return end


def load_run_config(
    config_file: Path | None, overrides: dict[str, Any] | None = None
) -> RunConfig:
    """Load a run config file and layer flag overrides on top of it.

    Args:
        config_file: YAML run config, or None to build from overrides only.
        overrides: Values given on the command line; they win over the file.

    Returns:
        The validated run config.

    """
    overrides = overrides or {}
    if config_file is None:
        return validate_model(RunConfig, overrides, source="command line")
    return YamlConfigLoader.load(
        model_class=RunConfig,
        yaml_file=config_file,
        pre_process_hook=lambda data: {**data, **overrides},
    )


def save_run_config(run_config: RunConfig, path: Path, header: str = "") -> Path:
    """Write a run config so that ``load_run_config`` reads it back unchanged."""
    return YamlConfigLoader.dump(run_config, path, header)


def config_hash(run_config: RunConfig) -> str:
    """Return the SHA-256 of the canonical form of a run config."""
    return canonical_hash(run_config.model_dump(mode="json"))
