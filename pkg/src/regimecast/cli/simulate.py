"""Command to simulate a model and optionally recover its parameters."""

import asyncio
import time
from pathlib import Path
from typing import Annotated

import typer

from regimecast.cli.options import (
    DEFAULT_CONFIG_FILE,
    MODEL_PANEL,
    ConfigFileOption,
    FormatOption,
    FrequencyOption,
    OutOption,
    RestartsOption,
    SeedOption,
)
from regimecast.cli.run import prepare, run_overrides
from regimecast.cli.utils import cli_error_handler, parse_param_overrides
from regimecast.config.presets import Presets
from regimecast.config.run import RunConfig
from regimecast.exceptions import ParameterError
from regimecast.models.interfaces import ModelKind
from regimecast.pipeline.orchestrator import run_simulation, simulation_params


@cli_error_handler(ParameterError, "Error simulating")
def _simulate(
    kind: ModelKind,
    param_flags: list[str] | None,
    run_config: RunConfig,
    presets: Presets,
    n: int,
    burn_in: int,
    recover: bool,
) -> list[Path]:
    params = simulation_params(kind, presets, parse_param_overrides(param_flags))
    return asyncio.run(
        run_simulation(kind, params, run_config, presets, n, burn_in, recover)
    )


def simulate(  # pylint: disable=too-many-arguments
    model: Annotated[
        ModelKind,
        typer.Option(
            "--model",
            "-m",
            rich_help_panel=MODEL_PANEL,
            help="Model to simulate.",
        ),
    ] = ModelKind.GARCH,
    n: Annotated[
        int | None,
        typer.Option(
            "--n",
            "-n",
            min=1,
            rich_help_panel=MODEL_PANEL,
            help="Number of returns to keep; the preset when unset.",
        ),
    ] = None,
    burn_in: Annotated[
        int | None,
        typer.Option(
            "--burn-in",
            min=0,
            rich_help_panel=MODEL_PANEL,
            help="Number of leading steps to discard; the preset when unset.",
        ),
    ] = None,
    param: Annotated[
        list[str] | None,
        typer.Option(
            "--param",
            "-p",
            rich_help_panel=MODEL_PANEL,
            help="Generating parameter as name=value; repeat for several.",
        ),
    ] = None,
    recover: Annotated[
        bool,
        typer.Option(
            "--recover",
            rich_help_panel=MODEL_PANEL,
            help="Fit the model to the simulated series and report recovery.",
        ),
    ] = False,
    frequency: FrequencyOption = None,
    seed: SeedOption = None,
    restarts: RestartsOption = None,
    out: OutOption = None,
    formats: FormatOption = None,
    config_file_path: ConfigFileOption = DEFAULT_CONFIG_FILE,
) -> None:
    """Simulate prices from a model with known parameters."""
    overrides = run_overrides(
        frequency=frequency,
        models=model.value,
        seed=seed,
        restarts=restarts,
        out=out,
        formats=formats,
    )
    _, presets, run_config, app_logger = prepare(config_file_path, None, overrides)
    n = presets.simulation.n if n is None else n
    burn_in = presets.simulation.burn_in if burn_in is None else burn_in

    started = time.perf_counter()
    app_logger.info(f"Simulating {model.label}: n={n}, burn-in={burn_in}")
    written = _simulate(model, param, run_config, presets, n, burn_in, recover)
    app_logger.info(
        f"Simulation complete - TotalTime: {time.perf_counter() - started:.1f}s, "
        f"Files: {len(written)}, Output: {run_config.out}"
    )
