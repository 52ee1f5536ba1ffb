"""Commands that run the estimation and evaluation pipeline.

``fit``, ``forecast``, ``evaluate`` and ``backtest`` stop after the stage
they are named for; ``reproduce`` runs every stage and also writes the
market table and the resolved run config.
"""

import asyncio
import logging
import time
from pathlib import Path
from typing import Any

from regimecast.cli.options import (
    DEFAULT_CONFIG_FILE,
    AlphaOption,
    ConfigFileOption,
    FormatOption,
    FrequencyOption,
    HorizonsOption,
    InputOption,
    InSampleEndOption,
    McPathsOption,
    ModelsOption,
    OutOption,
    ReestimateOption,
    RestartsOption,
    RunConfigOption,
    SampleEndOption,
    SampleStartOption,
    SeedOption,
    StrideOption,
)
from regimecast.cli.utils import (
    cli_error_handler,
    load_config_with_cli_error_handling,
    load_presets_with_cli_error_handling,
    load_run_config_with_cli_error_handling,
    split_list,
)
from regimecast.config.config import Config, RuntimeSettings
from regimecast.config.presets import Presets
from regimecast.config.run import RunConfig
from regimecast.exceptions import StageError
from regimecast.pipeline.orchestrator import PipelineState, Stage, run_pipeline
from regimecast.utils.logging import AppLoggerAdapter, setup_logging


def run_overrides(**flags: Any) -> dict[str, Any]:  # noqa: ANN401
    """Turn the given CLI flags into run config overrides.

    Flags left at None are dropped; comma-separated list flags are split.
    """
    overrides: dict[str, Any] = {}
    for name, value in flags.items():
        if value is None:
            continue
        if name in ("models", "horizons", "formats"):
            value = split_list(value)
        overrides[name] = value
    return overrides


def prepare(
    config_file_path: Path, run_config_path: Path | None, overrides: dict[str, Any]
) -> tuple[Config, Presets, RunConfig, AppLoggerAdapter]:
    """Load the app config, set up logging, then load presets and run config."""
    app_config: Config = load_config_with_cli_error_handling(config_file_path)

    # Setup logging as early as possible after config is loaded
    setup_logging(app_config.logging)
    app_logger = AppLoggerAdapter(logging.getLogger(__name__), operation="APPLICATION")
    app_logger.debug("Logging configured successfully")

    presets: Presets = load_presets_with_cli_error_handling(app_config.presets_file)
    run_config: RunConfig = load_run_config_with_cli_error_handling(
        run_config_path, overrides
    )
    return app_config, presets, run_config, app_logger


@cli_error_handler(StageError, "Error running pipeline")
def _run(
    run_config: RunConfig, presets: Presets, until: Stage, reproduce: bool
) -> tuple[PipelineState, list[Path]]:
    return asyncio.run(
        run_pipeline(
            run_config,
            presets,
            until,
            threads=RuntimeSettings().threads,
            reproduce=reproduce,
        )
    )


def execute(
    until: Stage,
    config_file_path: Path,
    run_config_path: Path | None,
    overrides: dict[str, Any],
    reproduce: bool = False,
) -> list[Path]:
    """Run the pipeline up to ``until`` and write its report bundle."""
    _, presets, run_config, app_logger = prepare(
        config_file_path, run_config_path, overrides
    )
    models = ",".join(kind.value for kind in run_config.models)
    app_logger.info(f"Running '{until.label}' for models {models}")
    started = time.perf_counter()
    _, written = _run(run_config, presets, until, reproduce)
    app_logger.info(
        f"Run complete - TotalTime: {time.perf_counter() - started:.1f}s, "
        f"Files: {len(written)}, Output: {run_config.out}"
    )
    return written


def fit(  # pylint: disable=too-many-arguments
    input_path: InputOption = None,
    frequency: FrequencyOption = None,
    in_sample_end: InSampleEndOption = None,
    sample_start: SampleStartOption = None,
    sample_end: SampleEndOption = None,
    models: ModelsOption = None,
    seed: SeedOption = None,
    restarts: RestartsOption = None,
    out: OutOption = None,
    formats: FormatOption = None,
    run_config_path: RunConfigOption = None,
    config_file_path: ConfigFileOption = DEFAULT_CONFIG_FILE,
) -> None:
    """Estimate the models on the in-sample window."""
    overrides = run_overrides(
        input=input_path,
        frequency=frequency,
        in_sample_end=in_sample_end,
        sample_start=sample_start,
        sample_end=sample_end,
        models=models,
        seed=seed,
        restarts=restarts,
        out=out,
        formats=formats,
    )
    execute(Stage.FIT, config_file_path, run_config_path, overrides)


def forecast(  # pylint: disable=too-many-arguments,too-many-locals
    input_path: InputOption = None,
    frequency: FrequencyOption = None,
    in_sample_end: InSampleEndOption = None,
    sample_start: SampleStartOption = None,
    sample_end: SampleEndOption = None,
    models: ModelsOption = None,
    seed: SeedOption = None,
    restarts: RestartsOption = None,
    horizons: HorizonsOption = None,
    stride: StrideOption = None,
    reestimate_every: ReestimateOption = None,
    mc_paths: McPathsOption = None,
    out: OutOption = None,
    formats: FormatOption = None,
    run_config_path: RunConfigOption = None,
    config_file_path: ConfigFileOption = DEFAULT_CONFIG_FILE,
) -> None:
    """Fit, then write rolling out-of-sample forecast tables."""
    overrides = run_overrides(
        input=input_path,
        frequency=frequency,
        in_sample_end=in_sample_end,
        sample_start=sample_start,
        sample_end=sample_end,
        models=models,
        seed=seed,
        restarts=restarts,
        horizons=horizons,
        stride=stride,
        reestimate_every=reestimate_every,
        mc_paths=mc_paths,
        out=out,
        formats=formats,
    )
    execute(Stage.FORECAST, config_file_path, run_config_path, overrides)


def evaluate(  # pylint: disable=too-many-arguments,too-many-locals
    input_path: InputOption = None,
    frequency: FrequencyOption = None,
    in_sample_end: InSampleEndOption = None,
    sample_start: SampleStartOption = None,
    sample_end: SampleEndOption = None,
    models: ModelsOption = None,
    seed: SeedOption = None,
    restarts: RestartsOption = None,
    horizons: HorizonsOption = None,
    stride: StrideOption = None,
    reestimate_every: ReestimateOption = None,
    mc_paths: McPathsOption = None,
    out: OutOption = None,
    formats: FormatOption = None,
    run_config_path: RunConfigOption = None,
    config_file_path: ConfigFileOption = DEFAULT_CONFIG_FILE,
) -> None:
    """Score the forecasts with loss functions and directional tests."""
    overrides = run_overrides(
        input=input_path,
        frequency=frequency,
        in_sample_end=in_sample_end,
        sample_start=sample_start,
        sample_end=sample_end,
        models=models,
        seed=seed,
        restarts=restarts,
        horizons=horizons,
        stride=stride,
        reestimate_every=reestimate_every,
        mc_paths=mc_paths,
        out=out,
        formats=formats,
    )
    execute(Stage.EVALUATE, config_file_path, run_config_path, overrides)


def backtest(  # pylint: disable=too-many-arguments,too-many-locals
    input_path: InputOption = None,
    frequency: FrequencyOption = None,
    in_sample_end: InSampleEndOption = None,
    sample_start: SampleStartOption = None,
    sample_end: SampleEndOption = None,
    models: ModelsOption = None,
    seed: SeedOption = None,
    restarts: RestartsOption = None,
    horizons: HorizonsOption = None,
    alpha: AlphaOption = None,
    stride: StrideOption = None,
    reestimate_every: ReestimateOption = None,
    mc_paths: McPathsOption = None,
    out: OutOption = None,
    formats: FormatOption = None,
    run_config_path: RunConfigOption = None,
    config_file_path: ConfigFileOption = DEFAULT_CONFIG_FILE,
) -> None:
    """Backtest VaR thresholds built from the forecasts."""
    overrides = run_overrides(
        input=input_path,
        frequency=frequency,
        in_sample_end=in_sample_end,
        sample_start=sample_start,
        sample_end=sample_end,
        models=models,
        seed=seed,
        restarts=restarts,
        horizons=horizons,
        alpha=alpha,
        stride=stride,
        reestimate_every=reestimate_every,
        mc_paths=mc_paths,
        out=out,
        formats=formats,
    )
    execute(Stage.BACKTEST, config_file_path, run_config_path, overrides)


def reproduce(  # pylint: disable=too-many-arguments,too-many-locals
    input_path: InputOption = None,
    frequency: FrequencyOption = None,
    in_sample_end: InSampleEndOption = None,
    sample_start: SampleStartOption = None,
    sample_end: SampleEndOption = None,
    models: ModelsOption = None,
    seed: SeedOption = None,
    restarts: RestartsOption = None,
    horizons: HorizonsOption = None,
    alpha: AlphaOption = None,
    stride: StrideOption = None,
    reestimate_every: ReestimateOption = None,
    mc_paths: McPathsOption = None,
    out: OutOption = None,
    formats: FormatOption = None,
    run_config_path: RunConfigOption = None,
    config_file_path: ConfigFileOption = DEFAULT_CONFIG_FILE,
) -> None:
    """Run every stage and write the full report bundle."""
    overrides = run_overrides(
        input=input_path,
        frequency=frequency,
        in_sample_end=in_sample_end,
        sample_start=sample_start,
        sample_end=sample_end,
        models=models,
        seed=seed,
        restarts=restarts,
        horizons=horizons,
        alpha=alpha,
        stride=stride,
        reestimate_every=reestimate_every,
        mc_paths=mc_paths,
        out=out,
        formats=formats,
    )
    execute(
        Stage.BACKTEST, config_file_path, run_config_path, overrides, reproduce=True
    )
