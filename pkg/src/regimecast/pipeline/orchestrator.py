"""Orchestration of the load → fit → forecast → evaluate → backtest workflow.

Stages run in order; within the fit and forecast stages the requested
models are processed concurrently in worker threads, gated by a semaphore.
Results are always assembled in the requested model order.
"""

import asyncio
import logging
import shutil
import tempfile
import time
from collections.abc import Awaitable, Callable
from dataclasses import dataclass, field
from enum import IntEnum
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from regimecast.config.presets import EstimatorOptions, Presets
from regimecast.config.run import (
    RUN_CONFIG_FILE,
    RunConfig,
    config_hash,
    save_run_config,
)
from regimecast.data.market_data import (
    PriceSeries,
    ReturnSeries,
    SampleSplit,
    load_prices,
    market_frame,
    split,
    subsample,
    to_realized_vol,
    to_returns,
)
from regimecast.estimation.estimator import FitResult, fit
from regimecast.evaluation.ranking import (
    LossReport,
    evaluate_in_sample,
    evaluate_panel,
)
from regimecast.exceptions import ParameterError, StageError
from regimecast.forecasting.forecaster import ForecastTable, rolling_forecast
from regimecast.models.interfaces import ModelKind
from regimecast.models.params import ParamVector
from regimecast.reporting.exporters import Provenance, export_table
from regimecast.reporting.tables import (
    coefficient_table,
    fit_summary_table,
    loss_table,
    recovery_table,
    regime_table,
    var_table,
)
from regimecast.risk.backtest import LrReport, VarSeries, backtest
from regimecast.simlab.simulate import SimOutput, export_prices, simulate
from regimecast.utils.logging import (
    AppLoggerAdapter,
    ModelLoggerAdapter,
    TimingLoggerAdapter,
)

logger = logging.getLogger(__name__)

SIM_PRICES_FILE = "simulated_prices.csv"


class Stage(IntEnum):
    """Pipeline stages in execution order."""

    LOAD = 1
    SPLIT = 2
    FIT = 3
    FORECAST = 4
    EVALUATE = 5
    BACKTEST = 6

    @property
    def label(self) -> str:
        return self.name.lower()


@dataclass
class PipelineState:
    """Results accumulated by the stages that have run."""

    prices: PriceSeries | None = None
    returns: ReturnSeries | None = None
    split: SampleSplit | None = None
    fits: dict[ModelKind, FitResult] = field(default_factory=dict)
    forecasts: dict[ModelKind, ForecastTable] = field(default_factory=dict)
    in_sample: LossReport | None = None
    panels: dict[int, LossReport] = field(default_factory=dict)
    var_series: dict[int, dict[ModelKind, VarSeries]] = field(default_factory=dict)
    backtests: dict[int, dict[ModelKind, LrReport]] = field(default_factory=dict)


class Pipeline:
    """Runs the stages of one run config up to a requested stage."""

    def __init__(
        self, run_config: RunConfig, presets: Presets, threads: int = 4
    ) -> None:
        """Initialize the pipeline.

        Args:
            run_config: What to run.
            presets: Frequency presets and numerical defaults.
            threads: Maximum number of models processed at once.

        """
        self.run_config = run_config
        self.presets = presets
        self.threads = threads
        self.state = PipelineState()
        self.app_logger = AppLoggerAdapter(logger, operation="PIPELINE")

    @property
    def estimator_options(self) -> EstimatorOptions:
        return self.presets.estimator.model_copy(
            update={"restarts": self.run_config.restarts, "seed": self.run_config.seed}
        )

    @property
    def horizons(self) -> list[int]:
        return self.run_config.resolved_horizons(self.presets)

    async def _stage(self, stage: Stage, action: Callable[[], Awaitable[None]]) -> None:
        started = time.perf_counter()
        self.app_logger.debug(f"Starting stage '{stage.label}'")
        try:
            await action()
        except Exception as exc:
            self.app_logger.error(f"Stage '{stage.label}' failed: {exc}")
            raise StageError(stage.label, exc) from exc
        TimingLoggerAdapter(logger, operation_type="stage", stage=stage.label).info(
            f"Time: {time.perf_counter() - started:.1f}s"
        )

    async def _per_model(
        self, work: Callable[[ModelKind], Any]
    ) -> dict[ModelKind, Any]:
        semaphore = asyncio.Semaphore(self.threads)

        async def guarded_task(kind: ModelKind) -> Any:  # noqa: ANN401
            async with semaphore:
                return await asyncio.to_thread(work, kind)

        results = await asyncio.gather(
            *(guarded_task(kind) for kind in self.run_config.models)
        )
        return dict(zip(self.run_config.models, results, strict=True))

    async def _load(self) -> None:
        rc = self.run_config
        prices = load_prices(
            rc.require_input(), rc.frequency, rc.date_column, rc.price_column
        )
        returns = to_returns(prices)
        if rc.sample_start is not None or rc.sample_end is not None:
            returns = subsample(returns, rc.sample_start, rc.sample_end)
        self.state.prices = prices
        self.state.returns = returns
        self.app_logger.info(f"Loaded {len(prices)} prices from {rc.input}")

    async def _split(self) -> None:
        assert self.state.returns is not None
        self.state.split = split(
            self.state.returns, self.run_config.check_window(self.presets)
        )

    async def _fit(self) -> None:
        returns, sample_split = self.state.returns, self.state.split
        assert returns is not None and sample_split is not None
        in_sample = returns.head(sample_split.n_in)
        options = self.estimator_options
        self.state.fits = await self._per_model(
            lambda kind: fit(kind, in_sample, options)
        )
        self.state.in_sample = evaluate_in_sample(
            list(self.state.fits.values()), to_realized_vol(in_sample)
        )

    async def _forecast(self) -> None:
        returns, sample_split = self.state.returns, self.state.split
        assert returns is not None and sample_split is not None
        rc = self.run_config
        options = self.estimator_options
        horizons = self.horizons

        def work(kind: ModelKind) -> ForecastTable:
            return rolling_forecast(
                kind,
                self.state.fits[kind],
                returns,
                sample_split,
                horizons,
                stride=rc.stride,
                mc_paths=rc.mc_paths,
                seed=rc.seed,
                reestimate_every=rc.reestimate_every,
                options=options,
            )

        self.state.forecasts = await self._per_model(work)

    async def _evaluate(self) -> None:
        tables = [self.state.forecasts[kind] for kind in self.run_config.models]
        self.state.panels = {k: evaluate_panel(tables, k) for k in self.horizons}

    async def _backtest(self) -> None:
        alpha = self.run_config.alpha
        for k in self.horizons:
            self.state.var_series[k] = {}
            self.state.backtests[k] = {}
            for kind in self.run_config.models:
                series, report = backtest(
                    self.state.forecasts[kind].panel(k), self.state.fits[kind], alpha
                )
                self.state.var_series[k][kind] = series
                self.state.backtests[k][kind] = report

    async def run(self, until: Stage = Stage.BACKTEST) -> PipelineState:
        """Run every stage up to and including ``until``.

        Raises:
            StageError: If a stage fails; names the stage and keeps the
                underlying error's exit code.

        """
        actions = {
            Stage.LOAD: self._load,
            Stage.SPLIT: self._split,
            Stage.FIT: self._fit,
            Stage.FORECAST: self._forecast,
            Stage.EVALUATE: self._evaluate,
            Stage.BACKTEST: self._backtest,
        }
        for stage, action in actions.items():
            if stage > until:
                break
            await self._stage(stage, action)
        return self.state

    def tables(self, include_market: bool = False) -> dict[str, pd.DataFrame]:
        """Return the report tables of the stages that have run, in write order."""
        state = self.state
        tables: dict[str, pd.DataFrame] = {}
        if include_market and state.prices is not None:
            tables["market"] = market_frame(state.prices)
        if state.fits:
            fits = [state.fits[kind] for kind in self.run_config.models]
            tables["coefficients"] = pd.concat(
                [coefficient_table(f) for f in fits], ignore_index=True
            )
            tables["fit_summary"] = fit_summary_table(fits)
            if state.in_sample is not None:
                tables["in_sample"] = loss_table(state.in_sample)
            mrs = state.fits.get(ModelKind.MRS)
            if mrs is not None and mrs.regime_path is not None:
                tables["regime_probabilities"] = regime_table(mrs.regime_path)
        for kind, table in state.forecasts.items():
            tables[f"forecasts_{kind.value}"] = table.to_frame()
        for k, report in state.panels.items():
            tables[f"losses_k{k}"] = loss_table(report)
        for k, reports in state.backtests.items():
            tables[f"var_k{k}"] = var_table(reports, k, self.run_config.alpha)
        return tables

    def provenance(self) -> Provenance:
        checksum = self.state.prices.checksum if self.state.prices is not None else None
        return Provenance(
            config_hash=config_hash(self.run_config),
            seeds={"estimator": self.run_config.seed, "forecast": self.run_config.seed},
            input_checksum=checksum,
        )


async def write_bundle(
    tables: dict[str, pd.DataFrame],
    run_config: RunConfig,
    provenance: Provenance,
    save_config: bool = False,
) -> list[Path]:
    """Write tables through a staging directory, then move them into ``out``.

    A failure while writing removes the staging directory, so ``out`` never
    holds a partial bundle from this run. With ``save_config`` the run config
    is written too, behind the same provenance header as the tables.
    """
    out = run_config.out
    out.parent.mkdir(parents=True, exist_ok=True)
    staging = Path(tempfile.mkdtemp(prefix=".regimecast-staging-", dir=out.parent))
    try:
        for name, frame in tables.items():
            await export_table(frame, staging, name, run_config.formats, provenance)
        if save_config:
            header = provenance.header(RUN_CONFIG_FILE)
            save_run_config(run_config, staging / RUN_CONFIG_FILE, header)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for path in sorted(staging.iterdir()):
            target = out / path.name
            path.replace(target)
            written.append(target)
        return written
    finally:
        shutil.rmtree(staging, ignore_errors=True)


async def run_pipeline(
    run_config: RunConfig,
    presets: Presets,
    until: Stage,
    threads: int = 4,
    reproduce: bool = False,
) -> tuple[PipelineState, list[Path]]:
    """Run the stages up to ``until`` and write their report bundle.

    ``reproduce`` adds the market table and the resolved run config.
    """
    pipeline = Pipeline(run_config, presets, threads)
    state = await pipeline.run(until)
    try:
        written = await write_bundle(
            pipeline.tables(include_market=reproduce),
            run_config,
            pipeline.provenance(),
            save_config=reproduce,
        )
    except Exception as exc:
        raise StageError("export", exc) from exc
    return state, written


def simulation_params(
    kind: ModelKind, presets: Presets, overrides: dict[str, float] | None = None
) -> ParamVector:
    """Build generating parameters from the presets and ``name=value`` overrides."""
    values = {**presets.simulation.params.get(kind, {}), **(overrides or {})}
    names = kind.params_class.names()
    unknown = sorted(set(values) - set(names))
    missing = [name for name in names if name not in values]
    if unknown or missing:
        msg = (
            f"{kind.label} parameters: unknown {unknown or 'none'}, "
            f"missing {missing or 'none'}."
        )
        raise ParameterError(msg)
    params = kind.params_class(**{name: float(values[name]) for name in names})
    params.validate()
    return params


def regime_accuracy(sim: SimOutput, fit_result: FitResult) -> float:
    """Share of dates the filtered high-regime probability classifies correctly."""
    path = fit_result.regime_path
    if path is None or sim.regimes is None:
        msg = "Regime accuracy needs an MRS simulation and an MRS fit."
        raise ParameterError(msg)
    predicted = path.filtered[:, 1] > 0.5
    return float(np.mean(predicted == (sim.regimes == 1)))


async def run_simulation(
    kind: ModelKind,
    params: ParamVector,
    run_config: RunConfig,
    presets: Presets,
    n: int,
    burn_in: int,
    recover: bool = False,
) -> list[Path]:
    """Simulate prices and optionally fit the model back to them.

    Writes ``simulated_prices.csv`` and, with ``recover``, a recovery table
    comparing truth, estimate and standard error (plus regime accuracy for
    MRS).
    """
    model_logger = ModelLoggerAdapter(
        logger,
        model=kind.label,
        frequency=run_config.frequency,
        task_descriptor="SIMULATE",
    )
    try:
        sim = await asyncio.to_thread(
            simulate, kind, params, n, burn_in, run_config.seed, run_config.frequency
        )
    except Exception as exc:
        raise StageError("simulate", exc) from exc
    model_logger.info(f"Simulated {n} returns after {burn_in} burn-in steps")

    tables: dict[str, pd.DataFrame] = {}
    if recover:
        options = presets.estimator.model_copy(
            update={"restarts": run_config.restarts, "seed": run_config.seed}
        )
        try:
            fit_result = await asyncio.to_thread(fit, kind, sim.returns, options)
        except Exception as exc:
            raise StageError("fit", exc) from exc
        tables["recovery"] = recovery_table(sim.params, fit_result)
        tables["fit_summary"] = fit_summary_table([fit_result])
        if kind == ModelKind.MRS:
            accuracy = regime_accuracy(sim, fit_result)
            tables["regime_accuracy"] = pd.DataFrame(
                {"metric": ["regime_accuracy"], "value": [accuracy]}
            )
            model_logger.info(f"Regime classification accuracy: {accuracy:.3f}")

    provenance = Provenance(
        config_hash=config_hash(run_config), seeds={"simulation": run_config.seed}
    )
    out = run_config.out
    try:
        out.mkdir(parents=True, exist_ok=True)
        written = [
            export_prices(
                sim, out / SIM_PRICES_FILE, provenance.header(SIM_PRICES_FILE)
            )
        ]
        written += await write_bundle(tables, run_config, provenance)
    except Exception as exc:
        raise StageError("export", exc) from exc
    return written
