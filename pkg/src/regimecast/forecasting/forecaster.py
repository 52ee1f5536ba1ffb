"""Rolling-origin out-of-sample forecasting.

Parameters stay fixed at the in-sample estimates (optionally re-estimated
every N origins); the filter is run once over the whole series and every
origin t in the out-of-sample block emits the k-step cumulative forecast
paired with the realized k-period variance and return.
"""

import logging
import time
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
import pandas as pd

from regimecast.config.presets import EstimatorOptions
from regimecast.config.utils import canonical_hash
from regimecast.data.market_data import (
    Frequency,
    ReturnSeries,
    SampleSplit,
    realized_k_period,
    realized_k_return,
    to_realized_vol,
)
from regimecast.estimation.estimator import FitResult, refit
from regimecast.exceptions import ForecastError
from regimecast.models.factories import ModelFactory
from regimecast.models.interfaces import FilterOutput, ModelKind, RegimeProbPath
from regimecast.models.mrs import MrsGarchModel
from regimecast.models.params import ParamVector
from regimecast.utils.logging import ModelLoggerAdapter, TimingLoggerAdapter

logger = logging.getLogger(__name__)

FORECAST_COLUMNS = [
    "model",
    "frequency",
    "origin_date",
    "k",
    "forecast",
    "realized",
    "realized_return",
    "seed",
    "snapshot",
    "steps",
    "weight_1",
    "weight_2",
    "regime_variance_1",
    "regime_variance_2",
]
_FLOAT_FORMAT = "%.17g"
_STEP_SEPARATOR = ";"


def snapshot_id(params: ParamVector) -> str:
    """Return a short, stable identifier of a parameter set."""
    payload = {"class": type(params).__name__, **params.as_dict()}
    return canonical_hash(payload)[:12]


@dataclass(frozen=True)
class ForecastTable:
    """Out-of-sample forecasts of one model, one row per (origin, k).

    Attributes:
        model: The model that produced the forecasts.
        frequency: Data frequency of the underlying series.
        rows: One row per (origin, k); see ``FORECAST_COLUMNS``.
        steps: Per-step forecasts ĥ_{t,t+τ} per row; they sum to the row's
            cumulative forecast.
        snapshots: Parameter sets keyed by their snapshot id.

    """

    model: ModelKind
    frequency: Frequency
    rows: pd.DataFrame
    steps: tuple[np.ndarray, ...]
    snapshots: dict[str, ParamVector] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.rows)

    def __post_init__(self) -> None:
        if len(self.steps) != len(self.rows):
            msg = "Forecast table rows and step components differ in length."
            raise ForecastError(msg)

    @property
    def horizons(self) -> list[int]:
        """Distinct horizons in ascending order."""
        return sorted(int(k) for k in self.rows["k"].unique())

    def panel(self, k: int) -> "ForecastTable":
        """Return the rows of one horizon."""
        mask = (self.rows["k"] == k).to_numpy()
        index = np.flatnonzero(mask)
        return ForecastTable(
            model=self.model,
            frequency=self.frequency,
            rows=self.rows.iloc[index].reset_index(drop=True),
            steps=tuple(self.steps[i] for i in index),
            snapshots=self.snapshots,
        )

    @property
    def forecast(self) -> np.ndarray:
        return self.rows["forecast"].to_numpy(dtype=np.float64)

    @property
    def realized(self) -> np.ndarray:
        return self.rows["realized"].to_numpy(dtype=np.float64)

    @property
    def regime_weights(self) -> np.ndarray | None:
        """Horizon-averaged regime probabilities per row (MRS only)."""
        if self.model != ModelKind.MRS:
            return None
        return self.rows[["weight_1", "weight_2"]].to_numpy(dtype=np.float64)

    @property
    def regime_variances(self) -> np.ndarray | None:
        """Cumulative variance per regime per row (MRS only)."""
        if self.model != ModelKind.MRS:
            return None
        return self.rows[["regime_variance_1", "regime_variance_2"]].to_numpy(
            dtype=np.float64
        )

    def to_frame(self) -> pd.DataFrame:
        """Return the rows with per-step components as a text column."""
        frame = self.rows.copy()
        frame["steps"] = [
            _STEP_SEPARATOR.join(_FLOAT_FORMAT % v for v in steps)
            for steps in self.steps
        ]
        frame["origin_date"] = frame["origin_date"].dt.strftime("%Y-%m-%d")
        return frame[FORECAST_COLUMNS]


def write_forecast_table(table: ForecastTable, path: Path) -> Path:
    """Write a forecast table as CSV; floats keep full precision."""
    path.parent.mkdir(parents=True, exist_ok=True)
    table.to_frame().to_csv(
        path, index=False, float_format=_FLOAT_FORMAT, lineterminator="\n"
    )
    return path


def read_forecast_table(path: Path) -> ForecastTable:
    """Read a forecast table written by ``write_forecast_table``."""
    frame = pd.read_csv(
        path,
        comment="#",
        dtype={"model": str, "frequency": str, "snapshot": str, "steps": str},
        float_precision="round_trip",
    )
    missing = [c for c in FORECAST_COLUMNS if c not in frame.columns]
    if missing or frame.empty:
        absent = ", ".join(missing) or "rows"
        msg = f"{path} is not a forecast table (missing: {absent})."
        raise ForecastError(msg)
    models = frame["model"].unique()
    if len(models) != 1:
        msg = f"{path} mixes models: {', '.join(models)}."
        raise ForecastError(msg)
    steps = tuple(
        np.array([float(v) for v in text.split(_STEP_SEPARATOR)], dtype=np.float64)
        for text in frame.pop("steps")
    )
    frame["origin_date"] = pd.to_datetime(frame["origin_date"], format="%Y-%m-%d")
    frame["k"] = frame["k"].astype(np.int64)
    frame["seed"] = frame["seed"].astype(np.int64)
    return ForecastTable(
        model=ModelKind(models[0]),
        frequency=Frequency(frame["frequency"].iloc[0]),
        rows=frame[[c for c in FORECAST_COLUMNS if c != "steps"]],
        steps=steps,
    )


def _check_horizons(horizons: Sequence[int], split: SampleSplit) -> list[int]:
    if not horizons:
        msg = "At least one forecast horizon is required."
        raise ForecastError(msg)
    ordered = sorted(set(horizons))
    if ordered[0] < 1:
        msg = f"Forecast horizons must be positive (got {ordered[0]})."
        raise ForecastError(msg)
    if ordered[-1] > split.n_out:
        msg = (
            f"Horizon {ordered[-1]} exceeds the out-of-sample length {split.n_out}."
        )
        raise ForecastError(msg)
    return ordered


def rolling_forecast(
    model: ModelKind | str,
    fit: FitResult,
    returns: ReturnSeries,
    split: SampleSplit,
    horizons: Sequence[int],
    *,
    stride: int = 1,
    mc_paths: int = 10000,
    seed: int = 0,
    reestimate_every: int | None = None,
    options: EstimatorOptions | None = None,
) -> ForecastTable:
    """Produce out-of-sample k-step forecasts from every origin.

    Origins run from the last in-sample index to T−1−k in steps of
    ``stride``. Each row pairs the cumulative forecast Σ_τ ĥ_{t,t+τ} with
    the realized Σ_τ σ²_{t+τ}.

    Args:
        model: Which model to forecast with.
        fit: In-sample fit of the same model on the same series.
        returns: The full return series.
        split: In-sample / out-of-sample split of ``returns``.
        horizons: Forecast horizons k.
        stride: Distance between consecutive origins.
        mc_paths: Monte Carlo paths for EGARCH forecasts.
        seed: Base seed; each origin draws from ``[seed, origin]``.
        reestimate_every: Refit every this many origins on data up to the
            origin; None keeps the in-sample estimates.
        options: Estimator options used when refitting.

    Returns:
        The forecast table ordered by horizon, then origin.

    Raises:
        ForecastError: If a horizon exceeds the out-of-sample length.

    """
    kind = ModelKind(model)
    if fit.model != kind:
        msg = f"Fit is for {fit.model.label}, not {kind.label}."
        raise ForecastError(msg)
    if stride < 1:
        msg = f"Stride must be at least 1 (got {stride})."
        raise ForecastError(msg)
    ordered = _check_horizons(horizons, split)
    model_logger = ModelLoggerAdapter(
        logger,
        model=kind.label,
        frequency=returns.frequency,
        task_descriptor="FORECAST",
    )
    model_logger.debug(f"Starting forecasts for horizons {ordered}")
    started = time.perf_counter()

    impl = ModelFactory.get_model(kind)
    vol = to_realized_vol(returns)
    first_origin = split.n_in - 1
    last_origin = len(returns) - 1 - ordered[0]
    origins = range(first_origin, last_origin + 1, stride)

    # parameters and filter state in force at each origin
    fits: dict[int, tuple[FitResult, FilterOutput, str]] = {}
    current = fit
    path = impl.filter(fit.params, returns.values, fit.h_init, returns.dates)
    snapshots = {snapshot_id(fit.params): fit.params}
    for count, origin in enumerate(origins):
        if reestimate_every and count and count % reestimate_every == 0:
            current = refit(current, returns.head(origin + 1), options)
            path = impl.filter(current.params, returns.values, current.h_init)
            snapshots.setdefault(snapshot_id(current.params), current.params)
            model_logger.debug(f"Re-estimated at origin {origin}")
        fits[origin] = (current, path, snapshot_id(current.params))

    records: list[dict] = []
    steps: list[np.ndarray] = []
    for k in ordered:
        for origin in origins:
            if origin + k > len(returns) - 1:
                break
            state, state_path, snapshot = fits[origin]
            row = {
                "model": kind.value,
                "frequency": returns.frequency.value,
                "origin_date": returns.dates[origin],
                "k": k,
                "seed": seed,
                "snapshot": snapshot,
                "realized": realized_k_period(vol, origin, k),
                "realized_return": realized_k_return(returns, origin, k),
                "weight_1": np.nan,
                "weight_2": np.nan,
                "regime_variance_1": np.nan,
                "regime_variance_2": np.nan,
            }
            if isinstance(impl, MrsGarchModel) and isinstance(
                state_path, RegimeProbPath
            ):
                regime = impl.regime_forecast(state.params, state_path, origin, k)
                path_steps = regime.steps
                row["weight_1"], row["weight_2"] = regime.regime_weights
                (
                    row["regime_variance_1"],
                    row["regime_variance_2"],
                ) = regime.regime_cumulative
            else:
                path_steps = impl.forecast_steps(
                    state.params, state_path, origin, k, mc_paths=mc_paths, seed=seed
                )
            row["forecast"] = float(np.sum(path_steps))
            records.append(row)
            steps.append(path_steps)

    rows = pd.DataFrame.from_records(
        records, columns=[c for c in FORECAST_COLUMNS if c != "steps"]
    )
    rows["origin_date"] = pd.to_datetime(rows["origin_date"])
    rows["k"] = rows["k"].astype(np.int64)
    rows["seed"] = rows["seed"].astype(np.int64)
    table = ForecastTable(
        model=kind,
        frequency=returns.frequency,
        rows=rows,
        steps=tuple(steps),
        snapshots=snapshots,
    )
    TimingLoggerAdapter(
        logger,
        operation_type="rolling_forecast",
        model=kind.label,
        frequency=str(returns.frequency),
    ).info(f"Rows: {len(table)}, Time: {time.perf_counter() - started:.1f}s")
    return table
