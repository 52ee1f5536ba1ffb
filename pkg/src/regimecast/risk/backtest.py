"""Value-at-Risk thresholds and likelihood-ratio coverage backtests.

VaR is a long-position, left-tail return threshold; a violation is a
realized k-period return below it. Degenerate counts use 0·ln 0 = 0.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.special import xlogy

from regimecast.estimation.estimator import FitResult
from regimecast.exceptions import EvaluationError, ParameterError
from regimecast.forecasting.forecaster import ForecastTable
from regimecast.models.interfaces import ModelKind
from regimecast.models.params import MrsParams, ParamVector
from regimecast.models.tdist import StudentT, mixture_quantile, quantile
from regimecast.utils.logging import ModelLoggerAdapter

logger = logging.getLogger(__name__)

# 5% critical values of χ²(1) and χ²(2)
CHI2_1_CRITICAL = 3.841
CHI2_2_CRITICAL = 5.991


def _check_alpha(alpha: float) -> None:
    if not 0.0 < alpha <= 0.5:
        msg = f"VaR tail probability must lie in (0, 0.5] (got {alpha})."
        raise ParameterError(msg)


def var_forecast(
    mean: float, variance: float, alpha: float, d: StudentT, k: int = 1
) -> float:
    """Return the k-step VaR threshold k·mean + t_α·√variance.

    Args:
        mean: One-step conditional mean.
        variance: Cumulative k-step variance forecast.
        alpha: Tail probability.
        d: Standardized innovation law.
        k: Horizon; the mean scales linearly with it.

    Raises:
        ParameterError: If alpha is outside (0, 0.5].
        EvaluationError: If the variance is not positive.

    """
    _check_alpha(alpha)
    if not variance > 0.0:
        msg = f"VaR needs a positive variance forecast (got {variance})."
        raise EvaluationError(msg)
    return k * mean + quantile(d, alpha) * math.sqrt(variance)


def lruc(n: int, n1: int, alpha: float) -> float:
    """Kupiec unconditional coverage statistic, χ²(1) under the null."""
    if n < 1 or not 0 <= n1 <= n:
        msg = f"Invalid violation counts: n={n}, n1={n1}."
        raise EvaluationError(msg)
    n0 = n - n1
    rate = n1 / n
    null = n0 * math.log1p(-alpha) + n1 * math.log(alpha)
    alternative = xlogy(n0, 1.0 - rate) + xlogy(n1, rate)
    return max(-2.0 * (null - alternative), 0.0)


def transition_counts(
    violations: Sequence[int] | np.ndarray,
) -> tuple[int, int, int, int]:
    """Return (n00, n01, n10, n11) of consecutive violation pairs."""
    hits = np.asarray(violations, dtype=np.int64)
    if hits.ndim != 1 or np.any((hits != 0) & (hits != 1)):
        msg = "Violations must be a 0/1 sequence."
        raise EvaluationError(msg)
    prev, curr = hits[:-1], hits[1:]
    return (
        int(np.sum((prev == 0) & (curr == 0))),
        int(np.sum((prev == 0) & (curr == 1))),
        int(np.sum((prev == 1) & (curr == 0))),
        int(np.sum((prev == 1) & (curr == 1))),
    )


def lrind(violations: Sequence[int] | np.ndarray) -> float:
    """Christoffersen independence statistic against a first-order Markov chain."""
    if len(violations) < 2:
        msg = "The independence test needs at least 2 observations."
        raise EvaluationError(msg)
    n00, n01, n10, n11 = transition_counts(violations)
    pi = (n01 + n11) / (n00 + n01 + n10 + n11)
    pi0 = n01 / (n00 + n01) if n00 + n01 else 0.0
    pi1 = n11 / (n10 + n11) if n10 + n11 else 0.0
    null = xlogy(n00 + n10, 1.0 - pi) + xlogy(n01 + n11, pi)
    alternative = (
        xlogy(n00, 1.0 - pi0)
        + xlogy(n01, pi0)
        + xlogy(n10, 1.0 - pi1)
        + xlogy(n11, pi1)
    )
    return max(-2.0 * (null - alternative), 0.0)


def lrcc(
    n: int, n1: int, violations: Sequence[int] | np.ndarray, alpha: float
) -> float:
    """Conditional coverage statistic LRuc + LRind, χ²(2) under the null."""
    return lruc(n, n1, alpha) + lrind(violations)


@dataclass(frozen=True)
class LrReport:
    """Coverage backtest of one model on one panel."""

    lruc: float
    lrind: float
    lrcc: float
    n: int
    n1: int
    n00: int
    n01: int
    n10: int
    n11: int

    @property
    def n0(self) -> int:
        return self.n - self.n1

    @property
    def reject_uc(self) -> bool:
        return self.lruc > CHI2_1_CRITICAL

    @property
    def reject_ind(self) -> bool:
        return self.lrind > CHI2_1_CRITICAL

    @property
    def reject_cc(self) -> bool:
        return self.lrcc > CHI2_2_CRITICAL


def lr_report(violations: Sequence[int] | np.ndarray, alpha: float) -> LrReport:
    """Run the three coverage tests on a violation sequence."""
    _check_alpha(alpha)
    hits = np.asarray(violations, dtype=np.int64)
    n, n1 = len(hits), int(hits.sum())
    uc = lruc(n, n1, alpha)
    ind = lrind(hits)
    n00, n01, n10, n11 = transition_counts(hits)
    return LrReport(
        lruc=uc,
        lrind=ind,
        lrcc=uc + ind,
        n=n,
        n1=n1,
        n00=n00,
        n01=n01,
        n10=n10,
        n11=n11,
    )


@dataclass(frozen=True)
class VarSeries:
    """VaR thresholds paired with realized k-period returns.

    Attributes:
        model: Model that produced the variance forecasts.
        alpha: Tail probability.
        rows: Columns origin_date, k, threshold, realized_return, violation.

    """

    model: ModelKind
    alpha: float
    rows: pd.DataFrame

    def __len__(self) -> int:
        return len(self.rows)

    @property
    def violations(self) -> np.ndarray:
        return self.rows["violation"].to_numpy(dtype=np.int64)


def _row_threshold(
    params: ParamVector, row: pd.Series, alpha: float, k: int
) -> float:
    if isinstance(params, MrsParams):
        stacked = params.stacked()
        return mixture_quantile(
            weights=[row["weight_1"], row["weight_2"]],
            means=k * stacked["delta"],
            variances=[row["regime_variance_1"], row["regime_variance_2"]],
            nus=stacked["nu"],
            p=alpha,
        )
    return var_forecast(params.delta, row["forecast"], alpha, StudentT(params.nu), k)


def var_series(table: ForecastTable, fit: FitResult, alpha: float) -> VarSeries:
    """Build VaR thresholds and violations for a forecast table."""
    _check_alpha(alpha)
    if len(table) == 0:
        msg = "Cannot backtest an empty forecast table."
        raise EvaluationError(msg)
    if table.model != fit.model:
        msg = f"Forecasts are from {table.model.label}, the fit is {fit.model.label}."
        raise EvaluationError(msg)
    thresholds = np.empty(len(table))
    for i, (_, row) in enumerate(table.rows.iterrows()):
        params = table.snapshots.get(row["snapshot"], fit.params)
        thresholds[i] = _row_threshold(params, row, alpha, int(row["k"]))
    realized = table.rows["realized_return"].to_numpy(dtype=np.float64)
    rows = pd.DataFrame(
        {
            "origin_date": table.rows["origin_date"],
            "k": table.rows["k"],
            "threshold": thresholds,
            "realized_return": realized,
            "violation": (realized < thresholds).astype(np.int64),
        }
    )
    return VarSeries(model=table.model, alpha=alpha, rows=rows)


def backtest(
    table: ForecastTable, fit: FitResult, alpha: float = 0.05
) -> tuple[VarSeries, LrReport]:
    """Compute VaR violations of one horizon and run the coverage tests.

    Raises:
        EvaluationError: If the table is empty or mixes horizons.

    """
    if len(table) and len(table.horizons) != 1:
        msg = f"Backtest one horizon at a time (got {table.horizons})."
        raise EvaluationError(msg)
    series = var_series(table, fit, alpha)
    report = lr_report(series.violations, alpha)
    ModelLoggerAdapter(
        logger,
        model=fit.model.label,
        frequency=table.frequency,
        task_descriptor="BACKTEST",
    ).debug(
        f"k={table.horizons[0]}: {report.n1} of {report.n} violations, "
        f"LRcc {report.lrcc:.3f}"
    )
    return series, report
