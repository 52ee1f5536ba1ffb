"""Success Ratio and the Pesaran-Timmermann directional accuracy test.

The direction of row t compares against the previous realized value: the
forecast predicts sign(ĥ_t − σ²_{t−1}) and the outcome is
sign(σ²_t − σ²_{t−1}).
"""

import math
from dataclasses import dataclass

import numpy as np

from regimecast.exceptions import EvaluationError
from regimecast.forecasting.forecaster import ForecastTable

MIN_SR_ROWS = 2
MIN_DA_ROWS = 10
# two-sided 5% critical value of the standard normal
DA_CRITICAL = 1.96
SIGNS = (-1.0, 0.0, 1.0)


@dataclass(frozen=True)
class DirectionalResult:
    """Directional accuracy of one set of forecasts.

    Attributes:
        success_ratio: Share of rows with the direction predicted correctly.
        statistic: Pesaran-Timmermann statistic, None when undefined.
        n: Number of direction pairs.

    """

    success_ratio: float
    statistic: float | None
    n: int

    @property
    def significant(self) -> bool:
        """Whether independence is rejected at the 5% level."""
        return self.statistic is not None and abs(self.statistic) > DA_CRITICAL


def directions(
    forecast: np.ndarray, realized: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Return (predicted, actual) signs of change against the previous realized.

    The first row has no previous realized value and is dropped.
    """
    forecast = np.asarray(forecast, dtype=np.float64)
    realized = np.asarray(realized, dtype=np.float64)
    previous = realized[:-1]
    return np.sign(forecast[1:] - previous), np.sign(realized[1:] - previous)


def success_ratio_of(predicted: np.ndarray, actual: np.ndarray) -> float:
    """Fraction of matching signs; zero changes match only each other."""
    if len(predicted) == 0:
        msg = "Success ratio needs at least one direction pair."
        raise EvaluationError(msg)
    return float(np.mean(predicted == actual))


def pesaran_timmermann(predicted: np.ndarray, actual: np.ndarray) -> float | None:
    """Return the PT statistic of predicted against actual directions.

    Directions are the signs -1, 0 and +1 and hits follow the success ratio:
    a zero change matches only another zero. The independence benchmark is
    the sum over signs of the product of the two marginal shares. Without
    zero changes this is the classical up/down statistic.

    Returns None when either marginal is degenerate (every move has the same
    sign), where the statistic is undefined.
    """
    predicted = np.sign(np.asarray(predicted, dtype=np.float64))
    actual = np.sign(np.asarray(actual, dtype=np.float64))
    n = len(predicted)
    if n == 0:
        return None
    shares_p = np.array([np.mean(predicted == s) for s in SIGNS])
    shares_a = np.array([np.mean(actual == s) for s in SIGNS])
    if shares_p.max() == 1.0 or shares_a.max() == 1.0:
        return None
    sr = success_ratio_of(predicted, actual)
    sri = float(shares_a @ shares_p)
    cov_p = np.diag(shares_p) - np.outer(shares_p, shares_p)
    cov_a = np.diag(shares_a) - np.outer(shares_a, shares_a)
    var_sr = sri * (1.0 - sri) / n
    var_sri = (
        float(shares_a @ cov_p @ shares_a + shares_p @ cov_a @ shares_p) / n
        + float(np.trace(cov_a @ cov_p)) / n**2
    )
    denominator = var_sr - var_sri
    if not denominator > 0.0:
        return None
    return (sr - sri) / math.sqrt(denominator)


def success_ratio(table: ForecastTable) -> float:
    """Return the Success Ratio of a forecast table.

    Raises:
        EvaluationError: If the table has fewer than 2 rows.

    """
    if len(table) < MIN_SR_ROWS:
        msg = f"Success ratio needs at least {MIN_SR_ROWS} rows (got {len(table)})."
        raise EvaluationError(msg)
    return success_ratio_of(*directions(table.forecast, table.realized))


def da_test(table: ForecastTable) -> DirectionalResult:
    """Run the directional accuracy test on a forecast table.

    Raises:
        EvaluationError: If the table has fewer than 10 rows.

    """
    if len(table) < MIN_DA_ROWS:
        msg = (
            f"Directional accuracy needs at least {MIN_DA_ROWS} rows "
            f"(got {len(table)})."
        )
        raise EvaluationError(msg)
    predicted, actual = directions(table.forecast, table.realized)
    return DirectionalResult(
        success_ratio=success_ratio_of(predicted, actual),
        statistic=pesaran_timmermann(predicted, actual),
        n=len(predicted),
    )
