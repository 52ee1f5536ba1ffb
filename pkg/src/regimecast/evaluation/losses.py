"""Statistical loss functions for variance forecasts.

For forecasts ĥ and realized variances σ²:

* MSE   = mean (σ² − ĥ)²
* MAD   = mean |σ² − ĥ|
* QLIKE = mean (ln ĥ + σ²/ĥ)
* R2LOG = mean [ln(σ²/ĥ)]²

QLIKE and R2LOG skip rows with σ² = 0 and report how many were skipped.
"""

from dataclasses import dataclass
from enum import StrEnum

import numpy as np

from regimecast.data.market_data import RealizedVolSeries
from regimecast.estimation.estimator import FitResult
from regimecast.exceptions import EvaluationError
from regimecast.forecasting.forecaster import ForecastTable


class LossKind(StrEnum):
    """Loss criteria in report order."""

    MSE = "MSE"
    MAD = "MAD"
    QLIKE = "QLIKE"
    R2LOG = "R2LOG"


@dataclass(frozen=True)
class LossValues:
    """The four losses of one set of forecasts.

    Attributes:
        mse: Mean squared error.
        mad: Mean absolute deviation.
        qlike: Gaussian quasi-likelihood loss.
        r2log: Mean squared log ratio.
        n: Rows evaluated by MSE and MAD.
        skipped: Rows with zero realized variance left out of QLIKE and
            R2LOG.

    """

    mse: float
    mad: float
    qlike: float
    r2log: float
    n: int
    skipped: int = 0

    def as_dict(self) -> dict[LossKind, float]:
        return {
            LossKind.MSE: self.mse,
            LossKind.MAD: self.mad,
            LossKind.QLIKE: self.qlike,
            LossKind.R2LOG: self.r2log,
        }


def loss_values(forecast: np.ndarray, realized: np.ndarray) -> LossValues:
    """Compute the four losses of forecasts against realized variances.

    Raises:
        EvaluationError: If there are no rows, the inputs differ in length,
            a forecast is not positive or a realized value is negative.

    """
    forecast = np.asarray(forecast, dtype=np.float64)
    realized = np.asarray(realized, dtype=np.float64)
    if forecast.shape != realized.shape or forecast.ndim != 1:
        msg = "Forecasts and realized values must be 1-d arrays of equal length."
        raise EvaluationError(msg)
    if len(forecast) == 0:
        msg = "Cannot evaluate an empty forecast table."
        raise EvaluationError(msg)
    if not np.all(np.isfinite(forecast)) or np.any(forecast <= 0.0):
        msg = "All variance forecasts must be finite and positive."
        raise EvaluationError(msg)
    if np.any(realized < 0.0):
        msg = "Realized variances must be non-negative."
        raise EvaluationError(msg)

    error = realized - forecast
    positive = realized > 0.0
    kept_f, kept_r = forecast[positive], realized[positive]
    if len(kept_f):
        qlike = float(np.mean(np.log(kept_f) + kept_r / kept_f))
        r2log = float(np.mean(np.log(kept_r / kept_f) ** 2))
    else:
        qlike = r2log = float("nan")
    return LossValues(
        mse=float(np.mean(error**2)),
        mad=float(np.mean(np.abs(error))),
        qlike=qlike,
        r2log=r2log,
        n=len(forecast),
        skipped=int(len(forecast) - positive.sum()),
    )


def losses(table: ForecastTable) -> LossValues:
    """Return the four losses of a forecast table's cumulative forecasts."""
    return loss_values(table.forecast, table.realized)


def in_sample_losses(fit: FitResult, vol: RealizedVolSeries) -> LossValues:
    """Score the in-sample one-step variances against squared returns.

    For MRS fits the one-step variance is the probability-weighted
    predictive variance of the Hamilton filter.
    """
    if len(vol) != fit.n_obs:
        msg = (
            f"Realized series has {len(vol)} rows but the fit used {fit.n_obs}."
        )
        raise EvaluationError(msg)
    return loss_values(fit.path.h, vol.values)
