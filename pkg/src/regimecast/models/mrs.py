"""Two-regime Markov Regime Switching GARCH with Klaassen recombination."""

import math

import numpy as np
import pandas as pd

from regimecast.data.market_data import ReturnSeries
from regimecast.exceptions import FilterError
from regimecast.forecasting.multistep import RegimeForecast, mrs_multistep
from regimecast.models._kernels import mrs_filter
from regimecast.models.interfaces import (
    FilterOutput,
    IVolatilityModel,
    ModelKind,
    RegimeProbPath,
)
from regimecast.models.markov import ergodic_probs
from regimecast.models.params import MrsParams


def _run_filter(
    params: MrsParams,
    values: np.ndarray,
    h_init: float,
    init: np.ndarray | None,
) -> tuple[float, np.ndarray, np.ndarray, np.ndarray]:
    stacked = params.stacked()
    prob_init = ergodic_probs(params.p, params.q) if init is None else init
    return mrs_filter(
        values,
        stacked["delta"],
        stacked["alpha0"],
        stacked["alpha1"],
        stacked["beta"],
        stacked["nu"],
        params.p,
        params.q,
        h_init,
        np.asarray(prob_init, dtype=np.float64),
    )


def hamilton_filter(
    params: MrsParams,
    returns: ReturnSeries | np.ndarray,
    h_init: float,
    init: np.ndarray | None = None,
) -> tuple[float, RegimeProbPath]:
    """Run the Hamilton filter over a series.

    Args:
        params: Model parameters.
        returns: Percent returns.
        h_init: Initial variance of both regimes.
        init: Initial regime probabilities; ergodic when omitted.

    Returns:
        The log-likelihood and the regime probability path.

    Raises:
        FilterError: If the total density vanishes or a variance is not
            finite.

    """
    params.validate()
    if isinstance(returns, ReturnSeries):
        values, dates = returns.values, returns.dates
    else:
        values, dates = np.asarray(returns, dtype=np.float64), None
    total, predicted, filtered, variances = _run_filter(params, values, h_init, init)
    if not math.isfinite(total):
        msg = "MRS-GARCH filter: density vanished or log-likelihood is not finite."
        raise FilterError(msg)
    if not np.all(np.isfinite(variances)) or np.any(variances <= 0.0):
        msg = "MRS-GARCH filter: regime variance is not finite and positive."
        raise FilterError(msg)
    return total, RegimeProbPath(
        predicted=predicted,
        filtered=filtered,
        variances=variances,
        h_init=h_init,
        loglik=total,
        dates=dates,
    )


def regime_prob_series(path: RegimeProbPath) -> pd.Series:
    """Return Pr(s_t = high-variance regime | data to t) per date."""
    index = path.dates if path.dates is not None else pd.RangeIndex(len(path))
    return pd.Series(path.filtered[:, 1], index=index, name="p_high_regime")


class MrsGarchModel(IVolatilityModel):
    """MRS-GARCH(1,1) with Student-t shocks in each regime."""

    kind = ModelKind.MRS

    def filter(
        self,
        params: MrsParams,
        values: np.ndarray,
        h_init: float,
        dates: pd.DatetimeIndex | None = None,
    ) -> RegimeProbPath:
        _, path = hamilton_filter(params, values, h_init)
        if dates is None:
            return path
        return RegimeProbPath(
            predicted=path.predicted,
            filtered=path.filtered,
            variances=path.variances,
            h_init=path.h_init,
            loglik=path.loglik,
            dates=dates,
        )

    def loglik_value(
        self, params: MrsParams, values: np.ndarray, h_init: float
    ) -> float:
        total, _, _, variances = _run_filter(params, values, h_init, None)
        if not np.all(np.isfinite(variances)):
            return math.nan
        return total

    def regime_forecast(
        self, params: MrsParams, path: RegimeProbPath, origin: int, k: int
    ) -> RegimeForecast:
        """Return the forecast from ``origin`` with its regime decomposition."""
        return mrs_multistep(
            params, path.predicted[origin + 1], path.variances[origin + 1], k
        )

    def forecast_steps(
        self,
        params: MrsParams,
        path: FilterOutput,
        origin: int,
        k: int,
        *,
        mc_paths: int = 10000,
        seed: int = 0,
    ) -> np.ndarray:
        if not isinstance(path, RegimeProbPath):
            msg = "MRS-GARCH forecasts need a regime probability path."
            raise FilterError(msg)
        return self.regime_forecast(params, path, origin, k).steps
