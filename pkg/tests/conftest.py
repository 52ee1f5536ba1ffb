"""Shared fixtures: simulated series, parameter sets and price files."""

from collections.abc import Callable
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from regimecast.data.market_data import Frequency, ReturnSeries, write_prices
from regimecast.estimation.estimator import FitResult, initial_variance
from regimecast.models.factories import ModelFactory
from regimecast.models.interfaces import ModelKind
from regimecast.models.params import (
    EgarchParams,
    GarchParams,
    GjrParams,
    MrsParams,
    ParamVector,
)
from regimecast.simlab.simulate import SimOutput, simulate


def make_returns(
    values: np.ndarray,
    frequency: Frequency = Frequency.DAILY,
    start: str = "2000-01-04",
) -> ReturnSeries:
    """Wrap raw values in a business-day dated ReturnSeries."""
    dates = pd.date_range(start, periods=len(values), freq=frequency.pandas_freq)
    return ReturnSeries(frequency, dates, np.asarray(values, dtype=np.float64))


def make_fit(
    kind: ModelKind | str, params: ParamVector, returns: ReturnSeries
) -> FitResult:
    """A fit at known parameters, skipping the optimizer."""
    kind = ModelKind(kind)
    h_init = initial_variance(returns.values)
    model = ModelFactory.get_model(kind)
    path = model.filter(params, returns.values, h_init, returns.dates)
    return FitResult(
        model=kind,
        params=params,
        std_errors=dict.fromkeys(params.names()),
        t_values=dict.fromkeys(params.names()),
        loglik=path.loglik,
        aic=(2.0 * len(params.names()) - 2.0 * path.loglik) / len(returns),
        converged=True,
        n_obs=len(returns),
        h_init=h_init,
        path=path,
        trace=(),
    )


@pytest.fixture
def returns_factory() -> Callable[..., ReturnSeries]:
    return make_returns


@pytest.fixture
def fit_factory() -> Callable[..., FitResult]:
    return make_fit


@pytest.fixture
def garch_params() -> GarchParams:
    return GarchParams(delta=0.05, alpha0=0.05, alpha1=0.08, beta=0.90, nu=7.0)


@pytest.fixture
def gjr_params() -> GjrParams:
    return GjrParams(delta=0.05, alpha0=0.05, alpha1=0.10, xi=0.04, beta=0.88, nu=7.0)


@pytest.fixture
def egarch_params() -> EgarchParams:
    return EgarchParams(
        delta=0.05, alpha0=0.01, alpha1=0.15, xi=-0.05, beta=0.97, nu=7.0
    )


@pytest.fixture
def mrs_params() -> MrsParams:
    return MrsParams.from_regimes(
        GarchParams(delta=0.05, alpha0=0.02, alpha1=0.05, beta=0.90, nu=8.0),
        GarchParams(delta=-0.05, alpha0=0.40, alpha1=0.08, beta=0.88, nu=6.0),
        p=0.98,
        q=0.98,
    )


@pytest.fixture
def random_values() -> np.ndarray:
    """500 heavy-tailed returns with some volatility clustering."""
    rng = np.random.default_rng(20240101)
    scale = np.exp(np.convolve(rng.normal(0, 0.3, 520), np.ones(20) / 5, "valid"))[:500]
    return 0.03 + scale * rng.standard_t(6, 500)


@pytest.fixture
def garch_sim(garch_params: GarchParams) -> SimOutput:
    return simulate("garch", garch_params, n=1200, burn_in=500, seed=7)


@pytest.fixture
def price_file(tmp_path: Path, garch_sim: SimOutput) -> Path:
    """A daily price file of 1201 simulated GARCH prices."""
    return write_prices(garch_sim.prices, tmp_path / "prices.csv")
