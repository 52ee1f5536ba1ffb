"""Simulators for the four volatility models.

These recursions are written independently of the model kernels so that
filters and forecasts can be checked against them.
"""

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd
from numpy.random import Generator
from scipy.special import gammaln

from regimecast.data.market_data import (
    Frequency,
    PriceSeries,
    ReturnSeries,
    write_prices,
)
from regimecast.exceptions import ParameterError, SimulationError
from regimecast.models.interfaces import ModelKind
from regimecast.models.params import (
    EgarchParams,
    GarchParams,
    GjrParams,
    MrsParams,
    ParamVector,
)

DEFAULT_BURN_IN = 1000
BASE_PRICE = 100.0
START_DATE = "2000-01-03"
_LOGH_MAX = 700.0


@dataclass(frozen=True)
class SimOutput:
    """A simulated return series with its ground truth.

    Attributes:
        model: Generating model.
        returns: Simulated percent returns on synthetic dates.
        variances: True conditional variance of each return.
        regimes: True regime index (0 or 1) per return, MRS only.
        params: Generating parameters.
        seed: Seed the draws came from.
        h_init: True variance of the first retained return.

    """

    model: ModelKind
    returns: ReturnSeries
    variances: np.ndarray
    regimes: np.ndarray | None
    params: ParamVector
    seed: int
    h_init: float

    @property
    def prices(self) -> PriceSeries:
        """Prices from a base of 100 by compounding the log-returns."""
        log_prices = np.concatenate(([0.0], np.cumsum(self.returns.values) / 100.0))
        frequency = self.returns.frequency
        dates = _price_dates(frequency, len(self.returns))
        return PriceSeries(frequency, dates, BASE_PRICE * np.exp(log_prices))


def innovations(nu: float, rng: Generator, n: int) -> np.ndarray:
    """Draw unit-variance Student-t shocks."""
    return rng.standard_t(nu, size=n) * math.sqrt((nu - 2.0) / nu)


def t_abs_mean(nu: float) -> float:
    """E|z| of a unit-variance Student-t variable."""
    return (
        2.0
        * math.sqrt(nu - 2.0)
        * math.exp(gammaln(0.5 * (nu + 1.0)) - gammaln(0.5 * nu))
        / (math.sqrt(math.pi) * (nu - 1.0))
    )


def t_log_pdf(e: float, h: float, nu: float) -> float:
    """Log density of a return deviation e under variance h."""
    const = gammaln(0.5 * (nu + 1.0)) - gammaln(0.5 * nu) - 0.5 * math.log(
        math.pi * (nu - 2.0)
    )
    return (
        const
        - 0.5 * (nu + 1.0) * math.log1p(e * e / ((nu - 2.0) * h))
        - 0.5 * math.log(h)
    )


def _price_dates(frequency: Frequency, n: int) -> pd.DatetimeIndex:
    return pd.date_range(START_DATE, periods=n + 1, freq=frequency.pandas_freq)


def _single_regime(
    params: GarchParams | GjrParams, total: int, rng: Generator
) -> tuple[np.ndarray, np.ndarray]:
    if isinstance(params, GjrParams):
        pos, neg = params.xi, params.alpha1
    else:
        pos = neg = params.alpha1
    eta = innovations(params.nu, rng, total)
    returns = np.empty(total)
    h = np.empty(total)
    h_t = params.alpha0 / (1.0 - params.persistence)
    for t in range(total):
        h[t] = h_t
        returns[t] = params.delta + math.sqrt(h_t) * eta[t]
        e = returns[t] - params.delta
        e2 = e * e
        h_t = params.alpha0 + (pos if e > 0.0 else neg) * e2 + params.beta * h_t
    return returns, h


def _egarch(
    params: EgarchParams, total: int, rng: Generator, burn_in: int
) -> tuple[np.ndarray, np.ndarray]:
    eta = innovations(params.nu, rng, total)
    centre = t_abs_mean(params.nu)
    returns = np.empty(total)
    h = np.empty(total)
    logh = params.alpha0 / (1.0 - params.beta)
    for t in range(total):
        if not logh < _LOGH_MAX:
            msg = f"EGARCH path diverged at step {t - burn_in} (ln h = {logh:.1f})."
            raise SimulationError(msg)
        h[t] = math.exp(logh)
        returns[t] = params.delta + math.sqrt(h[t]) * eta[t]
        z = (returns[t] - params.delta) / math.sqrt(h[t])
        logh = (
            params.alpha0
            + params.alpha1 * (abs(z) - centre)
            + params.xi * z
            + params.beta * logh
        )
    return returns, h


def _mrs(
    params: MrsParams, total: int, rng: Generator
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Draw regimes from the chain and update the regime variances by filtering."""
    regimes_params = (params.regime(1), params.regime(2))
    stay = (params.p, params.q)
    move = np.array([[params.p, 1.0 - params.p], [1.0 - params.q, params.q]])
    pi_1 = (1.0 - params.q) / (2.0 - params.p - params.q)
    pred = np.array([pi_1, 1.0 - pi_1])
    g1 = regimes_params[0]
    h_regime = np.full(2, g1.alpha0 / (1.0 - g1.persistence))
    delta = np.array([g.delta for g in regimes_params])

    s = 0 if rng.random() < pi_1 else 1
    shocks = np.stack([innovations(g.nu, rng, total) for g in regimes_params])
    uniforms = rng.random(total)
    returns = np.empty(total)
    h = np.empty(total)
    regimes = np.empty(total, dtype=np.int64)
    for t in range(total):
        g = regimes_params[s]
        regimes[t] = s
        h[t] = h_regime[s]
        r = g.delta + math.sqrt(h_regime[s]) * shocks[s, t]
        returns[t] = r

        logf = np.array(
            [
                t_log_pdf(r - delta[i], h_regime[i], regimes_params[i].nu)
                for i in range(2)
            ]
        )
        weights = pred * np.exp(logf - logf.max())
        filt = weights / weights.sum()
        raw = filt @ move
        mu = filt @ delta
        e2 = (r - mu) ** 2
        nxt = np.empty(2)
        for i in range(2):
            c = filt * move[:, i] / raw[i]
            lagged = c @ (h_regime + (delta - c @ delta) ** 2)
            gi = regimes_params[i]
            nxt[i] = gi.alpha0 + gi.alpha1 * e2 + gi.beta * lagged
        h_regime = nxt
        pred = raw / raw.sum()
        s = s if uniforms[t] < stay[s] else 1 - s
    return returns, h, regimes


def simulate(
    model: ModelKind | str,
    params: ParamVector,
    n: int,
    burn_in: int = DEFAULT_BURN_IN,
    seed: int = 0,
    frequency: Frequency = Frequency.DAILY,
) -> SimOutput:
    """Simulate ``n`` returns of a model after discarding ``burn_in`` steps.

    Raises:
        ParameterError: If the parameters do not match the model or violate
            its constraints.
        SimulationError: If an EGARCH path overflows.

    """
    kind = ModelKind(model)
    if not isinstance(params, kind.params_class):
        expected, got = kind.params_class.__name__, type(params).__name__
        msg = f"{kind.label} needs {expected}, got {got}."
        raise ParameterError(msg)
    params.validate()
    if n < 1 or burn_in < 0:
        msg = f"Need n ≥ 1 and burn_in ≥ 0 (got n={n}, burn_in={burn_in})."
        raise ParameterError(msg)
    rng = np.random.default_rng(seed)
    total = n + burn_in
    regimes = None
    match params:
        case MrsParams():
            returns, h, regimes = _mrs(params, total, rng)
            regimes = regimes[burn_in:]
        case EgarchParams():
            returns, h = _egarch(params, total, rng, burn_in)
        case GarchParams() | GjrParams():
            returns, h = _single_regime(params, total, rng)
    series = ReturnSeries(frequency, _price_dates(frequency, n)[1:], returns[burn_in:])
    variances = h[burn_in:]
    return SimOutput(
        model=kind,
        returns=series,
        variances=variances,
        regimes=regimes,
        params=params,
        seed=seed,
        h_init=float(variances[0]),
    )


def export_prices(output: SimOutput, path: Path, header: str = "") -> Path:
    """Write the simulated prices in the layout ``load_prices`` reads."""
    return write_prices(output.prices, path, header=header)
