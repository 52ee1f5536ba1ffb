"""Closed-form and Monte Carlo multi-step variance forecasts.

Every function returns the per-step forecasts ĥ_{t,t+τ}, τ = 1..k; the
cumulative k-step forecast is their sum.
"""

import math
from dataclasses import dataclass

import numpy as np
from numpy.random import Generator

from regimecast.exceptions import ForecastError
from regimecast.models.markov import (
    backward_weights,
    klaassen_recombine,
    transition_matrix,
)
from regimecast.models.params import EgarchParams, GarchParams, GjrParams, MrsParams
from regimecast.models.tdist import StudentT, abs_moment, draw

MIN_MC_PATHS = 1000
MAX_DISCARD_SHARE = 0.01
# exp(700) is close to the largest finite double
LOGH_MAX = 700.0


def _check_horizon(k: int) -> None:
    if k < 1:
        msg = f"Forecast horizon must be at least 1 (got {k})."
        raise ForecastError(msg)


def _affine_steps(
    alpha0: float, persistence: float, h_next: float, k: int
) -> np.ndarray:
    _check_horizon(k)
    steps = np.empty(k)
    steps[0] = h_next
    for tau in range(1, k):
        steps[tau] = alpha0 + persistence * steps[tau - 1]
    return steps


def garch_multistep(params: GarchParams, h_next: float, k: int) -> np.ndarray:
    """Iterate ĥ_{t,t+τ} = α0 + (α1+β)·ĥ_{t,t+τ−1} from ĥ_{t,t+1} = h_next."""
    return _affine_steps(params.alpha0, params.persistence, h_next, k)


def gjr_multistep(params: GjrParams, h_next: float, k: int) -> np.ndarray:
    """Iterate with persistence (α1+ξ)/2 + β, since Pr(ε > 0) = ½."""
    return _affine_steps(params.alpha0, params.persistence, h_next, k)


def egarch_multistep(
    params: EgarchParams,
    h_next: float,
    k: int,
    mc_paths: int,
    rng: Generator,
) -> np.ndarray:
    """Average h over simulated EGARCH paths started from ln h_next.

    Raises:
        ForecastError: If fewer than 1000 paths are requested or more than
            1% of the paths overflow.

    """
    _check_horizon(k)
    if mc_paths < MIN_MC_PATHS:
        msg = f"EGARCH forecasts need at least {MIN_MC_PATHS} paths (got {mc_paths})."
        raise ForecastError(msg)
    steps = np.empty(k)
    steps[0] = h_next
    if k == 1:
        return steps

    dist = StudentT(params.nu)
    centre = abs_moment(dist)
    logh = np.full(mc_paths, math.log(h_next))
    paths = np.empty((k - 1, mc_paths))
    for tau in range(1, k):
        z = draw(dist, rng, mc_paths)
        logh = (
            params.alpha0
            + params.alpha1 * (np.abs(z) - centre)
            + params.xi * z
            + params.beta * logh
        )
        paths[tau - 1] = logh

    usable = np.all(np.isfinite(paths) & (paths < LOGH_MAX), axis=0)
    discarded = mc_paths - int(usable.sum())
    if discarded > MAX_DISCARD_SHARE * mc_paths:
        msg = (
            f"EGARCH forecast discarded {discarded} of {mc_paths} paths "
            "after overflow."
        )
        raise ForecastError(msg)
    steps[1:] = np.exp(paths[:, usable]).mean(axis=1)
    return steps


@dataclass(frozen=True)
class RegimeForecast:
    """Per-step MRS forecast with its regime decomposition.

    Attributes:
        steps: ĥ_{t,t+τ} = Σ_i Pr(s_{t+τ}=i)·ĥ^(i)_{t,t+τ}, shape (k,).
        probs: Pr(s_{t+τ}=i | data to t), shape (k, 2).
        variances: ĥ^(i)_{t,t+τ}, shape (k, 2).

    """

    steps: np.ndarray
    probs: np.ndarray
    variances: np.ndarray

    @property
    def cumulative(self) -> float:
        """Return the k-step cumulative forecast."""
        return float(np.sum(self.steps))

    @property
    def regime_weights(self) -> np.ndarray:
        """Horizon-averaged regime probabilities."""
        return self.probs.mean(axis=0)

    @property
    def regime_cumulative(self) -> np.ndarray:
        """Cumulative variance per regime, Σ_τ ĥ^(i)_{t,t+τ}."""
        return self.variances.sum(axis=0)


def mrs_multistep(
    params: MrsParams,
    probs_next: np.ndarray,
    h_next: np.ndarray,
    k: int,
) -> RegimeForecast:
    """Forecast the MRS-GARCH variance k steps ahead.

    Regime probabilities are propagated through the transition matrix; each
    regime's variance follows α0 + (α1+β)·E[ĥ_{τ−1} | s_τ = i] with the
    expectation recombined across regimes at every step.

    Args:
        params: Model parameters.
        probs_next: Pr(s_{t+1}=i | data to t).
        h_next: Regime variances h^(i)_{t+1}.
        k: Number of steps.

    Returns:
        The per-step forecast with its regime decomposition.

    """
    _check_horizon(k)
    trans = transition_matrix(params.p, params.q)
    stacked = params.stacked()
    delta = stacked["delta"]
    alpha0 = stacked["alpha0"]
    persistence = stacked["alpha1"] + stacked["beta"]

    probs = np.empty((k, 2))
    variances = np.empty((k, 2))
    probs[0] = probs_next
    variances[0] = h_next
    for tau in range(1, k):
        prev = probs[tau - 1]
        raw = prev @ trans
        probs[tau] = raw / raw.sum()
        weights = backward_weights(trans, prev, raw)
        base = klaassen_recombine(weights, delta, variances[tau - 1])
        variances[tau] = alpha0 + persistence * base
    steps = np.sum(probs * variances, axis=1)
    return RegimeForecast(steps=steps, probs=probs, variances=variances)
