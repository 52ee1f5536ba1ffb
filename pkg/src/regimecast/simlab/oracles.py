"""Brute-force Monte Carlo forecast oracles.

Each oracle rolls the model recursion forward over many simulated paths
from a given state and averages the conditional variance per step. They
share no code with the closed-form forecasts they are used to check.
"""

import math
from dataclasses import dataclass

import numpy as np

from regimecast.exceptions import ParameterError, SimulationError
from regimecast.models.interfaces import ModelKind
from regimecast.models.params import (
    EgarchParams,
    GarchParams,
    GjrParams,
    MrsParams,
    ParamVector,
)
from regimecast.simlab.simulate import innovations, t_abs_mean

MIN_ORACLE_PATHS = 1000


@dataclass(frozen=True)
class OracleForecast:
    """Monte Carlo estimate of the per-step variance forecast.

    Attributes:
        steps: Mean variance per step τ = 1..k.
        step_errors: Monte Carlo standard error per step.
        cumulative: Mean cumulative variance over the k steps.
        cumulative_error: Monte Carlo standard error of ``cumulative``.

    """

    steps: np.ndarray
    step_errors: np.ndarray
    cumulative: float
    cumulative_error: float


def _summarize(per_path: np.ndarray) -> OracleForecast:
    # per_path has shape (k, paths)
    paths = per_path.shape[1]
    totals = per_path.sum(axis=0)
    return OracleForecast(
        steps=per_path.mean(axis=1),
        step_errors=per_path.std(axis=1, ddof=1) / math.sqrt(paths),
        cumulative=float(totals.mean()),
        cumulative_error=float(totals.std(ddof=1) / math.sqrt(paths)),
    )


def _single_regime_paths(
    params: GarchParams | GjrParams,
    h_next: float,
    k: int,
    paths: int,
    rng: np.random.Generator,
) -> np.ndarray:
    pos = params.xi if isinstance(params, GjrParams) else params.alpha1
    neg = params.alpha1
    out = np.empty((k, paths))
    h = np.full(paths, float(h_next))
    for tau in range(k):
        out[tau] = h
        e = np.sqrt(h) * innovations(params.nu, rng, paths)
        h = params.alpha0 + np.where(e > 0.0, pos, neg) * e * e + params.beta * h
    return out


def _egarch_paths(
    params: EgarchParams, h_next: float, k: int, paths: int, rng: np.random.Generator
) -> np.ndarray:
    centre = t_abs_mean(params.nu)
    out = np.empty((k, paths))
    logh = np.full(paths, math.log(h_next))
    for tau in range(k):
        if np.any(logh >= 700.0):
            msg = f"EGARCH oracle path overflowed at step {tau + 1}."
            raise SimulationError(msg)
        out[tau] = np.exp(logh)
        z = innovations(params.nu, rng, paths)
        logh = (
            params.alpha0
            + params.alpha1 * (np.abs(z) - centre)
            + params.xi * z
            + params.beta * logh
        )
    return out


def _mrs_paths(
    params: MrsParams,
    probs_next: np.ndarray,
    h_next: np.ndarray,
    k: int,
    paths: int,
    rng: np.random.Generator,
) -> np.ndarray:
    """Simulate regime paths; each step records E[h | path so far]."""
    g = (params.regime(1), params.regime(2))
    delta = np.array([g[0].delta, g[1].delta])
    move = np.array([[params.p, 1.0 - params.p], [1.0 - params.q, params.q]])
    probs_next = np.asarray(probs_next, dtype=np.float64)
    h_next = np.asarray(h_next, dtype=np.float64)
    marginal = [probs_next]
    for _ in range(1, k):
        marginal.append(marginal[-1] @ move)

    out = np.empty((k, paths))
    out[0] = probs_next @ h_next
    s = (rng.random(paths) >= probs_next[0]).astype(np.int64)
    h = h_next[s]
    columns = np.arange(paths)
    for tau in range(1, k):
        shocks = np.where(
            s == 0,
            innovations(g[0].nu, rng, paths),
            innovations(g[1].nu, rng, paths),
        )
        r = delta[s] + np.sqrt(h) * shocks
        candidates = np.empty((2, paths))
        for i in range(2):
            # Pr(s_τ = regime 1 | s_{τ+1} = i)
            c1 = move[0, i] * marginal[tau - 1][0] / marginal[tau][i]
            m = c1 * delta[0] + (1.0 - c1) * delta[1]
            candidates[i] = (
                g[i].alpha0
                + g[i].alpha1 * (r - m) ** 2
                + g[i].beta * (h + (delta[s] - m) ** 2)
            )
        rows = move[s]
        out[tau] = np.sum(rows * candidates.T, axis=1)
        s = (rng.random(paths) < rows[:, 1]).astype(np.int64)
        h = candidates[s, columns]
    return out


def mc_forecast_oracle(
    model: ModelKind | str,
    params: ParamVector,
    state: float | tuple[np.ndarray, np.ndarray],
    k: int,
    paths: int = 1_000_000,
    seed: int = 0,
) -> OracleForecast:
    """Estimate the per-step variance forecast by brute-force simulation.

    Args:
        model: Model to simulate.
        params: Model parameters.
        state: One-step variance h_{t+1} for single-regime models; for MRS
            the pair (Pr(s_{t+1}=i), h^(i)_{t+1}).
        k: Number of steps.
        paths: Number of simulated paths.
        seed: Seed of the draws.

    Raises:
        ParameterError: If fewer than 1000 paths are requested or the state
            does not fit the model.

    """
    kind = ModelKind(model)
    if not isinstance(params, kind.params_class):
        msg = f"{kind.label} oracle got {type(params).__name__}."
        raise ParameterError(msg)
    if paths < MIN_ORACLE_PATHS:
        msg = f"Oracles need at least {MIN_ORACLE_PATHS} paths (got {paths})."
        raise ParameterError(msg)
    if k < 1:
        msg = f"Oracle horizon must be at least 1 (got {k})."
        raise ParameterError(msg)
    rng = np.random.default_rng(seed)
    match params:
        case MrsParams():
            if not isinstance(state, tuple):
                msg = "MRS oracles need (regime probabilities, regime variances)."
                raise ParameterError(msg)
            per_path = _mrs_paths(params, state[0], state[1], k, paths, rng)
        case EgarchParams():
            per_path = _egarch_paths(params, float(state), k, paths, rng)
        case GarchParams() | GjrParams():
            per_path = _single_regime_paths(params, float(state), k, paths, rng)
    return _summarize(per_path)
