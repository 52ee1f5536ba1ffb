"""Two-state Markov chain helpers shared by the MRS filter and forecasts."""

import numpy as np
from numpy.typing import ArrayLike

from regimecast.exceptions import FilterError, ParameterError
from regimecast.models._kernels import recombine


def _check_prob(name: str, value: float) -> None:
    if not 0.0 < value < 1.0:
        msg = f"Transition probability {name} must lie in (0, 1) (got {value})."
        raise ParameterError(msg)


def transition_matrix(p: float, q: float) -> np.ndarray:
    """Return [[p, 1−p], [1−q, q]]; entry (i, j) is Pr(s_t=j | s_{t−1}=i)."""
    _check_prob("p", p)
    _check_prob("q", q)
    return np.array([[p, 1.0 - p], [1.0 - q, q]])


def ergodic_probs(p: float, q: float) -> np.ndarray:
    """Return the stationary distribution (π1, π2) of the chain."""
    _check_prob("p", p)
    _check_prob("q", q)
    # p, q < 1 keeps the chain irreducible, so the denominator is positive
    pi1 = (1.0 - q) / (2.0 - p - q)
    return np.array([pi1, 1.0 - pi1])


def backward_weights(
    transition: np.ndarray, prior: np.ndarray, target: np.ndarray | None = None
) -> np.ndarray:
    """Return p_{ji} = Pr(s_{t−1}=j | s_t=i) as a (2, 2) matrix indexed [j, i].

    Args:
        transition: Transition matrix.
        prior: Pr(s_{t−1}=j | information) for j = 1, 2.
        target: Pr(s_t=i | information); computed from ``prior`` when omitted.

    Raises:
        FilterError: If a target regime has zero predicted probability.

    """
    joint = prior[:, None] * transition
    if target is None:
        target = joint.sum(axis=0)
    if np.any(target <= 0.0):
        msg = f"Regime probability {target.tolist()} leaves a regime unreachable."
        raise FilterError(msg)
    return joint / target[None, :]


def klaassen_recombine(
    cond_probs: ArrayLike, means: ArrayLike, variances: ArrayLike
) -> np.ndarray | float:
    """Collapse regime variances into E[h_{t−1} | s_t = i].

    Computes Σ_j p_ji·(μ_j² + h_j) − (Σ_j p_ji·μ_j)².

    Args:
        cond_probs: p_{ji} for one target regime, shape (2,), or for both,
            shape (2, 2) indexed [j, i]; each column sums to 1.
        means: Regime means (μ1, μ2).
        variances: Regime variances (h1, h2), positive.

    Returns:
        A float for a single target, an array of two values otherwise.

    """
    probs = np.asarray(cond_probs, dtype=np.float64)
    mu = np.asarray(means, dtype=np.float64)
    h = np.asarray(variances, dtype=np.float64)
    if np.any(h <= 0.0):
        msg = f"Regime variances must be positive (got {h.tolist()})."
        raise ParameterError(msg)
    if np.any(np.abs(probs.sum(axis=0) - 1.0) > 1e-9) or np.any(probs < 0.0):
        msg = f"Conditional regime probabilities {probs.tolist()} do not sum to 1."
        raise ParameterError(msg)
    if probs.ndim == 1:
        return recombine(float(probs[0]), mu[0], mu[1], h[0], h[1])
    return np.array(
        [recombine(float(c1), mu[0], mu[1], h[0], h[1]) for c1 in probs[0]]
    )
