"""JIT-compiled variance recursions and Student-t log-likelihoods.

Every recursion returns T+1 values: entry t is the variance of observation t
given data up to t−1, and the last entry is the one-step prediction beyond
the sample. Kernels release the GIL so model fits can run in threads.
"""

import math

import numpy as np
from numba import njit


@njit(cache=True, nogil=True)
def t_log_constant(nu: float) -> float:
    """Log normalizing constant of the unit-variance Student-t density."""
    return (
        math.lgamma(0.5 * (nu + 1.0))
        - math.lgamma(0.5 * nu)
        - 0.5 * math.log(math.pi * (nu - 2.0))
    )


@njit(cache=True, nogil=True)
def gjr_variance(
    values: np.ndarray,
    delta: float,
    alpha0: float,
    alpha1: float,
    xi: float,
    beta: float,
    h_init: float,
) -> np.ndarray:
    """GJR recursion; with ``xi == alpha1`` it is the plain GARCH recursion."""
    n = values.shape[0]
    h = np.empty(n + 1)
    h[0] = h_init
    for t in range(n):
        e = values[t] - delta
        e2 = e * e
        if e > 0.0:
            h[t + 1] = alpha0 + xi * e2 + beta * h[t]
        else:
            h[t + 1] = alpha0 + alpha1 * e2 + beta * h[t]
    return h


@njit(cache=True, nogil=True)
def egarch_log_variance(
    values: np.ndarray,
    delta: float,
    alpha0: float,
    alpha1: float,
    xi: float,
    beta: float,
    abs_mean: float,
    logh_init: float,
) -> np.ndarray:
    """Nelson's EGARCH recursion on ln h with standardized residuals."""
    n = values.shape[0]
    logh = np.empty(n + 1)
    logh[0] = logh_init
    for t in range(n):
        z = (values[t] - delta) * math.exp(-0.5 * logh[t])
        logh[t + 1] = alpha0 + alpha1 * (abs(z) - abs_mean) + xi * z + beta * logh[t]
    return logh


@njit(cache=True, nogil=True)
def t_loglik(values: np.ndarray, delta: float, h: np.ndarray, nu: float) -> float:
    """Σ_t ln f(ε_t/√h_t) − ½ ln h_t over the first len(values) variances."""
    n = values.shape[0]
    const = t_log_constant(nu)
    scale = 0.5 * (nu + 1.0)
    total = 0.0
    for t in range(n):
        e = values[t] - delta
        total += const - scale * math.log1p(e * e / ((nu - 2.0) * h[t]))
        total -= 0.5 * math.log(h[t])
    return total


@njit(cache=True, nogil=True)
def recombine(
    c1: float, delta1: float, delta2: float, h1: float, h2: float
) -> float:
    """Mixture variance with weight ``c1`` on regime 1 and ``1 − c1`` on regime 2.

    Equals Σ_j c_j(δ_j² + h_j) − (Σ_j c_j δ_j)² written so that identical
    components return their variance exactly.
    """
    spread = delta1 - delta2
    return h2 + c1 * (h1 - h2) + c1 * (1.0 - c1) * spread * spread


@njit(cache=True, nogil=True)
def mrs_filter(
    values: np.ndarray,
    delta: np.ndarray,
    alpha0: np.ndarray,
    alpha1: np.ndarray,
    beta: np.ndarray,
    nu: np.ndarray,
    p: float,
    q: float,
    h_init: float,
    prob_init: np.ndarray,
) -> tuple[float, np.ndarray, np.ndarray, np.ndarray]:
    """Hamilton filter with Klaassen recombination for two GARCH regimes.

    Returns:
        Tuple of (log-likelihood, predicted probabilities (T+1, 2), filtered
        probabilities (T, 2), regime variances (T+1, 2)). The log-likelihood
        is NaN when the total density vanishes at some step.

    """
    n = values.shape[0]
    trans = np.empty((2, 2))
    trans[0, 0] = p
    trans[0, 1] = 1.0 - p
    trans[1, 0] = 1.0 - q
    trans[1, 1] = q
    const = np.empty(2)
    for i in range(2):
        const[i] = t_log_constant(nu[i])

    predicted = np.empty((n + 1, 2))
    filtered = np.empty((n, 2))
    variances = np.empty((n + 1, 2))
    predicted[0, 0] = prob_init[0]
    predicted[0, 1] = prob_init[1]
    variances[0, 0] = h_init
    variances[0, 1] = h_init

    logf = np.empty(2)
    raw = np.empty(2)
    total = 0.0
    for t in range(n):
        r = values[t]
        for i in range(2):
            e = r - delta[i]
            h = variances[t, i]
            logf[i] = (
                const[i]
                - 0.5 * (nu[i] + 1.0) * math.log1p(e * e / ((nu[i] - 2.0) * h))
                - 0.5 * math.log(h)
            )
        m = max(logf[0], logf[1])
        if not math.isfinite(m):
            return math.nan, predicted, filtered, variances
        w1 = predicted[t, 0] * math.exp(logf[0] - m)
        w2 = predicted[t, 1] * math.exp(logf[1] - m)
        s = w1 + w2
        if not s > 0.0:
            return math.nan, predicted, filtered, variances
        total += m + math.log(s)
        filtered[t, 0] = w1 / s
        filtered[t, 1] = w2 / s

        for i in range(2):
            raw[i] = filtered[t, 0] * trans[0, i] + filtered[t, 1] * trans[1, i]
        norm = raw[0] + raw[1]
        predicted[t + 1, 0] = raw[0] / norm
        predicted[t + 1, 1] = raw[1] / norm

        # mixture mean under the filtered probabilities
        mu = delta[1] + filtered[t, 0] * (delta[0] - delta[1])
        e2 = (r - mu) * (r - mu)
        for i in range(2):
            if raw[i] > 0.0:
                c1 = trans[0, i] * filtered[t, 0] / raw[i]
            else:
                c1 = filtered[t, 0]
            base = recombine(
                c1, delta[0], delta[1], variances[t, 0], variances[t, 1]
            )
            variances[t + 1, i] = alpha0[i] + alpha1[i] * e2 + beta[i] * base
    return total, predicted, filtered, variances
