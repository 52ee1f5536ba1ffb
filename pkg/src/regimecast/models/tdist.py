"""Standardized (unit-variance) Student-t distribution.

The density is parameterized so that a variate scaled by √h has variance h:

    f(z) = Γ((ν+1)/2) / [Γ(ν/2)·√(π(ν−2))] · (1 + z²/(ν−2))^{−(ν+1)/2}

CDF and quantile go through scipy's incomplete-beta based Student-t routines
after rescaling by √(ν/(ν−2)). Sampling uses numpy's PCG64 generator.
"""

import math
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np
from numpy.random import PCG64, Generator
from numpy.typing import ArrayLike
from scipy.optimize import brentq
from scipy.special import gammaln, stdtr, stdtrit

from regimecast.exceptions import ParameterError

NU_MAX = 500.0
NORMAL_LIMIT_NU = 100.0


@dataclass(frozen=True)
class StudentT:
    """Unit-variance Student-t with ``nu`` degrees of freedom."""

    nu: float

    def __post_init__(self) -> None:
        if not self.nu > 2.0:
            msg = f"Student-t degrees of freedom must exceed 2 (got {self.nu})."
            raise ParameterError(msg)

    @property
    def scale(self) -> float:
        """Factor mapping a textbook t variate to the unit-variance one."""
        return math.sqrt((self.nu - 2.0) / self.nu)


def rng_for(seed: int | Sequence[int]) -> Generator:
    """Return the generator every random draw in the package goes through."""
    return Generator(PCG64(seed))


def log_normalizer(nu: float) -> float:
    """Return ln Γ((ν+1)/2) − ln Γ(ν/2) − ½·ln(π(ν−2))."""
    log_gamma_ratio = gammaln(0.5 * (nu + 1.0)) - gammaln(0.5 * nu)
    return float(log_gamma_ratio - 0.5 * math.log(math.pi * (nu - 2.0)))


def log_density(d: StudentT, z: ArrayLike) -> np.ndarray | float:
    """Return ln f(z)."""
    z = np.asarray(z, dtype=np.float64)
    value = log_normalizer(d.nu) - 0.5 * (d.nu + 1.0) * np.log1p(z * z / (d.nu - 2.0))
    return float(value) if value.ndim == 0 else value


def cdf(d: StudentT, z: ArrayLike) -> np.ndarray | float:
    """Return Pr(Z ≤ z)."""
    value = stdtr(d.nu, np.asarray(z, dtype=np.float64) / d.scale)
    return float(value) if np.ndim(value) == 0 else value


def quantile(d: StudentT, p: float) -> float:
    """Return the p-quantile of the unit-variance t.

    Raises:
        ParameterError: If p is not inside (0, 1).

    """
    if not 0.0 < p < 1.0:
        msg = f"Quantile probability must lie in (0, 1) (got {p})."
        raise ParameterError(msg)
    if p == 0.5:
        return 0.0
    return float(stdtrit(d.nu, p)) * d.scale


def sample(d: StudentT, rng_seed: int | Sequence[int], n: int) -> np.ndarray:
    """Draw ``n`` i.i.d. unit-variance t variates.

    Uses the ratio N / √(χ²_ν/ν) rescaled by √((ν−2)/ν); identical seeds give
    identical sequences.
    """
    if n < 1:
        msg = f"Sample size must be at least 1 (got {n})."
        raise ParameterError(msg)
    return draw(d, rng_for(rng_seed), n)


def draw(d: StudentT, rng: Generator, size: int | tuple[int, ...]) -> np.ndarray:
    """Draw unit-variance t variates from an existing generator."""
    normal = rng.standard_normal(size)
    chi2 = rng.chisquare(d.nu, size)
    return normal / np.sqrt(chi2 / d.nu) * d.scale


def abs_moment(d: StudentT) -> float:
    """Return E|Z| = 2√(ν−2)·Γ((ν+1)/2) / [√π·(ν−1)·Γ(ν/2)]."""
    log_ratio = gammaln(0.5 * (d.nu + 1.0)) - gammaln(0.5 * d.nu)
    numerator = 2.0 * math.sqrt(d.nu - 2.0) * math.exp(log_ratio)
    return float(numerator / (math.sqrt(math.pi) * (d.nu - 1.0)))


def mixture_quantile(
    weights: ArrayLike,
    means: ArrayLike,
    variances: ArrayLike,
    nus: ArrayLike,
    p: float,
) -> float:
    """Return the p-quantile of a finite mixture of scaled unit-variance t laws.

    Component i is ``means[i] + √variances[i]·Z_i`` with ``Z_i`` unit-variance
    t with ``nus[i]`` degrees of freedom. Solved by bracketing root search on
    the weighted CDF.
    """
    if not 0.0 < p < 1.0:
        msg = f"Quantile probability must lie in (0, 1) (got {p})."
        raise ParameterError(msg)
    w = np.asarray(weights, dtype=np.float64)
    mu = np.asarray(means, dtype=np.float64)
    sd = np.sqrt(np.asarray(variances, dtype=np.float64))
    dists = [StudentT(float(nu)) for nu in np.asarray(nus, dtype=np.float64)]
    w = w / w.sum()

    def excess(x: float) -> float:
        total = sum(
            wi * cdf(di, (x - mi) / si)
            for wi, di, mi, si in zip(w, dists, mu, sd, strict=True)
        )
        return float(total) - p

    component = [
        mi + si * quantile(di, p) for di, mi, si in zip(dists, mu, sd, strict=True)
    ]
    lower, upper = min(component), max(component)
    if lower == upper:
        return float(lower)
    return float(brentq(excess, lower, upper, xtol=1e-12, rtol=1e-14, maxiter=200))
