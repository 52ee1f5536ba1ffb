"""Core interfaces for the volatility models.

This module defines the contract every model implements so that estimation,
forecasting and backtesting can treat the four models uniformly, together
with the filter outputs they exchange.
"""

from abc import ABC, abstractmethod
from dataclasses import dataclass
from enum import StrEnum
from typing import ClassVar

import numpy as np
import pandas as pd

from regimecast.models.params import (
    EgarchParams,
    GarchParams,
    GjrParams,
    MrsParams,
    ParamVector,
)


class ModelKind(StrEnum):
    """Supported models, in report order."""

    GARCH = "garch"
    GJR = "gjr"
    EGARCH = "egarch"
    MRS = "mrs"

    @property
    def label(self) -> str:
        """Return the display name used in reports."""
        match self:
            case ModelKind.GARCH:
                return "GARCH"
            case ModelKind.GJR:
                return "GJR-GARCH"
            case ModelKind.EGARCH:
                return "EGARCH"
            case ModelKind.MRS:
                return "MRS-GARCH"

    @property
    def params_class(self) -> type[ParamVector]:
        """Return the parameter record class of this model."""
        match self:
            case ModelKind.GARCH:
                return GarchParams
            case ModelKind.GJR:
                return GjrParams
            case ModelKind.EGARCH:
                return EgarchParams
            case ModelKind.MRS:
                return MrsParams


def _readonly(values: np.ndarray) -> np.ndarray:
    array = np.array(values, dtype=np.float64, copy=True)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class VariancePath:
    """Filtered conditional variances of a single-regime model.

    Attributes:
        h: Conditional variance of every observation (length T).
        h_next: One-step prediction for the observation after the sample.
        h_init: Variance used to start the recursion.
        loglik: Log-likelihood of the observations under the path.
        dates: Observation dates, when known.

    """

    h: np.ndarray
    h_next: float
    h_init: float
    loglik: float
    dates: pd.DatetimeIndex | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "h", _readonly(self.h))

    def __len__(self) -> int:
        return len(self.h)

    @property
    def predictive_variance(self) -> np.ndarray:
        """One-step predictive variances for t = 1..T+1."""
        return np.append(self.h, self.h_next)


@dataclass(frozen=True)
class RegimeProbPath:
    """Output of the Hamilton filter.

    Rows 0..T−1 belong to the observations; the extra last row of
    ``predicted`` and ``variances`` is the state one step beyond the sample.

    Attributes:
        predicted: Pr(s_t = i | data to t−1), shape (T+1, 2).
        filtered: Pr(s_t = i | data to t), shape (T, 2).
        variances: Regime variances h_t^(i), shape (T+1, 2).
        h_init: Variance used to start both regimes.
        loglik: Log-likelihood of the observations.
        dates: Observation dates, when known.

    """

    predicted: np.ndarray
    filtered: np.ndarray
    variances: np.ndarray
    h_init: float
    loglik: float
    dates: pd.DatetimeIndex | None = None

    def __post_init__(self) -> None:
        for name in ("predicted", "filtered", "variances"):
            object.__setattr__(self, name, _readonly(getattr(self, name)))

    def __len__(self) -> int:
        return len(self.filtered)

    @property
    def predictive_variance(self) -> np.ndarray:
        """Σ_i Pr(s_t=i | data to t−1)·h_t^(i) for t = 1..T+1."""
        return np.sum(self.predicted * self.variances, axis=1)

    @property
    def h(self) -> np.ndarray:
        """Recombined one-step predictive variance of every observation."""
        return self.predictive_variance[:-1]

    @property
    def h_next(self) -> float:
        """Recombined prediction for the observation after the sample."""
        return float(self.predictive_variance[-1])


type FilterOutput = VariancePath | RegimeProbPath


class IVolatilityModel(ABC):
    """Interface for volatility models.

    Implementations are stateless; parameters and data are passed to every
    call so one instance can serve concurrent fits.
    """

    kind: ClassVar[ModelKind]

    @property
    def params_class(self) -> type[ParamVector]:
        """Return the parameter record class of the model."""
        return self.kind.params_class

    @abstractmethod
    def filter(
        self,
        params: ParamVector,
        values: np.ndarray,
        h_init: float,
        dates: pd.DatetimeIndex | None = None,
    ) -> FilterOutput:
        """Run the variance filter over a return array.

        Args:
            params: Model parameters.
            values: Percent returns.
            h_init: Initial variance (EGARCH starts ln h at its log).
            dates: Optional dates attached to the output.

        Returns:
            The filtered path including the log-likelihood.

        Raises:
            FilterError: If the recursion produces non-finite values.

        """

    @abstractmethod
    def loglik_value(
        self, params: ParamVector, values: np.ndarray, h_init: float
    ) -> float:
        """Return the log-likelihood, or NaN where the filter breaks down.

        This is the optimizer's hot path; it never raises on numerical
        failure.
        """

    @abstractmethod
    def forecast_steps(
        self,
        params: ParamVector,
        path: FilterOutput,
        origin: int,
        k: int,
        *,
        mc_paths: int = 10000,
        seed: int = 0,
    ) -> np.ndarray:
        """Return ĥ_{t,t+τ} for τ = 1..k from the filter state at ``origin``.

        Args:
            params: Model parameters.
            path: Filter output over a series containing the origin.
            origin: Index of the last observation used.
            k: Number of steps.
            mc_paths: Monte Carlo paths for models without closed forms.
            seed: Seed for Monte Carlo forecasts.

        """
