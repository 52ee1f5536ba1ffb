"""Single-regime GARCH, GJR-GARCH and EGARCH models with Student-t shocks."""

import math
from dataclasses import dataclass

import numpy as np
import pandas as pd

from regimecast.data.market_data import ReturnSeries
from regimecast.exceptions import FilterError
from regimecast.forecasting.multistep import (
    LOGH_MAX,
    egarch_multistep,
    garch_multistep,
    gjr_multistep,
)
from regimecast.models._kernels import egarch_log_variance, gjr_variance, t_loglik
from regimecast.models.interfaces import (
    FilterOutput,
    IVolatilityModel,
    ModelKind,
    VariancePath,
)
from regimecast.models.params import EgarchParams, GarchParams, GjrParams
from regimecast.models.tdist import StudentT, abs_moment, rng_for


def _check_path(h: np.ndarray, what: str) -> None:
    bad = ~(np.isfinite(h) & (h > 0.0))
    if bad.any():
        step = int(np.flatnonzero(bad)[0])
        msg = f"{what} variance recursion broke down at step {step} (h={h[step]})."
        raise FilterError(msg)


def _variance_path(
    h_full: np.ndarray,
    values: np.ndarray,
    delta: float,
    nu: float,
    h_init: float,
    dates: pd.DatetimeIndex | None,
    what: str,
) -> VariancePath:
    _check_path(h_full, what)
    total = t_loglik(values, delta, h_full, nu)
    if not math.isfinite(total):
        msg = f"{what} log-likelihood is not finite."
        raise FilterError(msg)
    return VariancePath(
        h=h_full[:-1],
        h_next=float(h_full[-1]),
        h_init=h_init,
        loglik=total,
        dates=dates,
    )


def _finite_loglik(
    h_full: np.ndarray, values: np.ndarray, delta: float, nu: float
) -> float:
    if not np.all(np.isfinite(h_full)) or np.any(h_full <= 0.0):
        return math.nan
    return t_loglik(values, delta, h_full, nu)


def _egarch_log_path(
    params: EgarchParams, values: np.ndarray, logh_init: float
) -> np.ndarray:
    return egarch_log_variance(
        values,
        params.delta,
        params.alpha0,
        params.alpha1,
        params.xi,
        params.beta,
        abs_moment(StudentT(params.nu)),
        logh_init,
    )


class GarchModel(IVolatilityModel):
    """h_t = α0 + α1·ε²_{t−1} + β·h_{t−1}."""

    kind = ModelKind.GARCH

    def _h(self, params: GarchParams, values: np.ndarray, h_init: float) -> np.ndarray:
        # GARCH is GJR with equal loadings on both shock signs
        return gjr_variance(
            values,
            params.delta,
            params.alpha0,
            params.alpha1,
            params.alpha1,
            params.beta,
            h_init,
        )

    def filter(
        self,
        params: GarchParams,
        values: np.ndarray,
        h_init: float,
        dates: pd.DatetimeIndex | None = None,
    ) -> VariancePath:
        params.validate()
        return _variance_path(
            self._h(params, values, h_init),
            values,
            params.delta,
            params.nu,
            h_init,
            dates,
            self.kind.label,
        )

    def loglik_value(
        self, params: GarchParams, values: np.ndarray, h_init: float
    ) -> float:
        return _finite_loglik(
            self._h(params, values, h_init), values, params.delta, params.nu
        )

    def forecast_steps(
        self,
        params: GarchParams,
        path: FilterOutput,
        origin: int,
        k: int,
        *,
        mc_paths: int = 10000,
        seed: int = 0,
    ) -> np.ndarray:
        return garch_multistep(params, float(path.predictive_variance[origin + 1]), k)


class GjrModel(IVolatilityModel):
    """GJR-GARCH: ξ loads positive shocks, α1 the non-positive ones."""

    kind = ModelKind.GJR

    def _h(self, params: GjrParams, values: np.ndarray, h_init: float) -> np.ndarray:
        return gjr_variance(
            values,
            params.delta,
            params.alpha0,
            params.alpha1,
            params.xi,
            params.beta,
            h_init,
        )

    def filter(
        self,
        params: GjrParams,
        values: np.ndarray,
        h_init: float,
        dates: pd.DatetimeIndex | None = None,
    ) -> VariancePath:
        params.validate()
        return _variance_path(
            self._h(params, values, h_init),
            values,
            params.delta,
            params.nu,
            h_init,
            dates,
            self.kind.label,
        )

    def loglik_value(
        self, params: GjrParams, values: np.ndarray, h_init: float
    ) -> float:
        return _finite_loglik(
            self._h(params, values, h_init), values, params.delta, params.nu
        )

    def forecast_steps(
        self,
        params: GjrParams,
        path: FilterOutput,
        origin: int,
        k: int,
        *,
        mc_paths: int = 10000,
        seed: int = 0,
    ) -> np.ndarray:
        return gjr_multistep(params, float(path.predictive_variance[origin + 1]), k)


class EgarchModel(IVolatilityModel):
    """EGARCH on ln h with centred magnitude and sign terms.

    The recursion starts from ln ``h_init``.
    """

    kind = ModelKind.EGARCH

    def _h(
        self, params: EgarchParams, values: np.ndarray, h_init: float
    ) -> np.ndarray | None:
        logh = _egarch_log_path(params, values, math.log(h_init))
        if not np.all(np.isfinite(logh)) or np.max(logh) >= LOGH_MAX:
            return None
        return np.exp(logh)

    def filter(
        self,
        params: EgarchParams,
        values: np.ndarray,
        h_init: float,
        dates: pd.DatetimeIndex | None = None,
    ) -> VariancePath:
        params.validate()
        logh = _egarch_log_path(params, values, math.log(h_init))
        overflow = ~np.isfinite(logh) | (logh >= LOGH_MAX)
        if overflow.any():
            step = int(np.flatnonzero(overflow)[0])
            msg = f"EGARCH log-variance overflows at step {step} (ln h={logh[step]})."
            raise FilterError(msg)
        return _variance_path(
            np.exp(logh),
            values,
            params.delta,
            params.nu,
            h_init,
            dates,
            self.kind.label,
        )

    def loglik_value(
        self, params: EgarchParams, values: np.ndarray, h_init: float
    ) -> float:
        h_full = self._h(params, values, h_init)
        if h_full is None:
            return math.nan
        return _finite_loglik(h_full, values, params.delta, params.nu)

    def forecast_steps(
        self,
        params: EgarchParams,
        path: FilterOutput,
        origin: int,
        k: int,
        *,
        mc_paths: int = 10000,
        seed: int = 0,
    ) -> np.ndarray:
        return egarch_multistep(
            params,
            float(path.predictive_variance[origin + 1]),
            k,
            mc_paths,
            rng_for([seed, origin]),
        )


def garch_filter(
    params: GarchParams, returns: ReturnSeries, h_init: float
) -> VariancePath:
    """Filter a series with the standard GARCH recursion."""
    return GarchModel().filter(params, returns.values, h_init, returns.dates)


def gjr_filter(params: GjrParams, returns: ReturnSeries, h_init: float) -> VariancePath:
    """Filter a series with the GJR-GARCH recursion."""
    return GjrModel().filter(params, returns.values, h_init, returns.dates)


def egarch_filter(
    params: EgarchParams, returns: ReturnSeries, logh_init: float
) -> VariancePath:
    """Filter a series with the EGARCH recursion started at ``logh_init``."""
    return EgarchModel().filter(
        params, returns.values, math.exp(logh_init), returns.dates
    )


@dataclass(frozen=True)
class MomentDiagnostics:
    """Second- and fourth-moment conditions of a GARCH(1,1) fit.

    The fourth-moment condition β² + 2α1β + 3α1² < 1 holds for Gaussian
    shocks; under Student-t shocks it is only an approximation.
    """

    second_moment: float
    fourth_moment: float

    approximate_fourth: bool = True

    @property
    def second_moment_ok(self) -> bool:
        """Return whether α1 + β < 1."""
        return self.second_moment < 1.0

    @property
    def fourth_moment_ok(self) -> bool:
        """Return whether β² + 2α1β + 3α1² < 1."""
        return self.fourth_moment < 1.0


def moment_diagnostics(params: GarchParams) -> MomentDiagnostics:
    """Evaluate the stationarity and fourth-moment conditions."""
    a, b = params.alpha1, params.beta
    return MomentDiagnostics(
        second_moment=a + b,
        fourth_moment=b * b + 2.0 * a * b + 3.0 * a * a,
    )
