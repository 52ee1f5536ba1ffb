"""Maximum likelihood estimation with multi-start Nelder-Mead.

The optimizer minimizes the mean negative log-likelihood over the
unconstrained coordinates of ``transforms``. Standard errors come from a
central-difference Hessian of the total log-likelihood in the original
coordinates at the optimum.
"""

import logging
import math
import time
from collections.abc import Callable
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.optimize import minimize

from regimecast.config.presets import EstimatorOptions
from regimecast.data.market_data import MIN_IN_SAMPLE, ReturnSeries
from regimecast.estimation.transforms import (
    from_unconstrained,
    near_boundary,
    to_unconstrained,
)
from regimecast.exceptions import (
    DataError,
    EstimationError,
    NumericalError,
    ParameterError,
)
from regimecast.models.factories import ModelFactory
from regimecast.models.garch import MomentDiagnostics, moment_diagnostics
from regimecast.models.interfaces import FilterOutput, ModelKind, RegimeProbPath
from regimecast.models.params import (
    EgarchParams,
    GarchParams,
    GjrParams,
    MrsParams,
    ParamVector,
)
from regimecast.models.tdist import NORMAL_LIMIT_NU, rng_for
from regimecast.utils.logging import ModelLoggerAdapter, TimingLoggerAdapter

logger = logging.getLogger(__name__)

# objective value for parameter points where the filter breaks down
PENALTY = 1e10
START_NOISE = 0.5
START_NOISE_CLIP = 1.5
GRADIENT_STEP = 1e-5


@dataclass(frozen=True)
class RestartSummary:
    """Outcome of one optimizer start."""

    index: int
    start_loglik: float
    loglik: float
    evaluations: int
    success: bool


@dataclass(frozen=True)
class FitResult:
    """Estimated model with inference and the in-sample filter output.

    Attributes:
        model: Which model was fitted.
        params: Estimates (MRS regimes ordered so regime 2 is high-variance).
        std_errors: Standard error per parameter, None where unavailable.
        t_values: Estimate / standard error per parameter.
        loglik: Maximized log-likelihood.
        aic: (2k − 2ℓ) / n.
        converged: Optimizer success plus a small gradient at the optimum.
        n_obs: Number of observations used.
        h_init: Initial variance of the filter.
        path: In-sample filter output at the estimates.
        trace: One summary per optimizer start, in start order.
        flags: Report flags such as "normal-limit" and "boundary".
        diagnostics: Moment conditions (GARCH fits only).
        gradient: Mean log-likelihood gradient in unconstrained coordinates.

    """

    model: ModelKind
    params: ParamVector
    std_errors: dict[str, float | None]
    t_values: dict[str, float | None]
    loglik: float
    aic: float
    converged: bool
    n_obs: int
    h_init: float
    path: FilterOutput
    trace: tuple[RestartSummary, ...]
    flags: tuple[str, ...] = ()
    diagnostics: MomentDiagnostics | None = None
    gradient: np.ndarray = field(default_factory=lambda: np.empty(0), repr=False)

    @property
    def k(self) -> int:
        """Number of free parameters."""
        return len(self.params.names())

    @property
    def regime_path(self) -> RegimeProbPath | None:
        """Hamilton filter output for MRS fits, otherwise None."""
        return self.path if isinstance(self.path, RegimeProbPath) else None


def initial_variance(values: np.ndarray) -> float:
    """Return the variance of the demeaned returns used to start filters.

    Raises:
        DataError: If the returns have zero variance.

    """
    values = np.asarray(values, dtype=np.float64)
    variance = float(np.mean((values - values.mean()) ** 2))
    if not variance > 0.0:
        msg = "Returns have zero variance; a volatility model cannot be fitted."
        raise DataError(msg)
    return variance


def aic(loglik: float, k: int, n: int = 1) -> float:
    """Return the Akaike criterion (2k − 2ℓ) per observation."""
    if k < 1 or n < 1:
        msg = f"AIC needs k ≥ 1 and n ≥ 1 (got k={k}, n={n})."
        raise EstimationError(msg)
    return (2.0 * k - 2.0 * loglik) / n


def _heuristic_start(kind: ModelKind, mean: float, variance: float) -> ParamVector:
    match kind:
        case ModelKind.GARCH:
            return GarchParams(mean, 0.05 * variance, 0.05, 0.90, 8.0)
        case ModelKind.GJR:
            return GjrParams(mean, 0.05 * variance, 0.05, 0.05, 0.90, 8.0)
        case ModelKind.EGARCH:
            return EgarchParams(mean, 0.1 * math.log(variance), 0.05, 0.0, 0.90, 8.0)
        case ModelKind.MRS:
            return MrsParams.from_regimes(
                GarchParams(mean, 0.5 * 0.05 * variance, 0.05, 0.90, 8.0),
                GarchParams(mean, 2.0 * 0.05 * variance, 0.05, 0.90, 8.0),
                p=0.95,
                q=0.95,
            )


def default_starts(
    model: ModelKind | str,
    returns: ReturnSeries | np.ndarray,
    seed: int,
    restarts: int = 5,
) -> list[ParamVector]:
    """Return the optimizer starts for a model.

    The first start is a variance-targeted heuristic; the others perturb it
    in unconstrained coordinates with seeded, clipped normal noise. MRS
    starts keep regime 2's α0 above regime 1's.
    """
    kind = ModelKind(model)
    values = returns.values if isinstance(returns, ReturnSeries) else returns
    heuristic = _heuristic_start(kind, float(np.mean(values)), initial_variance(values))
    rng = rng_for(seed)
    centre = to_unconstrained(heuristic)
    starts = [heuristic]
    for _ in range(restarts - 1):
        noise = np.clip(
            rng.normal(0.0, START_NOISE, len(centre)),
            -START_NOISE_CLIP,
            START_NOISE_CLIP,
        )
        start = from_unconstrained(kind, centre + noise)
        if isinstance(start, MrsParams) and start.alpha0_2 <= start.alpha0_1:
            start = replace(start, alpha0_1=start.alpha0_2, alpha0_2=start.alpha0_1)
        starts.append(start)
    return starts


def numerical_hessian(
    objective: Callable[[np.ndarray], float],
    at: np.ndarray,
    steps: np.ndarray | float = 1e-4,
) -> np.ndarray:
    """Central-difference Hessian of ``objective`` at ``at``.

    Args:
        objective: Function of a parameter vector.
        at: Evaluation point.
        steps: Relative step; the absolute step of coordinate i is
            ``steps_i·max(|at_i|, 1e-2)``. An array gives absolute steps.

    Returns:
        The symmetric Hessian matrix.

    """
    x = np.asarray(at, dtype=np.float64)
    n = len(x)
    if np.ndim(steps) == 0:
        h = float(steps) * np.maximum(np.abs(x), 1e-2)
    else:
        h = np.asarray(steps, dtype=np.float64)
    f0 = objective(x)
    eye = np.eye(n)
    hessian = np.empty((n, n))
    for i in range(n):
        ei = eye[i] * h[i]
        hessian[i, i] = (objective(x + ei) - 2.0 * f0 + objective(x - ei)) / h[i] ** 2
        for j in range(i + 1, n):
            ej = eye[j] * h[j]
            value = (
                objective(x + ei + ej)
                - objective(x + ei - ej)
                - objective(x - ei + ej)
                + objective(x - ei - ej)
            ) / (4.0 * h[i] * h[j])
            hessian[i, j] = value
            hessian[j, i] = value
    return hessian


def standard_errors(hessian: np.ndarray) -> np.ndarray | None:
    """Return √diag((−H)⁻¹), or None when H is singular or not concave."""
    if not np.all(np.isfinite(hessian)):
        return None
    try:
        covariance = np.linalg.inv(-hessian)
    except np.linalg.LinAlgError:
        return None
    variances = np.diag(covariance)
    if not np.all(np.isfinite(variances)) or np.any(variances <= 0.0):
        return None
    return np.sqrt(variances)


def _gradient(objective: Callable[[np.ndarray], float], u: np.ndarray) -> np.ndarray:
    grad = np.empty(len(u))
    for i in range(len(u)):
        step = GRADIENT_STEP * max(abs(u[i]), 1.0)
        e = np.zeros(len(u))
        e[i] = step
        grad[i] = (objective(u + e) - objective(u - e)) / (2.0 * step)
    return grad


def _hessian_steps(params: ParamVector, relative: float) -> np.ndarray:
    x = params.to_array()
    steps = relative * np.maximum(np.abs(x), 1e-2)
    if isinstance(params, MrsParams):
        # keep transition probabilities inside (0, 1)
        for name in ("p", "q"):
            i = params.names().index(name)
            steps[i] = min(steps[i], 0.5 * min(x[i], 1.0 - x[i]))
    return steps


def _flags(params: ParamVector) -> tuple[str, ...]:
    flags = []
    values = params.as_dict()
    if any(v > NORMAL_LIMIT_NU for name, v in values.items() if name.startswith("nu")):
        flags.append("normal-limit")
    if near_boundary(params):
        flags.append("boundary")
    return tuple(flags)


def negative_loglik(
    model: ModelKind | str, u: np.ndarray, values: np.ndarray, h_init: float
) -> float:
    """Mean negative log-likelihood at an unconstrained point.

    Points whose parameters are rejected or whose filter breaks down score
    ``PENALTY``.
    """
    kind = ModelKind(model)
    try:
        params = from_unconstrained(kind, u)
        value = ModelFactory.get_model(kind).loglik_value(params, values, h_init)
    except (ParameterError, NumericalError):
        return PENALTY
    return -value / len(values) if math.isfinite(value) else PENALTY


def fit(
    model: ModelKind | str,
    returns: ReturnSeries,
    options: EstimatorOptions | None = None,
    starts: list[ParamVector] | None = None,
) -> FitResult:
    """Estimate a model by maximum likelihood.

    Args:
        model: Which model to fit.
        returns: Estimation sample.
        options: Restarts, seed and tolerances.
        starts: Explicit optimizer starts; ``default_starts`` when omitted.

    Returns:
        The best fit over all starts (ties go to the earlier start).

    Raises:
        DataError: If the sample is too short or has zero variance.
        EstimationError: If no start yields a finite likelihood.

    """
    options = options or EstimatorOptions()
    kind = ModelKind(model)
    values = returns.values
    n = len(values)
    model_logger = ModelLoggerAdapter(
        logger,
        model=kind.label,
        frequency=returns.frequency,
        task_descriptor="MODEL_FIT",
    )
    if n < MIN_IN_SAMPLE:
        msg = f"{kind.label} needs at least {MIN_IN_SAMPLE} observations (got {n})."
        raise DataError(msg)

    fit_start = time.perf_counter()
    h_init = initial_variance(values)
    impl = ModelFactory.get_model(kind)

    def objective(u: np.ndarray) -> float:
        return negative_loglik(kind, u, values, h_init)

    if starts is None:
        starts = default_starts(kind, values, options.seed, options.restarts)
    model_logger.debug(f"Starting estimation from {len(starts)} start(s)")

    trace: list[RestartSummary] = []
    best_u: np.ndarray | None = None
    best_value = PENALTY
    best_success = False
    for index, start in enumerate(starts):
        u0 = to_unconstrained(start)
        f0 = objective(u0)
        if f0 >= PENALTY:
            model_logger.warning(f"Skipping start {index}: likelihood not finite")
            trace.append(RestartSummary(index, math.nan, math.nan, 1, False))
            continue
        result = minimize(
            objective,
            u0,
            method="Nelder-Mead",
            options={
                "fatol": options.fatol,
                "xatol": options.xatol,
                "maxfev": options.max_evals,
                "maxiter": options.max_evals,
                "adaptive": True,
            },
        )
        value = float(result.fun)
        trace.append(
            RestartSummary(
                index=index,
                start_loglik=-f0 * n,
                loglik=-value * n if value < PENALTY else math.nan,
                evaluations=int(result.nfev),
                success=bool(result.success),
            )
        )
        if value < best_value:
            best_u = np.asarray(result.x)
            best_value, best_success = value, bool(result.success)

    if best_u is None:
        msg = f"{kind.label}: no optimizer start produced a finite likelihood."
        model_logger.error(f"Estimation failed: {msg}")
        raise EstimationError(msg)

    gradient = _gradient(objective, best_u)
    converged = best_success and bool(np.all(np.abs(gradient) < options.gradient_tol))

    params = from_unconstrained(kind, best_u)
    if isinstance(params, MrsParams):
        params = params.identified()
    path = impl.filter(params, values, h_init, returns.dates)

    params_class = kind.params_class
    hessian = numerical_hessian(
        lambda x: impl.loglik_value(params_class.from_array(x), values, h_init),
        params.to_array(),
        _hessian_steps(params, options.hessian_step),
    )
    se = standard_errors(hessian)
    names = params.names()
    estimates = params.to_array()
    std_errors = {
        name: None if se is None else float(se[i]) for i, name in enumerate(names)
    }
    t_values = {
        name: None if se is None else float(estimates[i] / se[i])
        for i, name in enumerate(names)
    }
    if se is None:
        model_logger.warning("Hessian is singular or not concave; t-values absent")

    result = FitResult(
        model=kind,
        params=params,
        std_errors=std_errors,
        t_values=t_values,
        loglik=path.loglik,
        aic=aic(path.loglik, len(names), n),
        converged=converged,
        n_obs=n,
        h_init=h_init,
        path=path,
        trace=tuple(trace),
        flags=_flags(params),
        diagnostics=(
            moment_diagnostics(params) if isinstance(params, GarchParams) else None
        ),
        gradient=gradient,
    )
    elapsed = time.perf_counter() - fit_start
    timing_logger = TimingLoggerAdapter(
        logger,
        operation_type="model_fit",
        model=kind.label,
        frequency=str(returns.frequency),
        restarts=len(starts),
    )
    timing_logger.info(
        f"Loglik: {result.loglik:.4f}, AIC: {result.aic:.4f}, "
        f"Converged: {result.converged}, Time: {elapsed:.1f}s"
    )
    return result


def refit(
    previous: FitResult,
    returns: ReturnSeries,
    options: EstimatorOptions | None = None,
) -> FitResult:
    """Re-estimate from the previous estimates with a single start."""
    options = (options or EstimatorOptions()).model_copy(update={"restarts": 1})
    return fit(previous.model, returns, options, starts=[previous.params])
