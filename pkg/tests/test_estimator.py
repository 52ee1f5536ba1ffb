import math

import numpy as np
import pytest

from regimecast.config.presets import EstimatorOptions
from regimecast.estimation.estimator import (
    PENALTY,
    aic,
    default_starts,
    fit,
    initial_variance,
    negative_loglik,
    numerical_hessian,
    refit,
    standard_errors,
)
from regimecast.estimation.transforms import to_unconstrained
from regimecast.exceptions import DataError, EstimationError, FilterError
from regimecast.models.garch import GarchModel
from regimecast.models.interfaces import ModelKind
from regimecast.models.mrs import MrsGarchModel
from regimecast.models.params import GarchParams, MrsParams
from regimecast.pipeline.orchestrator import regime_accuracy
from regimecast.simlab.simulate import simulate

FAST = EstimatorOptions(restarts=2, seed=1)


def test_aic_per_observation() -> None:
    assert aic(-100.0, 5, 10) == pytest.approx(21.0)
    assert aic(-100.0, 5) == pytest.approx(210.0)
    with pytest.raises(EstimationError):
        aic(-100.0, 0, 10)


def test_numerical_hessian_of_a_quadratic() -> None:
    a = np.array([[4.0, 1.0, 0.0], [1.0, 3.0, 0.5], [0.0, 0.5, 2.0]])

    hessian = numerical_hessian(lambda x: -0.5 * x @ a @ x, np.array([0.3, -1.2, 2.0]))

    np.testing.assert_allclose(hessian, -a, rtol=1e-5, atol=1e-6)
    expected = np.sqrt(np.diag(np.linalg.inv(a)))
    np.testing.assert_allclose(standard_errors(hessian), expected)


def test_standard_errors_absent_when_not_concave() -> None:
    assert standard_errors(np.eye(2)) is None
    assert standard_errors(np.zeros((2, 2))) is None
    assert standard_errors(np.array([[-1.0, np.nan], [np.nan, -1.0]])) is None


def test_initial_variance_rejects_constant_returns() -> None:
    assert initial_variance(np.array([1.0, 3.0])) == 1.0
    with pytest.raises(DataError, match="zero variance"):
        initial_variance(np.full(60, 0.2))


def test_default_starts_are_seeded(random_values) -> None:
    starts = default_starts("garch", random_values, seed=4, restarts=5)
    again = default_starts("garch", random_values, seed=4, restarts=5)

    assert len(starts) == 5
    assert starts == again
    assert starts[0].alpha1 == 0.05
    assert starts[0].beta == 0.90
    for start in starts:
        start.validate()


def test_mrs_starts_order_regimes_by_alpha0(random_values) -> None:
    starts = default_starts(ModelKind.MRS, random_values, seed=0, restarts=8)

    assert all(isinstance(s, MrsParams) for s in starts)
    assert all(s.alpha0_2 >= s.alpha0_1 for s in starts)


def test_fit_needs_fifty_observations(returns_factory) -> None:
    returns = returns_factory(np.linspace(-1.0, 1.0, 49))

    with pytest.raises(DataError, match="at least 50"):
        fit("garch", returns, FAST)


def test_fit_fails_when_no_start_is_finite(monkeypatch, garch_sim) -> None:
    monkeypatch.setattr(GarchModel, "loglik_value", lambda self, *args: math.nan)

    with pytest.raises(EstimationError, match="finite likelihood"):
        fit("garch", garch_sim.returns, FAST)


def test_objective_survives_saturated_transitions(mrs_params, random_values) -> None:
    h_init = initial_variance(random_values)
    u = to_unconstrained(mrs_params)
    u[10] = 40.0

    value = negative_loglik("mrs", u, random_values, h_init)

    assert math.isfinite(value)
    assert value <= PENALTY


def test_objective_penalizes_filter_breakdown(
    monkeypatch, mrs_params, random_values
) -> None:
    def broken(self, *args):
        raise FilterError("regime probabilities are not finite")

    monkeypatch.setattr(MrsGarchModel, "loglik_value", broken)
    u = to_unconstrained(mrs_params)

    assert negative_loglik("mrs", u, random_values, 1.0) == PENALTY

def test_garch_fit_on_simulated_returns(garch_sim, garch_params) -> None:
    result = fit("garch", garch_sim.returns, FAST)

    truth = GarchModel().loglik_value(
        garch_params, garch_sim.returns.values, result.h_init
    )
    assert result.loglik >= truth - 1e-6
    assert result.n_obs == len(garch_sim.returns)
    assert result.k == 5
    assert result.aic == pytest.approx(
        (2 * 5 - 2 * result.loglik) / result.n_obs
    )
    assert len(result.trace) == 2
    assert result.trace[0].index == 0
    assert result.path.loglik == result.loglik
    assert result.diagnostics is not None
    assert result.regime_path is None
    assert abs(result.params.beta - garch_params.beta) < 0.08
    assert all(se is not None and se > 0.0 for se in result.std_errors.values())
    assert result.t_values["beta"] == pytest.approx(
        result.params.beta / result.std_errors["beta"]
    )


def test_refit_starts_from_previous_estimates(garch_sim) -> None:
    first = fit("garch", garch_sim.returns, FAST)

    again = refit(first, garch_sim.returns, FAST)

    assert len(again.trace) == 1
    assert again.loglik >= first.loglik - 1e-6


def test_mrs_fit_orders_regimes(mrs_params) -> None:
    sim = simulate("mrs", mrs_params, n=800, burn_in=200, seed=4)

    result = fit("mrs", sim.returns, EstimatorOptions(restarts=1, max_evals=3000))

    assert result.params.alpha0_2 / (1.0 - result.params.regime(2).persistence) >= (
        result.params.alpha0_1 / (1.0 - result.params.regime(1).persistence)
    )
    assert result.regime_path is not None
    assert result.diagnostics is None
    assert result.regime_path.filtered.shape == (800, 2)


@pytest.mark.slow
def test_garch_parameters_are_recovered(garch_params) -> None:
    truth = garch_params.as_dict()
    persistence_hits = 0
    within_se_hits = 0
    for seed in range(10):
        sim = simulate("garch", garch_params, n=5000, burn_in=1000, seed=100 + seed)
        result = fit("garch", sim.returns, EstimatorOptions(restarts=2, seed=seed))

        persistence_hits += abs(result.params.persistence - 0.98) <= 0.03
        se = result.std_errors
        within_se_hits += all(
            se[name] is not None and abs(estimate - truth[name]) <= 3.0 * se[name]
            for name, estimate in result.params.as_dict().items()
        )

    assert persistence_hits >= 8
    assert within_se_hits >= 8


@pytest.mark.slow
def test_fitted_mrs_classifies_regimes(mrs_params) -> None:
    ratio = (
        mrs_params.regime(2).unconditional_variance
        / mrs_params.regime(1).unconditional_variance
    )
    assert ratio >= 5.0
    accurate = 0
    for seed in range(5):
        sim = simulate("mrs", mrs_params, n=3000, burn_in=500, seed=200 + seed)
        result = fit("mrs", sim.returns, EstimatorOptions(restarts=3, seed=seed))

        accurate += regime_accuracy(sim, result) >= 0.85

    assert accurate >= 4


@pytest.mark.slow
def test_mrs_recovers_transition_probabilities(mrs_params) -> None:
    sim = simulate("mrs", mrs_params, n=5000, burn_in=1000, seed=8)

    result = fit("mrs", sim.returns, EstimatorOptions(restarts=3))

    assert result.params.p == pytest.approx(mrs_params.p, abs=0.03)
    assert result.params.q == pytest.approx(mrs_params.q, abs=0.03)
    assert isinstance(result.params.regime(2), GarchParams)
