import math

import numpy as np
import pytest

from regimecast.exceptions import FilterError, ForecastError, ParameterError
from regimecast.forecasting.multistep import (
    egarch_multistep,
    garch_multistep,
    gjr_multistep,
)
from regimecast.models.factories import ModelFactory, loglik
from regimecast.models.garch import (
    EgarchModel,
    GarchModel,
    GjrModel,
    egarch_filter,
    garch_filter,
    gjr_filter,
    moment_diagnostics,
)
from regimecast.models.interfaces import ModelKind
from regimecast.models.params import EgarchParams, GarchParams, GjrParams
from regimecast.models.tdist import StudentT, abs_moment, log_density, rng_for


def _reference_garch(params: GarchParams, values: np.ndarray, h_init: float):
    h = [h_init]
    total = 0.0
    for r in values:
        e = r - params.delta
        z = e / math.sqrt(h[-1])
        total += log_density(StudentT(params.nu), z) - 0.5 * math.log(h[-1])
        h.append(params.alpha0 + params.alpha1 * e * e + params.beta * h[-1])
    return np.array(h), total


def test_garch_filter_matches_plain_recursion(
    garch_params, random_values, returns_factory
):
    returns = returns_factory(random_values)

    path = garch_filter(garch_params, returns, h_init=1.3)
    h, total = _reference_garch(garch_params, random_values, 1.3)

    np.testing.assert_allclose(path.h, h[:-1], rtol=1e-12)
    assert path.h_next == pytest.approx(h[-1], rel=1e-12)
    assert path.loglik == pytest.approx(total, rel=1e-10)
    assert path.h[0] == 1.3
    assert path.dates is returns.dates


def test_gjr_with_equal_loadings_is_garch(random_values, returns_factory) -> None:
    rng = np.random.default_rng(99)
    for _ in range(5):
        values = random_values * rng.uniform(0.5, 2.0)
        returns = returns_factory(values)
        a1 = rng.uniform(0.02, 0.15)
        b = rng.uniform(0.6, 0.95 - a1)
        garch = GarchParams(0.02, 0.05, a1, b, 6.0)
        gjr = GjrParams(0.02, 0.05, a1, a1, b, 6.0)
        h_init = float(np.var(values))

        g_path = garch_filter(garch, returns, h_init)
        j_path = gjr_filter(gjr, returns, h_init)

        np.testing.assert_allclose(j_path.h, g_path.h, rtol=1e-10)
        assert j_path.loglik == pytest.approx(g_path.loglik, abs=1e-10)
        np.testing.assert_allclose(
            gjr_multistep(gjr, j_path.h_next, 22),
            garch_multistep(garch, g_path.h_next, 22),
            rtol=1e-10,
        )


def test_gjr_loads_positive_shocks_with_xi() -> None:
    params = GjrParams(0.0, 0.1, 0.2, 0.05, 0.7, 6.0)
    model = GjrModel()

    up = model.filter(params, np.array([2.0]), 1.0)
    down = model.filter(params, np.array([-2.0]), 1.0)

    assert up.h_next == pytest.approx(0.1 + 0.05 * 4 + 0.7)
    assert down.h_next == pytest.approx(0.1 + 0.2 * 4 + 0.7)


def test_egarch_recursion_on_log_variance(egarch_params: EgarchParams) -> None:
    values = np.array([0.5, -1.5, 2.0])
    centre = abs_moment(StudentT(egarch_params.nu))
    logh = [math.log(1.2)]
    for r in values:
        z = (r - egarch_params.delta) / math.exp(0.5 * logh[-1])
        logh.append(
            egarch_params.alpha0
            + egarch_params.alpha1 * (abs(z) - centre)
            + egarch_params.xi * z
            + egarch_params.beta * logh[-1]
        )

    path = EgarchModel().filter(egarch_params, values, 1.2)

    np.testing.assert_allclose(np.log(path.predictive_variance), logh, rtol=1e-12)


def test_egarch_filter_takes_log_start(egarch_params, random_values, returns_factory):
    returns = returns_factory(random_values)
    by_log = egarch_filter(egarch_params, returns, math.log(2.0))
    by_level = EgarchModel().filter(egarch_params, returns.values, 2.0)
    assert by_log.loglik == pytest.approx(by_level.loglik, rel=1e-12)


def test_egarch_overflow_is_reported() -> None:
    params = EgarchParams(0.0, 50.0, 0.0, 0.0, 0.99, 6.0)
    values = np.zeros(30)

    with pytest.raises(FilterError, match="overflows at step"):
        EgarchModel().filter(params, values, 1.0)
    assert math.isnan(EgarchModel().loglik_value(params, values, 1.0))


def test_filter_validates_params(random_values) -> None:
    with pytest.raises(ParameterError):
        GarchModel().filter(GarchParams(0.0, 0.1, 0.3, 0.8, 6.0), random_values, 1.0)


def test_loglik_value_returns_nan_instead_of_raising(random_values) -> None:
    bad = GarchParams(0.0, -5.0, 0.0, 0.0, 6.0)
    assert math.isnan(GarchModel().loglik_value(bad, random_values, 1.0))


def test_factory_and_loglik_helper(
    garch_params, random_values, returns_factory
) -> None:
    returns = returns_factory(random_values)
    for kind in ModelKind:
        assert ModelFactory.get_model(kind).kind is kind
    with pytest.raises(ValueError):
        ModelFactory.get_model("arch")

    value, path = loglik("garch", garch_params, returns, 1.0)

    assert value == path.loglik
    assert value == pytest.approx(
        GarchModel().loglik_value(garch_params, returns.values, 1.0), rel=1e-12
    )


def test_one_step_forecast_is_filter_prediction(
    garch_params, gjr_params, egarch_params, random_values
) -> None:
    for kind, params in (
        (ModelKind.GARCH, garch_params),
        (ModelKind.GJR, gjr_params),
        (ModelKind.EGARCH, egarch_params),
    ):
        model = ModelFactory.get_model(kind)
        path = model.filter(params, random_values, 1.0)
        origin = 300

        steps = model.forecast_steps(params, path, origin, 1)

        expected = path.predictive_variance[origin + 1]
        assert steps[0] == pytest.approx(expected, abs=1e-12)
        assert steps.sum() == steps[0]


def test_garch_multistep_closed_form(garch_params: GarchParams) -> None:
    steps = garch_multistep(garch_params, 2.0, 10)
    s, a0 = garch_params.persistence, garch_params.alpha0
    expected = [a0 * (1 - s**j) / (1 - s) + s**j * 2.0 for j in range(10)]

    np.testing.assert_allclose(steps, expected, rtol=1e-12)
    # long horizons approach the unconditional variance
    assert garch_multistep(garch_params, 2.0, 2000)[-1] == pytest.approx(
        garch_params.unconditional_variance, rel=1e-6
    )


@pytest.mark.parametrize("scale", [0.2, 5.0])
def test_garch_multistep_moves_monotonically_to_the_unconditional_level(
    garch_params: GarchParams, scale: float
) -> None:
    level = garch_params.unconditional_variance

    steps = garch_multistep(garch_params, scale * level, 500)

    gaps = np.abs(steps - level)
    assert np.all(np.diff(gaps) < 0.0)
    assert np.all(np.sign(steps - level) == np.sign(scale - 1.0))
    assert steps[-1] == pytest.approx(level, rel=1e-3)


def test_multistep_rejects_bad_horizon(garch_params) -> None:
    with pytest.raises(ForecastError):
        garch_multistep(garch_params, 1.0, 0)


def test_egarch_multistep_is_seeded_and_needs_enough_paths(egarch_params) -> None:
    first = egarch_multistep(egarch_params, 1.5, 10, 2000, rng_for(4))
    again = egarch_multistep(egarch_params, 1.5, 10, 2000, rng_for(4))

    np.testing.assert_array_equal(first, again)
    assert first[0] == 1.5
    with pytest.raises(ForecastError, match="at least 1000"):
        egarch_multistep(egarch_params, 1.5, 10, 999, rng_for(4))


def test_egarch_forecasts_are_reproducible(egarch_params, random_values) -> None:
    model = EgarchModel()
    path = model.filter(egarch_params, random_values, 1.0)

    a = model.forecast_steps(egarch_params, path, 100, 5, mc_paths=1000, seed=3)
    b = model.forecast_steps(egarch_params, path, 100, 5, mc_paths=1000, seed=3)

    np.testing.assert_array_equal(a, b)


def test_moment_diagnostics() -> None:
    ok = moment_diagnostics(GarchParams(0.0, 0.05, 0.08, 0.90, 7.0))
    assert ok.second_moment == pytest.approx(0.98)
    assert ok.second_moment_ok
    # 0.81 + 0.144 + 0.0192 = 0.9732
    assert ok.fourth_moment == pytest.approx(0.9732)
    assert ok.fourth_moment_ok

    heavy = moment_diagnostics(GarchParams(0.0, 0.05, 0.2, 0.78, 7.0))
    assert heavy.second_moment_ok
    assert not heavy.fourth_moment_ok
