import math

import numpy as np
import pytest

from regimecast.data.market_data import split
from regimecast.exceptions import EvaluationError, ParameterError
from regimecast.forecasting.forecaster import rolling_forecast
from regimecast.models.tdist import StudentT, mixture_quantile, quantile
from regimecast.risk.backtest import (
    backtest,
    lr_report,
    lrcc,
    lrind,
    lruc,
    transition_counts,
    var_forecast,
)
from regimecast.simlab.simulate import simulate


def test_lruc_by_hand() -> None:
    assert lruc(100, 10, 0.05) == pytest.approx(4.1308, abs=1e-4)
    assert lruc(100, 5, 0.05) == pytest.approx(0.0, abs=1e-12)
    # no violations: −2·100·ln 0.95
    assert lruc(100, 0, 0.05) == pytest.approx(-200.0 * math.log(0.95))
    with pytest.raises(EvaluationError):
        lruc(10, 11, 0.05)


def test_transition_counts() -> None:
    assert transition_counts([0, 0, 1, 1, 0, 1]) == (1, 2, 1, 1)
    with pytest.raises(EvaluationError, match="0/1"):
        transition_counts([0, 2, 1])


def test_lrind_detects_clustering() -> None:
    clustered = [0] * 40 + [1] * 5 + [0] * 50 + [1] * 5
    spread = ([0] * 9 + [1]) * 10

    assert lrind(np.zeros(50, dtype=int)) == 0.0
    assert lrind(clustered) > 3.841
    assert lrind(spread) < lrind(clustered)
    with pytest.raises(EvaluationError):
        lrind([1])


def test_lrcc_is_the_sum() -> None:
    hits = [0, 1, 0, 0, 1, 1, 0, 0, 0, 0] * 5
    n1 = sum(hits)

    assert lrcc(len(hits), n1, hits, 0.05) == pytest.approx(
        lruc(len(hits), n1, 0.05) + lrind(hits)
    )
    report = lr_report(hits, 0.05)
    assert report.lrcc == pytest.approx(report.lruc + report.lrind)
    assert report.n0 == 35
    assert report.n00 + report.n01 + report.n10 + report.n11 == len(hits) - 1
    assert report.reject_uc


def test_var_forecast() -> None:
    d = StudentT(6.0)

    value = var_forecast(0.1, 4.0, 0.05, d, k=2)

    assert value == pytest.approx(0.2 + 2.0 * quantile(d, 0.05))
    with pytest.raises(ParameterError):
        var_forecast(0.0, 1.0, 0.6, d)
    with pytest.raises(EvaluationError):
        var_forecast(0.0, 0.0, 0.05, d)


@pytest.fixture
def garch_table(garch_sim, garch_params, fit_factory):
    returns = garch_sim.returns
    sample = split(returns, returns.dates[999].date())
    fitted = fit_factory("garch", garch_params, returns.head(1000))
    return rolling_forecast("garch", fitted, returns, sample, [1, 5]), fitted


def test_backtest_flags_returns_below_threshold(garch_table, garch_params) -> None:
    table, fitted = garch_table
    panel = table.panel(1)

    series, report = backtest(panel, fitted, 0.05)

    assert len(series) == 200
    expected = panel.rows["realized_return"].to_numpy() < (
        garch_params.delta
        + quantile(StudentT(garch_params.nu), 0.05) * np.sqrt(panel.forecast)
    )
    np.testing.assert_array_equal(series.violations, expected.astype(int))
    assert report.n == 200
    assert report.n1 == int(expected.sum())


def test_backtest_input_errors(garch_table, gjr_params, fit_factory, garch_sim) -> None:
    table, fitted = garch_table

    with pytest.raises(EvaluationError, match="one horizon"):
        backtest(table, fitted)
    other = fit_factory("gjr", gjr_params, garch_sim.returns.head(1000))
    with pytest.raises(EvaluationError, match="the fit is"):
        backtest(table.panel(1), other)
    with pytest.raises(ParameterError):
        backtest(table.panel(1), fitted, alpha=0.0)


def test_mrs_threshold_is_the_mixture_quantile(mrs_params, fit_factory) -> None:
    returns = simulate("mrs", mrs_params, n=300, burn_in=100, seed=6).returns
    sample = split(returns, returns.dates[249].date())
    fitted = fit_factory("mrs", mrs_params, returns.head(250))
    panel = rolling_forecast("mrs", fitted, returns, sample, [3]).panel(3)

    series, _ = backtest(panel, fitted, 0.01)

    row = panel.rows.iloc[7]
    expected = mixture_quantile(
        [row["weight_1"], row["weight_2"]],
        [3 * mrs_params.delta_1, 3 * mrs_params.delta_2],
        [row["regime_variance_1"], row["regime_variance_2"]],
        [mrs_params.nu_1, mrs_params.nu_2],
        0.01,
    )
    assert series.rows["threshold"].iloc[7] == pytest.approx(expected)


def test_lr_tests_hold_their_size_on_iid_violations() -> None:
    rng = np.random.default_rng(2024)
    rejections = np.zeros(3)
    for _ in range(1000):
        hits = (rng.random(400) < 0.05).astype(int)
        report = lr_report(hits, 0.05)
        rejections += [report.reject_uc, report.reject_ind, report.reject_cc]

    rates = rejections / 1000
    assert np.all((rates >= 0.03) & (rates <= 0.08)), rates


@pytest.mark.slow
def test_true_model_is_calibrated(garch_params, fit_factory) -> None:
    violations, n, rejected = 0, 0, 0
    for seed in range(31, 36):
        sim = simulate("garch", garch_params, n=3000, burn_in=1000, seed=seed)
        returns = sim.returns
        sample = split(returns, returns.dates[999].date())
        fitted = fit_factory("garch", garch_params, returns.head(1000))
        panel = rolling_forecast("garch", fitted, returns, sample, [1]).panel(1)

        _, report = backtest(panel, fitted, 0.05)

        violations, n = violations + report.n1, n + report.n
        rejected += report.reject_cc

    assert 0.04 <= violations / n <= 0.06
    assert rejected <= 2
