import asyncio
from pathlib import Path

import numpy as np
import pandas as pd
import pytest

from regimecast.config.presets import load_presets
from regimecast.config.run import RunConfig
from regimecast.exceptions import (
    EXIT_DATA,
    EXIT_NUMERICAL,
    EXIT_USAGE,
    ParameterError,
    StageError,
)
from regimecast.models.interfaces import ModelKind
from regimecast.models.params import GarchParams
from regimecast.pipeline.orchestrator import (
    Stage,
    regime_accuracy,
    run_pipeline,
    run_simulation,
    simulation_params,
    write_bundle,
)
from regimecast.reporting.exporters import Provenance


@pytest.fixture
def run_config(tmp_path: Path, price_file: Path, garch_sim) -> RunConfig:
    return RunConfig(
        input=price_file,
        in_sample_end=garch_sim.returns.dates[999].date(),
        models=["garch", "gjr"],
        horizons=[1, 5],
        restarts=1,
        mc_paths=1000,
        out=tmp_path / "out",
        formats=["csv"],
    )


def test_full_run_writes_every_table(run_config: RunConfig) -> None:
    state, written = asyncio.run(
        run_pipeline(run_config, load_presets(), Stage.BACKTEST)
    )

    assert {p.name for p in written} == {
        "coefficients.csv",
        "fit_summary.csv",
        "in_sample.csv",
        "forecasts_garch.csv",
        "forecasts_gjr.csv",
        "losses_k1.csv",
        "losses_k5.csv",
        "var_k1.csv",
        "var_k5.csv",
    }
    assert list(state.fits) == [ModelKind.GARCH, ModelKind.GJR]
    assert state.split.n_in == 1000
    assert len(state.forecasts[ModelKind.GJR].panel(5)) == 196
    losses = pd.read_csv(run_config.out / "losses_k1.csv", comment="#")
    assert losses["model"].tolist() == ["GARCH", "GJR-GARCH"]
    assert set(losses["MSE_rank"]) <= {1, 2}
    header = (run_config.out / "var_k5.csv").read_text().splitlines()[0]
    assert header.startswith("# tool: regimecast")


def test_stopping_after_fit(run_config: RunConfig) -> None:
    state, written = asyncio.run(run_pipeline(run_config, load_presets(), Stage.FIT))

    assert sorted(p.name for p in written) == [
        "coefficients.csv",
        "fit_summary.csv",
        "in_sample.csv",
    ]
    assert not state.forecasts


def test_stage_errors_name_the_stage(run_config: RunConfig) -> None:
    late_end = run_config.in_sample_end.replace(year=2030)
    late = run_config.model_copy(update={"in_sample_end": late_end})

    with pytest.raises(StageError, match="Stage 'split' failed") as err:
        asyncio.run(run_pipeline(late, load_presets(), Stage.FIT))

    assert err.value.exit_code == EXIT_DATA
    assert not late.out.exists()


def test_split_outside_the_window_is_a_usage_error(run_config: RunConfig) -> None:
    narrow = run_config.model_copy(update={"sample_end": run_config.in_sample_end})

    with pytest.raises(StageError, match="no out-of-sample") as err:
        asyncio.run(run_pipeline(narrow, load_presets(), Stage.SPLIT))

    assert err.value.exit_code == EXIT_USAGE


@pytest.mark.parametrize(
    ("cause", "exit_code"),
    [
        (np.linalg.LinAlgError("Singular matrix"), EXIT_NUMERICAL),
        (FloatingPointError("overflow encountered"), EXIT_NUMERICAL),
        (ZeroDivisionError("float division by zero"), EXIT_NUMERICAL),
        (KeyError("price"), EXIT_USAGE),
    ],
)
def test_foreign_fit_failures_keep_a_matching_exit_code(
    run_config: RunConfig, mocker, cause: Exception, exit_code: int
) -> None:
    mocker.patch("regimecast.pipeline.orchestrator.fit", side_effect=cause)

    with pytest.raises(StageError, match="Stage 'fit' failed") as err:
        asyncio.run(run_pipeline(run_config, load_presets(), Stage.FIT))

    assert err.value.exit_code == exit_code


def test_sub_sample_window(run_config: RunConfig, garch_sim) -> None:
    dates = garch_sim.returns.dates
    windowed = run_config.model_copy(
        update={"sample_start": dates[100].date(), "models": [ModelKind.GARCH]}
    )

    state, _ = asyncio.run(run_pipeline(windowed, load_presets(), Stage.SPLIT))

    assert state.returns.dates[0] == dates[100]
    assert state.split.n_in == 900


def test_failed_bundle_leaves_no_partial_output(tmp_path: Path) -> None:
    rc = RunConfig(out=tmp_path / "out", formats=["csv"])
    tables = {"good": pd.DataFrame({"a": [1]}), "bad": object()}

    with pytest.raises(AttributeError):
        asyncio.run(write_bundle(tables, rc, Provenance(config_hash="x")))

    assert not (tmp_path / "out").exists()
    assert [p.name for p in tmp_path.iterdir()] == []


def test_simulation_params_merge_presets() -> None:
    presets = load_presets()

    params = simulation_params(ModelKind.GARCH, presets, {"beta": 0.85})

    assert params == GarchParams(0.05, 0.05, 0.08, 0.85, 7.0)
    with pytest.raises(ParameterError, match="unknown \\['gamma'\\]"):
        simulation_params(ModelKind.GARCH, presets, {"gamma": 1.0})
    with pytest.raises(ParameterError):
        simulation_params(ModelKind.GARCH, presets, {"beta": 0.95})


def test_run_simulation_writes_prices_and_recovery(
    tmp_path: Path, garch_params
) -> None:
    rc = RunConfig(out=tmp_path / "sim", formats=["csv"], restarts=1, seed=3)

    written = asyncio.run(
        run_simulation(
            ModelKind.GARCH, garch_params, rc, load_presets(), 600, 200, recover=True
        )
    )

    names = sorted(p.name for p in written)
    assert names == ["fit_summary.csv", "recovery.csv", "simulated_prices.csv"]
    header = (rc.out / "simulated_prices.csv").read_text().splitlines()[0]
    assert header.startswith("# tool: regimecast")
    recovery = pd.read_csv(rc.out / "recovery.csv", comment="#")
    assert recovery["truth"].tolist() == list(garch_params.as_dict().values())


def test_regime_accuracy_needs_mrs(garch_sim, garch_params, fit_factory) -> None:
    with pytest.raises(ParameterError, match="MRS"):
        regime_accuracy(
            garch_sim, fit_factory("garch", garch_params, garch_sim.returns)
        )
