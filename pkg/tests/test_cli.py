from pathlib import Path

import pandas as pd
import pytest
from typer.testing import CliRunner

from regimecast.cli.main import app
from regimecast.cli.run import run_overrides
from regimecast.cli.utils import parse_param_overrides
from regimecast.exceptions import EXIT_DATA, EXIT_USAGE, ParameterError

runner = CliRunner()


@pytest.fixture(autouse=True)
def _isolated_cwd(tmp_path: Path, monkeypatch) -> None:
    monkeypatch.chdir(tmp_path)
    for name in ("REGIMECAST_INPUT", "REGIMECAST_OUT", "REGIMECAST_RUN_CONFIG"):
        monkeypatch.delenv(name, raising=False)


@pytest.fixture
def base_args(price_file: Path, garch_sim) -> list[str]:
    return [
        "--input",
        str(price_file),
        "--in-sample-end",
        garch_sim.returns.dates[999].strftime("%Y-%m-%d"),
        "--restarts",
        "1",
        "--format",
        "csv",
    ]


def test_version(mocker) -> None:
    mocker.patch(
        "regimecast.cli.utils.importlib.metadata.version", return_value="9.9.9"
    )

    result = runner.invoke(app, ["--version"])

    assert result.exit_code == 0
    assert "Regimecast 9.9.9" in result.output


def test_run_overrides_drop_unset_flags() -> None:
    overrides = run_overrides(
        seed=None, models="garch, mrs", horizons="1,5", alpha=0.01
    )

    assert overrides == {
        "models": ["garch", "mrs"],
        "horizons": ["1", "5"],
        "alpha": 0.01,
    }


def test_parse_param_overrides() -> None:
    assert parse_param_overrides(["beta=0.8", " nu = 5"]) == {"beta": 0.8, "nu": 5.0}
    with pytest.raises(ParameterError, match="name=value"):
        parse_param_overrides(["beta"])
    with pytest.raises(ParameterError, match="non-numeric"):
        parse_param_overrides(["beta=high"])


def test_fit_writes_coefficients(tmp_path: Path, base_args: list[str]) -> None:
    out = tmp_path / "fit-out"

    result = runner.invoke(
        app, ["fit", *base_args, "--models", "garch", "--out", str(out)]
    )

    assert result.exit_code == 0, result.output
    coefficients = pd.read_csv(out / "coefficients.csv", comment="#")
    assert coefficients["model"].unique().tolist() == ["GARCH"]
    assert not (out / "forecasts_garch.csv").exists()


def test_missing_price_column_is_a_data_error(tmp_path: Path, garch_sim) -> None:
    path = tmp_path / "close.csv"
    path.write_text("date,close\n2000-01-03,100\n2000-01-04,101\n")

    result = runner.invoke(
        app, ["fit", "--input", str(path), "--in-sample-end", "2000-01-04"]
    )

    assert result.exit_code == EXIT_DATA


def test_missing_input_is_a_usage_error() -> None:
    result = runner.invoke(app, ["fit", "--models", "garch"])

    assert result.exit_code == EXIT_USAGE


def test_invalid_flag_value_is_a_usage_error(base_args: list[str]) -> None:
    result = runner.invoke(app, ["backtest", *base_args, "--alpha", "0.9"])

    assert result.exit_code == EXIT_USAGE


def test_unknown_model_is_rejected(base_args: list[str]) -> None:
    result = runner.invoke(app, ["fit", *base_args, "--models", "arch"])

    assert result.exit_code == EXIT_USAGE


def _snapshot(out: Path) -> dict[str, bytes]:
    return {p.name: p.read_bytes() for p in sorted(out.iterdir())}


def test_reproduce_is_byte_identical(tmp_path: Path, base_args: list[str]) -> None:
    out = tmp_path / "bundle"
    args = [
        "reproduce",
        *base_args,
        "--models",
        "garch,egarch",
        "--horizons",
        "1,5",
        "--mc-paths",
        "1000",
        "--seed",
        "4",
        "--out",
        str(out),
    ]

    first = runner.invoke(app, args)
    assert first.exit_code == 0, first.output
    before = _snapshot(out)
    second = runner.invoke(app, args)
    assert second.exit_code == 0, second.output

    assert _snapshot(out) == before
    expected = {"market.csv", "run_config.yaml", "var_k5.csv", "forecasts_egarch.csv"}
    assert expected <= set(before)


def test_saved_run_config_reproduces_the_bundle(
    tmp_path: Path, base_args: list[str]
) -> None:
    out = tmp_path / "bundle"
    args = ["reproduce", *base_args, "--models", "garch", "--horizons", "1"]
    args += ["--out", str(out)]
    assert runner.invoke(app, args).exit_code == 0
    before = _snapshot(out)

    result = runner.invoke(
        app, ["reproduce", "--run-config", str(out / "run_config.yaml")]
    )

    assert result.exit_code == 0, result.output
    assert _snapshot(out) == before
    for name, content in before.items():
        assert content.startswith(b"# tool: regimecast"), name


def test_simulate_writes_prices(tmp_path: Path) -> None:
    out = tmp_path / "sim"

    result = runner.invoke(
        app,
        ["simulate", "-m", "gjr", "-n", "200", "--burn-in", "50", "-p", "beta=0.85"]
        + ["--out", str(out), "--format", "csv"],
    )

    assert result.exit_code == 0, result.output
    header = (out / "simulated_prices.csv").read_text().splitlines()[0]
    assert header.startswith("# tool: regimecast")
    prices = pd.read_csv(out / "simulated_prices.csv", comment="#")
    assert len(prices) == 201
    assert prices["price"].iloc[0] == 100.0


@pytest.mark.parametrize("param", ["beta", "beta=0.99", "gamma=1"])
def test_simulate_rejects_bad_parameters(tmp_path: Path, param: str) -> None:
    result = runner.invoke(
        app, ["simulate", "-n", "50", "-p", param, "--out", str(tmp_path / "sim")]
    )

    assert result.exit_code == EXIT_USAGE
    assert not (tmp_path / "sim").exists()
