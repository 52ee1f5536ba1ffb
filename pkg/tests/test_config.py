import datetime as dt
from pathlib import Path

import pytest
import yaml

from regimecast.config.config import Config, RuntimeSettings, load_config
from regimecast.config.presets import Presets, load_presets
from regimecast.config.run import (
    ReportFormat,
    RunConfig,
    config_hash,
    load_run_config,
    save_run_config,
)
from regimecast.config.utils import canonical_hash, get_package_file
from regimecast.data.market_data import Frequency
from regimecast.exceptions import (
    ConfigLoadError,
    ContradictingOptionsError,
    MissingOptionsError,
    PriceFileError,
)
from regimecast.models.interfaces import ModelKind


def test_run_config_defaults() -> None:
    rc = RunConfig()

    assert rc.models == list(ModelKind)
    assert rc.formats == [ReportFormat.CSV, ReportFormat.TEXT]
    assert rc.alpha == 0.05
    assert rc.horizons is None


def test_lists_are_normalized() -> None:
    rc = RunConfig(models=["mrs", "garch", "mrs"], horizons=[10, 1, 10])

    assert rc.models == [ModelKind.MRS, ModelKind.GARCH]
    assert rc.horizons == [1, 10]


@pytest.mark.parametrize(
    "overrides",
    [
        {"models": []},
        {"alpha": 0.7},
        {"mc_paths": 10},
        {"horizons": [0]},
        {"colour": "red"},
    ],
)
def test_invalid_values_are_configuration_errors(overrides) -> None:
    with pytest.raises(ConfigLoadError, match="Configuration errors"):
        load_run_config(None, overrides)


def test_save_and_load_round_trip(tmp_path: Path) -> None:
    rc = RunConfig(
        input=tmp_path / "prices.csv",
        frequency=Frequency.WEEKLY,
        in_sample_end=dt.date(2010, 12, 31),
        models=[ModelKind.GJR],
        horizons=[1, 4],
        seed=9,
        formats=[ReportFormat.JSON],
    )

    back = load_run_config(save_run_config(rc, tmp_path / "run.yaml"))

    assert back == rc
    assert config_hash(back) == config_hash(rc)

    headed = save_run_config(rc, tmp_path / "headed.yaml", "# config_hash: abc\n")
    assert headed.read_text().startswith("# config_hash: abc\n")
    assert load_run_config(headed) == rc


def test_flags_win_over_file(tmp_path: Path) -> None:
    path = tmp_path / "run.yaml"
    path.write_text("seed: 3\nalpha: 0.01\n")

    rc = load_run_config(path, {"seed": 5})

    assert (rc.seed, rc.alpha) == (5, 0.01)


def test_unknown_key_in_file(tmp_path: Path) -> None:
    path = tmp_path / "run.yaml"
    path.write_text("seeds: 3\n")

    with pytest.raises(ConfigLoadError, match="seeds"):
        load_run_config(path)


def test_config_hash_changes_with_content() -> None:
    assert config_hash(RunConfig(seed=1)) != config_hash(RunConfig(seed=2))
    assert canonical_hash({"a": 1, "b": 2}) == canonical_hash({"b": 2, "a": 1})


def test_require_input(tmp_path: Path) -> None:
    with pytest.raises(MissingOptionsError):
        RunConfig().require_input()
    with pytest.raises(PriceFileError, match="does not exist"):
        RunConfig(input=tmp_path / "nope.csv").require_input()


def test_presets_fill_unset_values() -> None:
    presets = load_presets()
    rc = RunConfig(frequency=Frequency.WEEKLY)

    assert presets.horizons_for(Frequency.DAILY) == [1, 5, 10, 22]
    assert rc.resolved_horizons(presets) == [1, 2, 3, 4]
    assert rc.resolved_in_sample_end(presets) == dt.date(2013, 12, 27)
    assert RunConfig(horizons=[3]).resolved_horizons(presets) == [3]
    assert presets.simulation.params[ModelKind.MRS]["q"] == 0.98


def test_custom_presets_file(tmp_path: Path) -> None:
    path = tmp_path / "presets.yaml"
    path.write_text(
        "frequencies:\n"
        "  monthly:\n"
        "    horizons: [1, 3]\n"
        "    in_sample_end: '2001-01-01'\n"
    )

    presets = load_presets(path)

    assert presets.horizons_for(Frequency.MONTHLY) == [1, 3]
    assert presets.estimator.restarts == 5


def test_every_packaged_preset_section_is_read() -> None:
    raw = yaml.safe_load(get_package_file("presets.yaml").read_text())

    assert set(raw) <= set(Presets.model_fields)
    assert not hasattr(load_presets(), "forecast")


def test_runtime_settings_from_environment(monkeypatch) -> None:
    monkeypatch.setenv("REGIMECAST_THREADS", "2")
    assert RuntimeSettings().threads == 2


def test_app_config_defaults_and_errors(tmp_path: Path) -> None:
    assert load_config(None) == Config()
    assert load_config(tmp_path / "missing.yaml") == Config()
    bad = tmp_path / "bad.yaml"
    bad.write_text("logging: [unclosed\n")
    with pytest.raises(ConfigLoadError, match="not valid YAML"):
        load_config(bad)


def test_split_date_must_fall_inside_the_window() -> None:
    presets = load_presets()
    window = {"sample_start": dt.date(2005, 1, 3), "sample_end": dt.date(2006, 1, 2)}

    inside = RunConfig(in_sample_end=dt.date(2005, 6, 30), **window)
    assert inside.check_window(presets) == dt.date(2005, 6, 30)
    with pytest.raises(ContradictingOptionsError, match="before the sample start"):
        RunConfig(in_sample_end=dt.date(2004, 12, 31), **window).check_window(presets)
    # the daily preset split date is after this window
    with pytest.raises(ContradictingOptionsError, match="no out-of-sample"):
        RunConfig(**window).check_window(presets)
