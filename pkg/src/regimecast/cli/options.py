"""Option declarations shared by the CLI commands.

Every run option defaults to None so that only flags actually given
override the values of a ``--run-config`` file.
"""

from pathlib import Path
from typing import Annotated

import typer

from regimecast.config.utils import get_cwd_file
from regimecast.data.market_data import Frequency

DATA_PANEL = "Data"
MODEL_PANEL = "Models"
FORECAST_PANEL = "Forecasting"
OUTPUT_PANEL = "Output"
CONFIG_PANEL = "Regimecast Configuration"

InputOption = Annotated[
    Path | None,
    typer.Option(
        "--input",
        "-i",
        rich_help_panel=DATA_PANEL,
        help="Price file (CSV with a header row).",
        envvar="REGIMECAST_INPUT",
        dir_okay=False,
        file_okay=True,
        resolve_path=True,
    ),
]
FrequencyOption = Annotated[
    Frequency | None,
    typer.Option(
        "--frequency",
        "-f",
        rich_help_panel=DATA_PANEL,
        help="Data frequency; selects the horizon and split presets.",
    ),
]
InSampleEndOption = Annotated[
    str | None,
    typer.Option(
        "--in-sample-end",
        rich_help_panel=DATA_PANEL,
        help="Last in-sample date (YYYY-MM-DD).",
    ),
]
SampleStartOption = Annotated[
    str | None,
    typer.Option(
        "--sample-start",
        rich_help_panel=DATA_PANEL,
        help="First date of a sub-sample window (YYYY-MM-DD).",
    ),
]
SampleEndOption = Annotated[
    str | None,
    typer.Option(
        "--sample-end",
        rich_help_panel=DATA_PANEL,
        help="Last date of a sub-sample window (YYYY-MM-DD).",
    ),
]
ModelsOption = Annotated[
    str | None,
    typer.Option(
        "--models",
        "-m",
        rich_help_panel=MODEL_PANEL,
        help="Comma-separated models: garch,gjr,egarch,mrs.",
    ),
]
SeedOption = Annotated[
    int | None,
    typer.Option(
        "--seed",
        "-s",
        rich_help_panel=MODEL_PANEL,
        help="Seed for restarts, Monte Carlo forecasts and simulation.",
    ),
]
RestartsOption = Annotated[
    int | None,
    typer.Option(
        "--restarts",
        rich_help_panel=MODEL_PANEL,
        help="Number of optimizer starts per fit.",
    ),
]
HorizonsOption = Annotated[
    str | None,
    typer.Option(
        "--horizons",
        "-k",
        rich_help_panel=FORECAST_PANEL,
        help="Comma-separated forecast horizons, e.g. 1,5,10,22.",
    ),
]
AlphaOption = Annotated[
    float | None,
    typer.Option(
        "--alpha",
        "-a",
        rich_help_panel=FORECAST_PANEL,
        help="VaR tail probability.",
    ),
]
StrideOption = Annotated[
    int | None,
    typer.Option(
        "--stride",
        rich_help_panel=FORECAST_PANEL,
        help="Step between forecast origins.",
    ),
]
ReestimateOption = Annotated[
    int | None,
    typer.Option(
        "--reestimate-every",
        rich_help_panel=FORECAST_PANEL,
        help="Refit on an expanding window every N origins.",
    ),
]
McPathsOption = Annotated[
    int | None,
    typer.Option(
        "--mc-paths",
        rich_help_panel=FORECAST_PANEL,
        help="Monte Carlo paths for EGARCH multi-step forecasts.",
    ),
]
OutOption = Annotated[
    Path | None,
    typer.Option(
        "--out",
        "-o",
        rich_help_panel=OUTPUT_PANEL,
        help="Output directory.",
        envvar="REGIMECAST_OUT",
        file_okay=False,
        resolve_path=True,
    ),
]
FormatOption = Annotated[
    str | None,
    typer.Option(
        "--format",
        rich_help_panel=OUTPUT_PANEL,
        help="Comma-separated report formats: csv,text,json,parquet.",
    ),
]
RunConfigOption = Annotated[
    Path | None,
    typer.Option(
        "--run-config",
        "-r",
        rich_help_panel=CONFIG_PANEL,
        help="YAML run config; flags override its values.",
        envvar="REGIMECAST_RUN_CONFIG",
        dir_okay=False,
        exists=True,
        file_okay=True,
        resolve_path=True,
        readable=True,
    ),
]
ConfigFileOption = Annotated[
    Path,
    typer.Option(
        "--config-file",
        "-c",
        rich_help_panel=CONFIG_PANEL,
        help="Path to the application configuration file.",
        envvar="REGIMECAST_CONFIG_FILE",
        dir_okay=False,
        file_okay=True,
        resolve_path=True,
    ),
]

DEFAULT_CONFIG_FILE = get_cwd_file("regimecast.yaml")
