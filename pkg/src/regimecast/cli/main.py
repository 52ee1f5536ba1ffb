"""Main entry point for the CLI."""

import typer

from regimecast.cli.run import backtest, evaluate, fit, forecast, reproduce
from regimecast.cli.simulate import simulate
from regimecast.cli.utils import version_callback

app = typer.Typer(
    name="regimecast",
    help="Volatility forecasting with GARCH-family and regime switching models",
    add_completion=False,
    pretty_exceptions_enable=False,
)

app.command("fit")(fit)
app.command("forecast")(forecast)
app.command("evaluate")(evaluate)
app.command("backtest")(backtest)
app.command("simulate")(simulate)
app.command("reproduce")(reproduce)


@app.callback()
def version(
    show_version: bool = typer.Option(
        None,
        "--version",
        "-v",
        callback=version_callback,
        is_eager=True,
        rich_help_panel="Options",
        help="Print the version and exit",
    ),
) -> None:
    """Handle CLI callback and version option."""
    _ = show_version
