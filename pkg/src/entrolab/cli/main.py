"""Main CLI application."""

import logging
from collections.abc import Sequence
from typing import Annotated

import typer

try:  # newer typer vendors click; its exceptions are distinct from standalone click's
    from typer._click import exceptions as click
except ImportError:
    import click
from rich.logging import RichHandler

from entrolab import __version__
from entrolab.cli.common import EXIT_ERROR, EXIT_OK
from entrolab.cli.compute import entropy_command, ladder_command, series_command
from entrolab.cli.harness import at_check_command, conjugation_check_command, dagger_check_command
from entrolab.cli.selftest import selftest_command
from entrolab.utils.output import err_console, set_json_mode

app = typer.Typer(
    name="entrolab",
    help="Algebraic entropy of endomorphisms of locally finite groups.",
    no_args_is_help=True,
)


def version_callback(value: bool) -> None:
    """Print version and exit."""
    if value:
        typer.echo(f"entrolab version {__version__}")
        raise typer.Exit()


def configure_logging(verbose: bool) -> None:
    """Send entrolab logs to stderr through rich; DEBUG when verbose, else WARNING."""
    logger = logging.getLogger("entrolab")
    for handler in [h for h in logger.handlers if isinstance(h, RichHandler)]:
        logger.removeHandler(handler)
    logger.addHandler(RichHandler(console=err_console, show_time=False, show_path=False))
    logger.setLevel(logging.DEBUG if verbose else logging.WARNING)


@app.callback()
def main(
    version: Annotated[  # noqa: ARG001
        bool | None,
        typer.Option(
            "--version",
            "-v",
            callback=version_callback,
            is_eager=True,
            help="Show version and exit.",
        ),
    ] = None,
    json_output: Annotated[
        bool,
        typer.Option(
            "--json",
            help="Output results as JSON.",
        ),
    ] = False,
    verbose: Annotated[
        bool,
        typer.Option(
            "--verbose",
            help="Log computation progress to stderr.",
        ),
    ] = False,
) -> None:
    """entrolab - trajectories, entropy ladders and Addition Theorem checks."""
    set_json_mode(json_output)
    configure_logging(verbose)


app.command("entropy")(entropy_command)
app.command("ladder")(ladder_command)
app.command("series")(series_command)
app.command("at-check")(at_check_command)
app.command("dagger-check")(dagger_check_command)
app.command("conjugation-check")(conjugation_check_command)
app.command("selftest")(selftest_command)


def run(argv: Sequence[str] | None = None) -> int:
    """Run the CLI and return its exit code; usage errors exit with 1."""
    try:
        code = app(
            args=None if argv is None else list(argv),
            prog_name="entrolab",
            standalone_mode=False,
        )
    except click.UsageError as e:
        e.show()
        return EXIT_ERROR
    except click.Abort:
        return EXIT_ERROR
    return code if isinstance(code, int) else EXIT_OK


if __name__ == "__main__":
    raise SystemExit(run())
