"""Options, error handling and exit codes shared by every command."""

from collections.abc import Callable
from functools import wraps
from pathlib import Path
from typing import Annotated, Any

import typer

from entrolab.models.errors import BudgetExceeded, EntrolabError, ScenarioError
from entrolab.models.scenario import RunStatus, Scenario
from entrolab.services.scenario import resolve_scenario
from entrolab.utils.output import (
    is_json_mode,
    print_error,
    print_json,
    print_json_error,
    print_success,
    write_json,
)

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_VIOLATION = 2
EXIT_INCONCLUSIVE = 3

ScenarioArgument = Annotated[
    str,
    typer.Argument(help="Scenario file, or the name of a bundled scenario"),
]
NMaxOption = Annotated[
    int | None,
    typer.Option("--n-max", min=1, help="Trajectory horizon"),
]
WindowOption = Annotated[
    int | None,
    typer.Option("--window", min=1, help="Trailing ratios that must agree to stabilize"),
]
ProductBudgetOption = Annotated[
    int | None,
    typer.Option("--product-budget", min=1, help="Largest set a product or image may reach"),
]
ClosureBudgetOption = Annotated[
    int | None,
    typer.Option("--closure-budget", min=1, help="Largest subgroup a closure may reach"),
]
SeedOption = Annotated[
    int | None,
    typer.Option("--seed", help="Seed for sampled homomorphism and invariance checks"),
]
OutOption = Annotated[
    Path | None,
    typer.Option("--out", "-o", help="Write the report to this file"),
]
StrictOption = Annotated[
    bool,
    typer.Option("--strict-inconclusive", help="Exit with 3 when the result is inconclusive"),
]

# command that runs each scenario kind
COMMAND_FOR_KIND = {
    "entropy": "entropy",
    "ladder": "ladder",
    "chain": "ladder",
    "series": "series",
    "at": "at-check",
    "dagger": "dagger-check",
    "conjugation": "conjugation-check",
}


def _tip(error: EntrolabError) -> str | None:
    if isinstance(error, BudgetExceeded):
        return "Raise --product-budget or --closure-budget, or lower --n-max."
    if isinstance(error, ScenarioError):
        return "Run 'entrolab selftest --list' to see the bundled scenarios."
    return None


def handle_errors(func: Callable[..., Any]) -> Callable[..., Any]:
    """Render entrolab errors for the console or as JSON, then exit with 1."""

    @wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        try:
            return func(*args, **kwargs)
        except EntrolabError as e:
            if is_json_mode():
                print_json_error(e.code, e.message, e.details)
            else:
                print_error(e.message, details=e.details, tip=_tip(e))
            raise typer.Exit(EXIT_ERROR)

    return wrapper


def load_for(ref: str, command: str) -> Scenario:
    """Resolve a scenario and check that ``command`` is the one that runs it."""
    scenario = resolve_scenario(ref)
    expected = COMMAND_FOR_KIND[scenario.kind]
    if expected != command:
        raise ScenarioError(
            f"{scenario.name} is a '{scenario.kind}' scenario",
            details=f"run it with 'entrolab {expected}'",
        )
    return scenario


def output_path(out: Path | None, scenario: Scenario) -> Path | None:
    """--out wins over the scenario's own ``output`` field."""
    if out is not None:
        return out
    return Path(scenario.output) if scenario.output else None


def exit_for(status: RunStatus, strict: bool) -> None:
    if status is RunStatus.VIOLATION:
        raise typer.Exit(EXIT_VIOLATION)
    if status is RunStatus.INCONCLUSIVE and strict:
        raise typer.Exit(EXIT_INCONCLUSIVE)


def emit_report(payload: dict, path: Path | None) -> None:
    """Write the JSON report to ``path`` and echo it in JSON mode."""
    if path is not None:
        write_json(path, payload)
    if is_json_mode():
        print_json(payload)
    elif path is not None:
        print_success(f"Report written to {path}")
