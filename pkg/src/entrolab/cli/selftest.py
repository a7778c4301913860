"""Run the bundled scenario suite."""

from pathlib import Path
from typing import Annotated

import typer

from entrolab.cli.common import (
    EXIT_INCONCLUSIVE,
    EXIT_VIOLATION,
    SeedOption,
    StrictOption,
    handle_errors,
)
from entrolab.models.scenario import RunStatus
from entrolab.services.scenario import bundled_scenarios, load_bundled, run_selftest
from entrolab.utils.output import (
    is_json_mode,
    print_error,
    print_json,
    print_success,
    print_table,
    write_json,
)


def _list_scenarios() -> None:
    scenarios = [load_bundled(name) for name in bundled_scenarios()]
    if is_json_mode():
        print_json(
            [{"name": s.name, "kind": s.kind, "description": s.description} for s in scenarios]
        )
        return
    print_table(
        "Bundled scenarios",
        ["Name", "Kind", "Description"],
        [[s.name, s.kind, s.description or ""] for s in scenarios],
    )


@handle_errors
def selftest_command(
    only: Annotated[
        list[str] | None,
        typer.Option("--only", help="Run just this bundled scenario (repeatable)"),
    ] = None,
    list_only: Annotated[
        bool,
        typer.Option("--list", help="List the bundled scenarios and exit"),
    ] = False,
    seed: SeedOption = None,
    out: Annotated[
        Path | None,
        typer.Option("--out", "-o", help="Directory for one JSON report per scenario"),
    ] = None,
    strict_inconclusive: StrictOption = False,
) -> None:
    """Run the bundled scenarios and compare them with their recorded expectations.

    Every trajectory table computed is also checked for subadditivity and for
    integer stabilized ratios.
    """
    if list_only:
        _list_scenarios()
        return

    outcomes = run_selftest(only, seed=seed)
    summary = {
        "passed": all(o.passed for o in outcomes),
        "scenarios": [
            {
                "name": o.name,
                "status": o.status.value,
                "passed": o.passed,
                "failures": list(o.failures),
            }
            for o in outcomes
        ],
    }
    if out is not None:
        for outcome in outcomes:
            if outcome.payload is not None:
                write_json(out / f"{outcome.name}.json", outcome.payload)
        write_json(out / "summary.json", summary)

    if is_json_mode():
        print_json(summary)
    else:
        print_table(
            "Selftest",
            ["Scenario", "Status", "Result", "Seconds"],
            [
                [o.name, o.status.value, "PASS" if o.passed else "FAIL", f"{o.seconds:.2f}"]
                for o in outcomes
            ],
        )
        for outcome in outcomes:
            for failure in outcome.failures:
                print_error(f"{outcome.name}: {failure}")
        if summary["passed"]:
            print_success(f"All {len(outcomes)} scenarios passed")

    if not summary["passed"]:
        raise typer.Exit(EXIT_VIOLATION)
    if strict_inconclusive and any(o.status is RunStatus.INCONCLUSIVE for o in outcomes):
        raise typer.Exit(EXIT_INCONCLUSIVE)
