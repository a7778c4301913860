"""Addition Theorem, central-extension certificate and conjugation commands."""

from typing import Annotated

import typer

from entrolab.cli.common import (
    ClosureBudgetOption,
    NMaxOption,
    OutOption,
    ProductBudgetOption,
    ScenarioArgument,
    SeedOption,
    StrictOption,
    WindowOption,
    emit_report,
    exit_for,
    handle_errors,
    load_for,
    output_path,
)
from entrolab.services.scenario import resolve_settings, run_scenario
from entrolab.utils.output import (
    is_json_mode,
    print_error,
    print_success,
    print_table,
    print_warning,
)


def _fmt(value: object) -> str:
    return "-" if value is None else str(value)


def _endo_label(literal: dict) -> str:
    name = literal["endo"]
    if name == "shift":
        return f"shift({literal['k']})"
    if name in ("restricted", "induced"):
        return f"{name} {_endo_label(literal['base'])}"
    return name


@handle_errors
def at_check_command(
    scenario_ref: ScenarioArgument,
    n_max: NMaxOption = None,
    window: WindowOption = None,
    product_budget: ProductBudgetOption = None,
    closure_budget: ClosureBudgetOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
    strict_inconclusive: StrictOption = False,
) -> None:
    """Check h(phi) = h(phi|H) + h(phi_bar) on ladders of G, H and G/H.

    Exits with 2 on a violation, and with 3 on an inconclusive verdict when
    --strict-inconclusive is set.
    """
    scenario = load_for(scenario_ref, "at-check")
    settings = resolve_settings(
        scenario,
        n_max=n_max,
        window=window,
        product_budget=product_budget,
        closure_budget=closure_budget,
        seed=seed,
    )
    result = run_scenario(scenario, settings)
    payload = result.payload
    emit_report(payload, output_path(out, scenario))

    if not is_json_mode():
        rows = [
            [part, _endo_label(payload["endos"][part]), _fmt(payload["alphas"][part])]
            for part in ("G", "H", "Q")
        ]
        print_table(
            f"{payload['scenario']}: {payload['subgroup']} in {payload['family']['name']}",
            ["Group", "Endomorphism", "Alpha"],
            rows,
        )
        message = f"{payload['verdict']}: {payload['reason']}"
        match payload["verdict"]:
            case "exact_equality" | "bounds_consistent":
                print_success(message)
            case "violation":
                print_error(message)
            case _:
                print_warning(message)

    exit_for(result.status, strict_inconclusive)


@handle_errors
def dagger_check_command(
    scenario_ref: ScenarioArgument,
    n_max: NMaxOption = None,
    product_budget: ProductBudgetOption = None,
    closure_budget: ClosureBudgetOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
    record_eta: Annotated[
        bool,
        typer.Option("--record-eta", help="Verify t = eta(t) s(pi t) for every t in T_n"),
    ] = False,
    full_corrections: Annotated[
        bool,
        typer.Option("--full-corrections", help="Use every carry over L_n x L_n"),
    ] = False,
    strict_inconclusive: StrictOption = False,
) -> None:
    """Counting certificate |T_n(phi,F)| <= |T_n(phi_bar,Q)| |T_n(phi|N,K_n)| for a central N."""
    scenario = load_for(scenario_ref, "dagger-check")
    settings = resolve_settings(
        scenario,
        n_max=n_max,
        product_budget=product_budget,
        closure_budget=closure_budget,
        seed=seed,
        record_eta=record_eta or None,
        full_corrections=full_corrections or None,
    )
    result = run_scenario(scenario, settings)
    payload = result.payload
    emit_report(payload, output_path(out, scenario))

    if not is_json_mode():
        rows = [
            [
                str(step["n"]),
                str(step["T"]),
                str(step["T_quotient"]),
                str(step["T_kernel"]),
                str(step["K_order"]),
                str(step["slack"]),
                "yes" if step["holds"] else "no",
            ]
            for step in payload["steps"]
        ]
        print_table(
            f"{payload['scenario']}: |F| = {payload['F_order']}, kernel {payload['kernel']}",
            ["n", "|T_n|", "|L_n|", "|T_n(N, K_n)|", "|K_n|", "Slack", "Holds"],
            rows,
            footer="Certificate truncated by a budget" if payload["truncated"] else None,
            numeric=("n", "|T_n|", "|L_n|", "|T_n(N, K_n)|", "|K_n|", "Slack"),
        )
        if payload["holds"]:
            print_success(f"Counting inequality holds for n <= {len(payload['steps'])}")
        else:
            print_error("Counting inequality fails")

    exit_for(result.status, strict_inconclusive)


@handle_errors
def conjugation_check_command(
    scenario_ref: ScenarioArgument,
    n_max: NMaxOption = None,
    window: WindowOption = None,
    product_budget: ProductBudgetOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
    strict_inconclusive: StrictOption = False,
) -> None:
    """Compare |T_n(phi, F)| with |T_n(xi phi xi^-1, xi(F))| for an inner automorphism xi.

    Exits with 2 when the two trajectories differ in size at some horizon.
    """
    scenario = load_for(scenario_ref, "conjugation-check")
    settings = resolve_settings(
        scenario,
        n_max=n_max,
        window=window,
        product_budget=product_budget,
        seed=seed,
    )
    result = run_scenario(scenario, settings)
    payload = result.payload
    emit_report(payload, output_path(out, scenario))

    if not is_json_mode():
        original, conjugated = payload["original"]["sizes"], payload["conjugated"]["sizes"]
        rows = zip(original, conjugated, strict=False)
        print_table(
            f"{payload['scenario']}: |F| = {payload['F_order']} in {payload['family']['name']}",
            ["n", "|T_n(phi, F)|", "|T_n(psi, xi F)|"],
            [[str(n), str(a), str(b)] for n, (a, b) in enumerate(rows, start=1)],
            footer=None if payload["alpha"] is None else f"alpha = {payload['alpha']}",
            numeric=("n", "|T_n(phi, F)|", "|T_n(psi, xi F)|"),
        )
        if payload["agree"]:
            print_success("Conjugate trajectories agree in size")
        else:
            print_error("Conjugate trajectories differ in size")

    exit_for(result.status, strict_inconclusive)
