"""Entropy, ladder and series commands."""

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
from entrolab.services.entropy import TRAJECTORY_COLUMNS, trajectory_rows
from entrolab.services.scenario import resolve_settings, run_scenario
from entrolab.utils.output import (
    is_json_mode,
    print_fields,
    print_info,
    print_json,
    print_success,
    print_table,
    print_warning,
    write_csv,
)


def _fmt(value: object) -> str:
    return "-" if value is None else str(value)


@handle_errors
def entropy_command(
    scenario_ref: ScenarioArgument,
    n_max: NMaxOption = None,
    window: WindowOption = None,
    product_budget: ProductBudgetOption = None,
    closure_budget: ClosureBudgetOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
    strict_inconclusive: StrictOption = False,
) -> None:
    """Trajectory sizes |T_n| of one finite subgroup and its entropy estimate.

    Prints the CSV table (n, size, log_size, prefix_inf, increment,
    stabilized_alpha) to stdout unless --out names a file.
    """
    scenario = load_for(scenario_ref, "entropy")
    settings = resolve_settings(
        scenario,
        n_max=n_max,
        window=window,
        product_budget=product_budget,
        closure_budget=closure_budget,
        seed=seed,
    )
    result = run_scenario(scenario, settings)
    rows = trajectory_rows(result.tables[0], settings.window)
    path = output_path(out, scenario)

    if path is not None or not is_json_mode():
        write_csv(path, TRAJECTORY_COLUMNS, rows)
    if is_json_mode():
        print_json(result.payload)
    elif path is not None:
        print_success(f"Wrote {len(rows)} rows to {path}")
        alpha = result.observed["alpha"]
        if alpha is None:
            print_warning("Trajectory ratios did not stabilize on an integer")
        else:
            print_info(f"Stabilized alpha = {alpha}")

    exit_for(result.status, strict_inconclusive)


def _print_ladder(payload: dict) -> None:
    report = payload["ladder"]
    rows = []
    for i, (order, rung, sup) in enumerate(
        zip(payload["rung_orders"], report["rungs"], report["running_sup_alpha"], strict=True)
    ):
        sizes = "-" if rung is None else ", ".join(str(s) for s in rung["sizes"])
        alpha = None if rung is None else rung["stabilized_alpha"]
        rows.append([str(i), str(order), sizes, _fmt(alpha), _fmt(sup)])
    print_table(
        f"{payload['scenario']}: ladder",
        ["Rung", "|F|", "|T_n|", "Alpha", "Running sup"],
        rows,
        footer=None if report["monotone"] else "Trajectory sizes decrease along the ladder",
        numeric=("Rung", "|F|", "Alpha", "Running sup"),
    )


def _print_chain(payload: dict) -> None:
    rows = [[term, _fmt(alpha)] for term, alpha in zip(payload["terms"], payload["alphas"], strict=True)]
    print_table(
        f"{payload['scenario']}: chain",
        ["Term", "Alpha"],
        rows,
        footer=f"sup = {_fmt(payload['sup_alpha'])}, full group = {_fmt(payload['full_alpha'])}",
    )


@handle_errors
def ladder_command(
    scenario_ref: ScenarioArgument,
    n_max: NMaxOption = None,
    window: WindowOption = None,
    product_budget: ProductBudgetOption = None,
    closure_budget: ClosureBudgetOption = None,
    seed: SeedOption = None,
    out: OutOption = None,
    strict_inconclusive: StrictOption = False,
) -> None:
    """Entropy along a ladder of subgroups, or along a chain of invariant subgroups.

    The running sup of stabilized alphas bounds the entropy from below.
    """
    scenario = load_for(scenario_ref, "ladder")
    settings = resolve_settings(
        scenario,
        n_max=n_max,
        window=window,
        product_budget=product_budget,
        closure_budget=closure_budget,
        seed=seed,
    )
    result = run_scenario(scenario, settings)
    emit_report(result.payload, output_path(out, scenario))
    if not is_json_mode():
        if result.kind == "chain":
            _print_chain(result.payload)
        else:
            _print_ladder(result.payload)
    exit_for(result.status, strict_inconclusive)


@handle_errors
def series_command(
    scenario_ref: ScenarioArgument,
    closure_budget: ClosureBudgetOption = None,
    out: OutOption = None,
) -> None:
    """Lower central, upper central and derived series of a finite subgroup."""
    scenario = load_for(scenario_ref, "series")
    settings = resolve_settings(scenario, closure_budget=closure_budget)
    result = run_scenario(scenario, settings)
    payload = result.payload
    emit_report(payload, output_path(out, scenario))
    if is_json_mode():
        return
    print_table(
        f"{payload['scenario']}: order {payload['order']}",
        ["Series", "Orders", "Class"],
        [
            [report["kind"], ", ".join(str(o) for o in report["orders"]), str(report["class"])]
            for report in payload["series"]
        ],
    )
    print_fields(
        {
            "Center order": payload["center_order"],
            "Exponent": payload["exponent"],
            **{f"{n}-torsion subgroup order": order for n, order in payload["torsion"].items()},
        }
    )
