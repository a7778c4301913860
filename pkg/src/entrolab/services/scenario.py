"""Scenario files: loading, object construction, execution and expectations."""

import json
import logging
import time
from collections.abc import Callable, Iterable
from importlib.resources import files
from pathlib import Path

import numpy as np
from pydantic import ValidationError

from entrolab.models.endo import EndoSpec, SubgroupDescriptor
from entrolab.models.entropy import LadderReport, TrajectoryTable
from entrolab.models.errors import EntrolabError, ScenarioError, TableTooShort
from entrolab.models.group import (
    BaseGroupTable,
    DirectSumFamily,
    FinitaryUTFamily,
    FiniteFamily,
    GroupFamily,
    PolyHeisenbergFamily,
)
from entrolab.models.harness import Verdict
from entrolab.models.scenario import (
    ExpectSpec,
    FamilySpec,
    LadderSpec,
    NormalSpec,
    RunStatus,
    Scenario,
    ScenarioResult,
    SelftestOutcome,
    SeriesSpec,
    SubgroupSpec,
)
from entrolab.models.series import SeriesKind
from entrolab.models.subgroup import FiniteSubgroup
from entrolab.services.arithmetic import ball_generators
from entrolab.services.config import Settings
from entrolab.services.endo import (
    build_endo,
    coordinatewise,
    corner,
    direct_sum_center,
    direct_sum_lower_central_last,
    direct_sum_torsion,
    direct_sum_upper_central,
    embed_subgroup,
    finite_descriptor,
    finite_table_descriptor,
    half_line,
    heis_center,
)
from entrolab.services.entropy import (
    conjugation_check,
    h_estimate,
    h_ladder,
    support_ball_ladder,
    trajectory,
)
from entrolab.services.fingen import closure
from entrolab.services.harness import (
    build_at_scenario,
    check_at,
    check_chain_sup,
    check_dagger,
    check_dichotomy,
    fekete_violations,
)
from entrolab.services.series import (
    center,
    exponent,
    family_metadata,
    n_torsion_subgroup,
    series,
    trivial,
)
from entrolab.services.tables import builtin, whole_group
from entrolab.utils.codec import element_from_literal, encode_element, encode_endo, endo_from_literal

logger = logging.getLogger(__name__)

SCENARIO_SUFFIX = ".json"


# =============================================================================
# Loading
# =============================================================================


def _validation_details(error: ValidationError) -> str:
    return "; ".join(
        f"{'.'.join(str(part) for part in err['loc']) or '<root>'}: {err['msg']}"
        for err in error.errors()
    )


def parse_scenario(raw: object, source: str = "<scenario>") -> Scenario:
    try:
        return Scenario.model_validate(raw)
    except ValidationError as e:
        raise ScenarioError(f"{source} is not a valid scenario", details=_validation_details(e))


def load_scenario(path: Path) -> Scenario:
    """Read and validate a scenario file."""
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ScenarioError(f"Cannot read {path}", details=str(e))
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as e:
        raise ScenarioError(
            f"{path} is not valid JSON", details=f"line {e.lineno}, column {e.colno}: {e.msg}"
        )
    return parse_scenario(raw, source=str(path))


def _bundled_dir():
    return files("entrolab") / "scenarios"


def bundled_scenarios() -> list[str]:
    """Names of the scenarios shipped with the package."""
    return sorted(
        entry.name.removesuffix(SCENARIO_SUFFIX)
        for entry in _bundled_dir().iterdir()
        if entry.name.endswith(SCENARIO_SUFFIX)
    )


def load_bundled(name: str) -> Scenario:
    stem = name.removesuffix(SCENARIO_SUFFIX)
    resource = _bundled_dir() / f"{stem}{SCENARIO_SUFFIX}"
    if not resource.is_file():
        raise ScenarioError(
            f"No bundled scenario named {stem}",
            details=f"bundled scenarios: {', '.join(bundled_scenarios())}",
        )
    return parse_scenario(json.loads(resource.read_text(encoding="utf-8")), source=f"bundled:{stem}")


def resolve_scenario(ref: str) -> Scenario:
    """A scenario file path, or else the name of a bundled scenario."""
    path = Path(ref)
    if path.is_file():
        return load_scenario(path)
    try:
        return load_bundled(path.name)
    except ScenarioError:
        raise ScenarioError(
            f"Scenario not found: {ref}",
            details=f"not a file and not one of: {', '.join(bundled_scenarios())}",
        )


def resolve_settings(
    scenario: Scenario | None = None, base: Settings | None = None, **overrides: object
) -> Settings:
    """CLI overrides, then scenario fields, then the environment, then defaults."""
    settings = base or Settings.from_env()
    if scenario is not None:
        settings = settings.merged(
            n_max=scenario.n_max,
            window=scenario.window,
            seed=scenario.seed,
            closure_budget=scenario.budgets.closure,
            product_budget=scenario.budgets.product,
        )
    return settings.merged(**overrides)


# =============================================================================
# Building objects from scenario specs
# =============================================================================


def build_family(spec: FamilySpec) -> GroupFamily:
    match spec.kind:
        case "poly_heis":
            return PolyHeisenbergFamily(spec.p)
        case "finitary_ut":
            return FinitaryUTFamily(spec.p)
    if spec.table is not None:
        table = builtin(spec.table)
    else:
        table = BaseGroupTable("inline", np.asarray(spec.mul))
    return FiniteFamily(table) if spec.kind == "finite" else DirectSumFamily(table)


def _need_n(kind: str, n: int | None) -> int:
    if n is None:
        raise ScenarioError(f"'{kind}' subgroups need 'n'")
    return n


def _table_family(family: GroupFamily, kind: str) -> FiniteFamily:
    if not isinstance(family, FiniteFamily):
        raise ScenarioError(f"'{kind}' subgroups are only defined for finite families, not {family.name}")
    return family


def build_subgroup(spec: SubgroupSpec, family: GroupFamily, settings: Settings) -> FiniteSubgroup:
    budget = settings.closure_budget
    match spec.kind:
        case "generators":
            gens = [element_from_literal(family, g) for g in spec.generators]
            return closure(family, gens, budget)
        case "ball":
            return closure(family, ball_generators(family, spec.radius, spec.symmetric), budget)
        case "whole":
            return whole_group(_table_family(family, spec.kind).table)
    table_family = _table_family(family, spec.kind)
    n = _need_n(spec.kind, spec.n) if spec.kind in ("torsion", "upper_central") else None
    desc = finite_table_descriptor(table_family, spec.kind, n)
    return embed_subgroup(whole_group(desc.family.table), desc)


def build_ladder(spec: LadderSpec, family: GroupFamily, settings: Settings) -> list[FiniteSubgroup]:
    if spec.kind == "support_balls":
        return support_ball_ladder(family, spec.radii, spec.symmetric, settings.closure_budget)
    return [build_subgroup(rung, family, settings) for rung in spec.rungs]


def build_descriptor(spec: NormalSpec, family: GroupFamily, settings: Settings) -> SubgroupDescriptor:
    """The invariant subgroup a ``normal`` or ``chain`` entry names in ``family``."""
    match family, spec.kind:
        case DirectSumFamily(), "center":
            return direct_sum_center(family)
        case DirectSumFamily(), "torsion":
            return direct_sum_torsion(family, _need_n(spec.kind, spec.n))
        case DirectSumFamily(), "upper_central":
            return direct_sum_upper_central(family, _need_n(spec.kind, spec.n))
        case DirectSumFamily(), "lower_central_last":
            return direct_sum_lower_central_last(family)
        case DirectSumFamily(), "half_line":
            return half_line(family, spec.start)
        case DirectSumFamily(), "trivial":
            return coordinatewise(family, [0], "trivial")
        case PolyHeisenbergFamily(), "center":
            return heis_center(family)
        case FiniteFamily(), "center" | "lower_central_last":
            return finite_table_descriptor(family, spec.kind)
        case FiniteFamily(), "torsion" | "upper_central":
            return finite_table_descriptor(family, spec.kind, _need_n(spec.kind, spec.n))
        case FiniteFamily(), "trivial":
            return finite_descriptor(trivial(family), "trivial")
        case FiniteFamily(), "generators":
            gens = [element_from_literal(family, g) for g in spec.generators]
            return finite_descriptor(closure(family, gens, settings.closure_budget), "generated")
        case FinitaryUTFamily(), "corner":
            if spec.size is None or spec.size < 2:
                raise ScenarioError("'corner' subgroups need a 'size' of at least 2")
            return corner(family, spec.size)
    raise ScenarioError(f"No '{spec.kind}' subgroup descriptor for {family.name}")


# =============================================================================
# Runners
# =============================================================================


def _status(violation: bool, inconclusive: bool) -> RunStatus:
    if violation:
        return RunStatus.VIOLATION
    return RunStatus.INCONCLUSIVE if inconclusive else RunStatus.OK


def _header(scenario: Scenario, family: GroupFamily, phi: EndoSpec) -> dict:
    return {
        "scenario": scenario.name,
        "kind": scenario.kind,
        "family": family_metadata(family),
        "endo": encode_endo(phi.kind),
    }


def _run_entropy(scenario: Scenario, family: GroupFamily, phi: EndoSpec, settings: Settings) -> ScenarioResult:
    f = build_subgroup(scenario.subgroup, family, settings)
    table = trajectory(phi, f, settings.n_max, settings.product_budget, settings.threads)
    try:
        estimate = h_estimate(table, settings.window)
    except TableTooShort as e:
        logger.warning("%s: %s", scenario.name, e.message)
        estimate = None
    violations = fekete_violations(table)
    payload = {
        **_header(scenario, family, phi),
        "F_order": f.order,
        "table": table.to_dict(),
        "estimate": None if estimate is None else estimate.to_dict(),
        "fekete_violations": [list(pair) for pair in violations],
    }
    inconclusive = table.truncated or estimate is None or not estimate.stabilized
    return ScenarioResult(
        scenario.name,
        scenario.kind,
        _status(bool(violations), inconclusive),
        payload,
        observed={
            "sizes": list(table.sizes),
            "alpha": None if estimate is None else estimate.stabilized_ratio,
        },
        tables=(table,),
    )


def _ladder_tables(*reports: LadderReport) -> tuple[TrajectoryTable, ...]:
    return tuple(e.table for report in reports for e in report.estimates if e is not None)


def _run_ladder(scenario: Scenario, family: GroupFamily, phi: EndoSpec, settings: Settings) -> ScenarioResult:
    ladder = build_ladder(scenario.ladder, family, settings)
    report = h_ladder(phi, ladder, settings.n_max, settings.window, settings.product_budget, settings.threads)
    tables = _ladder_tables(report)
    payload = {
        **_header(scenario, family, phi),
        "rung_orders": [f.order for f in ladder],
        "ladder": report.to_dict(),
    }
    inconclusive = bool(report.unresolved) or report.truncated
    return ScenarioResult(
        scenario.name,
        scenario.kind,
        _status(not report.monotone, inconclusive),
        payload,
        observed={"sup_alpha": report.sup_alpha},
        tables=tables,
    )


def _run_series(scenario: Scenario, family: GroupFamily, phi: EndoSpec, settings: Settings) -> ScenarioResult:
    k = build_subgroup(scenario.subgroup, family, settings)
    spec = scenario.series or SeriesSpec()
    reports = [series(SeriesKind(kind), k, settings.closure_budget) for kind in spec.kinds]
    torsion = {n: n_torsion_subgroup(k, n, settings.closure_budget).order for n in spec.torsion}
    z = center(k)
    k_exponent = exponent(k, settings.order_cap)
    payload = {
        **_header(scenario, family, phi),
        "order": k.order,
        "exponent": k_exponent,
        "center_order": z.order,
        "series": [report.to_dict() for report in reports],
        "torsion": {str(n): order for n, order in torsion.items()},
    }
    return ScenarioResult(
        scenario.name,
        scenario.kind,
        RunStatus.OK,
        payload,
        observed={
            "orders": {r.kind.value: r.orders for r in reports},
            "classes": {r.kind.value: r.group_class for r in reports},
            "center_order": z.order,
            "exponent": k_exponent,
            "torsion_orders": torsion,
        },
    )


def _run_at(scenario: Scenario, family: GroupFamily, phi: EndoSpec, settings: Settings) -> ScenarioResult:
    sub = build_descriptor(scenario.normal, family, settings)
    ladder = build_ladder(scenario.ladder, family, settings)
    at = build_at_scenario(
        scenario.name,
        phi,
        sub,
        ladder,
        settings.n_max,
        settings.window,
        settings.homomorphism_samples,
        settings.seed,
    )
    report = check_at(at, settings.product_budget, settings.threads)
    payload = {
        **_header(scenario, family, phi),
        **report.to_dict(),
        "subgroup": sub.name,
        "quotient": at.model.name,
        "endos": {
            "G": encode_endo(at.endo.kind),
            "H": encode_endo(at.restricted.kind),
            "Q": encode_endo(at.induced.kind),
        },
    }
    ladders = [r for r in (report.group, report.subgroup, report.quotient) if r is not None]
    return ScenarioResult(
        scenario.name,
        scenario.kind,
        _status(
            report.verdict is Verdict.VIOLATION,
            report.verdict is Verdict.INCONCLUSIVE,
        ),
        payload,
        observed={"verdict": report.verdict.value, "alphas": report.alphas},
        tables=_ladder_tables(*ladders),
    )


def _run_dagger(scenario: Scenario, family: GroupFamily, phi: EndoSpec, settings: Settings) -> ScenarioResult:
    kernel = build_descriptor(scenario.normal, family, settings)
    f = build_subgroup(scenario.subgroup, family, settings)
    cert = check_dagger(scenario.name, phi, kernel, f, settings.n_max, settings)
    payload = {**_header(scenario, family, phi), **cert.to_dict(), "kernel": kernel.name}
    if settings.record_eta:
        for data, step in zip(payload["steps"], cert.steps, strict=True):
            data["eta_sample"] = [encode_element(z) for z in step.eta_sample]
    sizes = tuple(step.trajectory for step in cert.steps)
    return ScenarioResult(
        scenario.name,
        scenario.kind,
        _status(not cert.holds, cert.truncated),
        payload,
        observed={"holds": cert.holds},
        tables=(TrajectoryTable(sizes, settings.n_max, cert.truncated),),
    )


def _run_chain(scenario: Scenario, family: GroupFamily, phi: EndoSpec, settings: Settings) -> ScenarioResult:
    terms = [build_descriptor(term, family, settings) for term in scenario.chain]
    ladder = build_ladder(scenario.ladder, family, settings)
    report = check_chain_sup(scenario.name, phi, terms, ladder, settings.n_max, settings.window, settings)
    if not report.ascending:
        logger.warning("%s: chain terms are not nested", scenario.name)
    payload = {**_header(scenario, family, phi), **report.to_dict()}
    return ScenarioResult(
        scenario.name,
        scenario.kind,
        _status(
            not report.monotone,
            report.sup_alpha is None or any(r.truncated for r in (*report.ladders, report.full)),
        ),
        payload,
        observed={"chain_alphas": report.alphas, "sup_alpha": report.sup_alpha},
        tables=_ladder_tables(*report.ladders, report.full),
    )


def _run_conjugation(scenario: Scenario, family: GroupFamily, phi: EndoSpec, settings: Settings) -> ScenarioResult:
    f = build_subgroup(scenario.subgroup, family, settings)
    g = element_from_literal(family, scenario.conjugator)
    report = conjugation_check(phi, g, f, settings.n_max, settings.product_budget, settings.threads)
    try:
        alpha = h_estimate(report.original, settings.window).stabilized_ratio
    except TableTooShort as e:
        logger.warning("%s: %s", scenario.name, e.message)
        alpha = None
    payload = {
        **_header(scenario, family, phi),
        "F_order": f.order,
        "conjugator": encode_element(g),
        **report.to_dict(),
        "alpha": alpha,
    }
    return ScenarioResult(
        scenario.name,
        scenario.kind,
        _status(not report.agree, report.truncated),
        payload,
        observed={"agree": report.agree, "sizes": list(report.original.sizes), "alpha": alpha},
        tables=(report.original, report.conjugated),
    )


_RUNNERS: dict[str, Callable[[Scenario, GroupFamily, EndoSpec, Settings], ScenarioResult]] = {
    "entropy": _run_entropy,
    "ladder": _run_ladder,
    "series": _run_series,
    "at": _run_at,
    "dagger": _run_dagger,
    "chain": _run_chain,
    "conjugation": _run_conjugation,
}


def run_scenario(scenario: Scenario, settings: Settings | None = None) -> ScenarioResult:
    """Build the family and endomorphism of a scenario and run its computation."""
    settings = settings or resolve_settings(scenario)
    family = build_family(scenario.family)
    phi = build_endo(
        family,
        endo_from_literal(family, scenario.endo),
        settings.homomorphism_samples,
        settings.seed,
    )
    logger.info("Running %s (%s) on %s", scenario.name, scenario.kind, family.name)
    result = _RUNNERS[scenario.kind](scenario, family, phi, settings)
    logger.info("%s: %s", scenario.name, result.status.value)
    return result


# =============================================================================
# Expectations and the bundled suite
# =============================================================================


def check_expectations(result: ScenarioResult, expect: ExpectSpec | None) -> list[str]:
    """Differences between ``expect`` and what the run observed."""
    if expect is None:
        return []
    failures = []
    for key, wanted in expect.model_dump(exclude_none=True).items():
        if key not in result.observed:
            failures.append(f"{key}: not reported by {result.kind} scenarios")
        elif result.observed[key] != wanted:
            failures.append(f"{key}: expected {wanted}, got {result.observed[key]}")
    return failures


def sweep_tables(result: ScenarioResult, window: int) -> list[str]:
    """Subadditivity and integer-ratio checks over every trajectory table of a run."""
    failures = []
    for table in result.tables:
        violations = fekete_violations(table)
        if violations:
            failures.append(f"subadditivity fails on {list(table.sizes)} at {violations}")
        if len(table.sizes) <= window:
            continue
        estimate = h_estimate(table, window)
        if estimate.stabilized and not check_dichotomy(estimate):
            failures.append(f"ratio stabilized at non-integer {estimate.common_ratio} on {list(table.sizes)}")
    return failures


def run_selftest(names: Iterable[str] | None = None, **overrides: object) -> list[SelftestOutcome]:
    """Run bundled scenarios and compare each against its expectations."""
    outcomes = []
    for name in names or bundled_scenarios():
        start = time.perf_counter()
        try:
            scenario = load_bundled(name)
            settings = resolve_settings(scenario, **overrides)
            result = run_scenario(scenario, settings)
        except EntrolabError as e:
            logger.error("%s: %s", name, e.message)
            outcomes.append(
                SelftestOutcome(
                    name,
                    RunStatus.VIOLATION,
                    (f"{e.code}: {e.message}",),
                    seconds=time.perf_counter() - start,
                )
            )
            continue
        failures = check_expectations(result, scenario.expect) + sweep_tables(result, settings.window)
        expected_violation = scenario.expect is not None and scenario.expect.verdict == "violation"
        if result.status is RunStatus.VIOLATION and not expected_violation:
            failures.append("run reported a violation")
        outcomes.append(
            SelftestOutcome(
                name,
                result.status,
                tuple(failures),
                result.payload,
                time.perf_counter() - start,
            )
        )
    return outcomes
