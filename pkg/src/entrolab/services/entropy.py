"""Trajectories T_n(phi, F), entropy estimates and ladder suprema."""

import logging
import math
from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

from entrolab.models.element import GroupElement
from entrolab.models.endo import Compose, EndoSpec, Inner
from entrolab.models.entropy import ConjugationReport, EntropyEstimate, LadderReport, TrajectoryTable
from entrolab.models.errors import BudgetExceeded, FamilyMismatch, TableTooShort
from entrolab.models.group import GroupFamily
from entrolab.models.subgroup import ElementSet, FiniteSubgroup
from entrolab.services.arithmetic import ball_generators, inverse
from entrolab.services.endo import apply_set, apply_subgroup, build_endo
from entrolab.services.fingen import DEFAULT_BUDGET, closure, set_product

logger = logging.getLogger(__name__)

DEFAULT_WINDOW = 3

TRAJECTORY_COLUMNS = ("n", "size", "log_size", "prefix_inf", "increment", "stabilized_alpha")


def trajectory_sets(
    phi: EndoSpec,
    f: ElementSet,
    n_max: int,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
):
    """Yield T_1, T_2, ... T_{n_max} as element sets.

    phi^k(F) is carried forward from the previous step rather than recomputed.

    Args:
        phi: Endomorphism.
        f: Finite set to start from, usually a subgroup.
        n_max: Number of sets yielded.
        budget: Largest set size allowed for each image and product.
        workers: Threads for images and products.

    Yields:
        T_n = F phi(F) ... phi^{n-1}(F) for n = 1 .. n_max.

    Raises:
        FamilyMismatch: If ``f`` lives in another family.
        BudgetExceeded: When an image or product passes ``budget``.
    """
    if f.family != phi.family:
        raise FamilyMismatch(f"subgroup of {f.family.name} under an endomorphism of {phi.family.name}")
    t, image = f, f
    yield t
    for _ in range(1, n_max):
        image = apply_set(phi, image, budget, workers)
        t = set_product(t, image, budget, workers)
        yield t


def trajectory(
    phi: EndoSpec,
    f: ElementSet,
    n_max: int,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> TrajectoryTable:
    """Exact sizes of T_1, ..., T_{n_max}; a budget overrun truncates the table.

    Args:
        phi: Endomorphism.
        f: Finite set to start from.
        n_max: Largest horizon.
        budget: Product budget.
        workers: Threads for images and products.

    Returns:
        The size table, with ``truncated`` set when a budget stopped it early.

    Raises:
        FamilyMismatch: If ``f`` lives in another family.
    """
    sizes: list[int] = []
    truncated = False
    try:
        for t in trajectory_sets(phi, f, n_max, budget, workers):
            sizes.append(len(t))
            logger.debug("|T_%d| = %d", len(sizes), len(t))
    except BudgetExceeded as e:
        logger.warning("Trajectory truncated at n=%d: %s", len(sizes), e.message)
        truncated = True
    return TrajectoryTable(tuple(sizes), n_max, truncated, budget)


def h_estimate(table: TrajectoryTable, window: int = DEFAULT_WINDOW) -> EntropyEstimate:
    """Fekete bound, increments and stabilized integer ratio of a trajectory table.

    Args:
        table: Trajectory sizes.
        window: Number of trailing exact ratios that must agree.

    Returns:
        The estimate; ``stabilized_ratio`` is set only for an integer ratio.

    Raises:
        ValueError: If ``window`` is not positive.
        TableTooShort: If the table has at most ``window`` sizes.
    """
    sizes = table.sizes
    if window < 1:
        raise ValueError(f"window must be positive, got {window}")
    if len(sizes) < window + 1:
        raise TableTooShort(
            f"{len(sizes)} trajectory sizes cannot fill a window of {window} ratios",
            details=f"need at least {window + 1}",
        )
    prefix = tuple(math.log(s) / n for n, s in enumerate(sizes, start=1))
    ratios = tuple(Fraction(b, a) for a, b in zip(sizes, sizes[1:]))
    tail = ratios[-window:]
    common = tail[0] if all(r == tail[0] for r in tail) else None
    estimate = EntropyEstimate(table, window, prefix, ratios, common)
    alpha = estimate.stabilized_ratio
    if alpha is not None and any(alpha**n > s for n, s in enumerate(sizes, start=1)):
        # log alpha above the Fekete bound means the horizon is too short
        logger.warning("Stabilized alpha=%d exceeds the prefix bound of %s", alpha, list(sizes))
    if common is not None and alpha is None:
        logger.warning("Trajectory ratio stabilized at non-integer %s", common)
    return estimate


def _rung(phi: EndoSpec, f: FiniteSubgroup, n_max: int, window: int, budget: int, workers: int):
    table = trajectory(phi, f, n_max, budget, workers)
    try:
        return table, h_estimate(table, window)
    except TableTooShort:
        return table, None


def h_ladder(
    phi: EndoSpec,
    ladder: Sequence[FiniteSubgroup],
    n_max: int,
    window: int = DEFAULT_WINDOW,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> LadderReport:
    """Estimates along a ladder, with the running sup of stabilized alphas.

    Rungs run in parallel when ``workers`` > 1; results keep ladder order.
    Monotonicity is checked pointwise between consecutive nested rungs.

    Args:
        phi: Endomorphism.
        ladder: Finite subgroups, usually ascending.
        n_max: Largest horizon per rung.
        window: Ratio window for each estimate.
        budget: Product budget per rung.
        workers: Threads across rungs, or within the single rung.

    Returns:
        Per-rung estimates (None where the table was too short), running sup
        and the monotonicity and truncation flags.
    """
    if workers > 1 and len(ladder) > 1:
        with ThreadPoolExecutor(max_workers=min(workers, len(ladder))) as pool:
            results = list(pool.map(lambda f: _rung(phi, f, n_max, window, budget, 1), ladder))
    else:
        results = [_rung(phi, f, n_max, window, budget, workers) for f in ladder]

    tables = [table for table, _ in results]
    monotone = True
    for i in range(len(ladder) - 1):
        if not ladder[i].members <= ladder[i + 1].members:
            continue
        small, big = tables[i].sizes, tables[i + 1].sizes
        if any(a > b for a, b in zip(small, big)):
            logger.warning("Trajectory sizes decrease along the ladder: %s vs %s", small, big)
            monotone = False

    running: list[int | None] = []
    best: int | None = None
    for _, estimate in results:
        alpha = None if estimate is None else estimate.stabilized_ratio
        if alpha is not None:
            best = alpha if best is None else max(best, alpha)
        running.append(best)
    unresolved = tuple(i for i, (_, e) in enumerate(results) if e is None)
    truncated = any(t.truncated for t in tables)
    return LadderReport(
        tuple(e for _, e in results), tuple(running), monotone, unresolved, truncated
    )


def support_ball_ladder(
    family: GroupFamily,
    radii: Sequence[int],
    symmetric: bool = False,
    budget: int = DEFAULT_BUDGET,
) -> list[FiniteSubgroup]:
    """Subgroups generated by the support balls of each radius."""
    return [closure(family, ball_generators(family, r, symmetric), budget) for r in radii]


def conjugation_check(
    phi: EndoSpec,
    g: GroupElement,
    f: FiniteSubgroup,
    n_max: int,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> ConjugationReport:
    """Compare T_n(phi, F) with T_n(xi phi xi^-1, xi(F)) for xi = Inner(g).

    Conjugate endomorphisms have equal trajectory sizes at every horizon, so
    any disagreement points at a broken endomorphism or set product.

    Args:
        phi: Endomorphism whose trajectory is taken.
        g: Conjugating element; xi is x -> g^-1 x g.
        f: Finite subgroup the trajectories start from.
        n_max: Largest horizon.
        budget: Product budget for each trajectory.
        workers: Threads for set products.

    Returns:
        Both trajectory tables; ``agree`` compares their sizes.

    Raises:
        FamilyMismatch: If g or f lies outside the family of phi.
    """
    family = phi.family
    xi = build_endo(family, Inner(g))
    xi_inv = Inner(inverse(family, g))
    psi = EndoSpec(family, Compose((xi.kind, phi.kind, xi_inv)))
    report = ConjugationReport(
        trajectory(phi, f, n_max, budget, workers),
        trajectory(psi, apply_subgroup(xi, f), n_max, budget, workers),
    )
    if not report.agree:
        logger.warning(
            "Conjugate trajectories differ: %s vs %s", report.original.sizes, report.conjugated.sizes
        )
    return report


def _fmt(x: float) -> str:
    return f"{x:.12g}"


def trajectory_rows(table: TrajectoryTable, window: int = DEFAULT_WINDOW) -> list[list[str]]:
    """One row per horizon: size, log size, running Fekete bound, increment, alpha.

    ``stabilized_alpha`` is filled at horizon n when the ``window`` ratios
    ending at n agree on an integer.
    """
    sizes = table.sizes
    ratios = [Fraction(b, a) for a, b in zip(sizes, sizes[1:])]
    rows = []
    best = math.inf
    for n, size in enumerate(sizes, start=1):
        log_size = math.log(size)
        best = min(best, log_size / n)
        increment = "" if n == 1 else _fmt(math.log(ratios[n - 2]))
        tail = ratios[n - 1 - window : n - 1] if n - 1 >= window else []
        alpha = ""
        if tail and all(r == tail[0] for r in tail) and tail[0].denominator == 1:
            alpha = str(tail[0].numerator)
        rows.append([str(n), str(size), _fmt(log_size), _fmt(best), increment, alpha])
    return rows
