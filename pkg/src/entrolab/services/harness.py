"""Addition Theorem checks, central-extension certificates, chains and dichotomy.

Additivity is decided only on exact integers: a verdict of exact equality or
violation needs all three stabilized ratios. Budget overruns never produce a
violation; they make the check inconclusive.
"""

import logging
from collections.abc import Sequence

import numpy as np

from entrolab.models.element import GroupElement
from entrolab.models.endo import EndoSpec, SubgroupDescriptor
from entrolab.models.entropy import EntropyEstimate, LadderReport, TrajectoryTable
from entrolab.models.errors import BudgetExceeded, NotCentral, NotInvariant, NotStabilized
from entrolab.models.harness import (
    ATReport,
    ATScenario,
    ChainReport,
    DaggerCertificate,
    DaggerStep,
    Verdict,
)
from entrolab.models.subgroup import ElementSet, FiniteSubgroup
from entrolab.services.arithmetic import inverter, multiplier, random_element
from entrolab.services.config import Settings
from entrolab.services.endo import (
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    apply_set,
    describe,
    induced,
    is_invariant,
    mapper,
    project_subgroup,
    pull_subgroup,
    quotient_model,
    restrict,
    sample_member,
)
from entrolab.services.entropy import DEFAULT_WINDOW, h_ladder, trajectory_sets
from entrolab.services.fingen import commuting_closure, factored_product

logger = logging.getLogger(__name__)

TOLERANCE = 1e-9


# =============================================================================
# Addition Theorem
# =============================================================================


def build_at_scenario(
    name: str,
    endo: EndoSpec,
    subgroup: SubgroupDescriptor,
    ladder: Sequence[FiniteSubgroup],
    n_max: int,
    window: int = DEFAULT_WINDOW,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> ATScenario:
    """Check invariance, build the quotient model and both derived endomorphisms.

    Args:
        name: Scenario name for reports and logs.
        endo: Endomorphism of G.
        subgroup: Invariant normal subgroup H.
        ladder: Finite subgroups of G the entropies are taken along.
        n_max: Largest horizon.
        window: Ratio window for the estimates.
        samples: Sampled checks for invariance, models and homomorphisms.
        seed: Seed for the samples.

    Returns:
        The scenario with phi restricted to H and induced on G/H.

    Raises:
        NotInvariant: If H is not invariant under ``endo``.
        UnsupportedQuotient: If no quotient model exists for H.
        NotCompatible: If the induced map fails to commute with the projection.
    """
    restricted = restrict(endo, subgroup, samples, seed)
    model = quotient_model(subgroup, samples, seed)
    return ATScenario(
        name=name,
        endo=endo,
        subgroup=subgroup,
        model=model,
        restricted=restricted,
        induced=induced(endo, model, samples, seed),
        ladder=tuple(ladder),
        n_max=n_max,
        window=window,
    )


def _verdict(g: LadderReport, h: LadderReport, q: LadderReport) -> tuple[Verdict, str]:
    if g.top_stabilized and h.top_stabilized and q.top_stabilized:
        a_g, a_h, a_q = g.sup_alpha, h.sup_alpha, q.sup_alpha
        if a_g == a_h * a_q:
            return Verdict.EXACT_EQUALITY, f"{a_g} = {a_h} * {a_q}"
        return Verdict.VIOLATION, f"{a_g} != {a_h} * {a_q}"
    (g_lo, g_hi), (h_lo, h_hi), (q_lo, q_hi) = g.bounds, h.bounds, q.bounds
    if g_lo <= h_hi + q_hi + TOLERANCE and h_lo + q_lo <= g_hi + TOLERANCE:
        return Verdict.BOUNDS_CONSISTENT, "not all ratios stabilized; entropy bounds overlap"
    return Verdict.INCONCLUSIVE, "not all ratios stabilized; entropy bounds disagree"


def check_at(scenario: ATScenario, budget: int, workers: int = 1) -> ATReport:
    """Compare the entropy ladders of G, H and G/H.

    H rungs are the ladder intersected with H, and G/H rungs are its images in
    the quotient model.

    Args:
        scenario: Prepared AT scenario.
        budget: Product budget per trajectory.
        workers: Threads per ladder.

    Returns:
        The verdict with the three ladder reports; a budget overrun gives
        an inconclusive verdict rather than an error.
    """
    try:
        g = h_ladder(scenario.endo, scenario.ladder, scenario.n_max, scenario.window, budget, workers)
        h_rungs = [pull_subgroup(f, scenario.subgroup) for f in scenario.ladder]
        h = h_ladder(scenario.restricted, h_rungs, scenario.n_max, scenario.window, budget, workers)
        q_rungs = [project_subgroup(f, scenario.model) for f in scenario.ladder]
        q = h_ladder(scenario.induced, q_rungs, scenario.n_max, scenario.window, budget, workers)
    except BudgetExceeded as e:
        logger.warning("%s: %s", scenario.name, e.message)
        return ATReport(scenario.name, Verdict.INCONCLUSIVE, reason=e.message)
    if g.truncated or h.truncated or q.truncated:
        reason = "a budget truncated at least one trajectory"
        logger.warning("%s: %s", scenario.name, reason)
        return ATReport(scenario.name, Verdict.INCONCLUSIVE, g, h, q, reason)
    verdict, reason = _verdict(g, h, q)
    log = logger.error if verdict is Verdict.VIOLATION else logger.info
    log("%s: %s (%s)", scenario.name, verdict.value, reason)
    return ATReport(scenario.name, verdict, g, h, q, reason)


# =============================================================================
# Central-extension counting certificate
# =============================================================================


def check_central(
    sub: SubgroupDescriptor, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED
) -> None:
    """Sampled check that embedded elements commute with the ambient group.

    Raises:
        NotCentral: On the first sampled pair that does not commute.
    """
    times = multiplier(sub.ambient)
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        x = random_element(sub.ambient, rng)
        z = sample_member(sub, rng)
        if times(x, z) != times(z, x):
            raise NotCentral(f"{sub.name} is not central", details=f"{z!r} and {x!r} do not commute")


def _levels(phi: EndoSpec, f: FiniteSubgroup, n_max: int, budget: int):
    """Yield (T_n, witness_n), where witness_n[t] = (prefix in T_{n-1}, factor in phi^{n-1}(F))."""
    t: ElementSet = f
    image: ElementSet = f
    yield t, {x: (None, x) for x in f}
    for _ in range(1, n_max):
        image = apply_set(phi, image, budget)
        t, witness = factored_product(t, image, budget)
        yield t, witness


def check_dagger(
    name: str,
    phi: EndoSpec,
    kernel: SubgroupDescriptor,
    f: FiniteSubgroup,
    n_max: int,
    settings: Settings | None = None,
) -> DaggerCertificate:
    """Build K_n and verify |T_n(phi,F)| <= |T_n(phi_bar,Q)| |T_n(phi|N,K_n)| for n <= n_max.

    Every t in T_n is factored as a_0 ... a_{n-1} with a_i in phi^i(F), following
    the first pair found by the product enumeration. With s the section of the
    quotient model, U_n collects a_i s(pi a_i)^-1 and C_n collects the carries
    s(x) s(y) s(xy)^-1 met while rewriting s(pi a_0) ... s(pi a_{n-1}).

    Args:
        name: Scenario name for reports and logs.
        phi: Endomorphism of G.
        kernel: Central phi-invariant subgroup N.
        f: Finite subgroup F of G.
        n_max: Largest horizon.
        settings: Budgets, samples and seed; defaults when omitted.

    Returns:
        One step per horizon with the three trajectory sizes, the order of
        K_n and the slack, plus the overall ``holds`` and ``truncated`` flags.

    Raises:
        NotCentral: If N does not commute with G on samples.
        NotInvariant: If N is not invariant under phi.
        UnsupportedQuotient: If no quotient model exists for N.
    """
    settings = settings or Settings()
    samples, seed, budget = settings.homomorphism_samples, settings.seed, settings.product_budget
    check_central(kernel, samples, seed)
    if not is_invariant(phi, kernel, samples, seed):
        raise NotInvariant(f"{kernel.name} is not invariant under {describe(phi.kind)}")
    model = quotient_model(kernel, samples, seed)
    phi_bar = induced(phi, model, samples, seed)
    rho = restrict(phi, kernel, samples, seed)
    times, inv = multiplier(phi.family), inverter(phi.family)
    q_times = multiplier(model.target)
    project, lift, rho_map = model.project, model.lift, mapper(rho)

    def carry(x: GroupElement, y: GroupElement) -> GroupElement:
        return times(times(lift(x), lift(y)), inv(lift(q_times(x, y))))

    def lift_error(a: GroupElement) -> GroupElement:
        return times(a, inv(lift(project(a))))

    q = project_subgroup(f, model)
    f_in_kernel = [x for x in f if kernel.contains(x)]
    steps: list[DaggerStep] = []
    levels: list[tuple[ElementSet, dict]] = []
    quotient_sets = trajectory_sets(phi_bar, q, n_max, budget)
    truncated = False
    try:
        for n, (level, l_n) in enumerate(zip(_levels(phi, f, n_max, budget), quotient_sets), start=1):
            levels.append(level)
            # walk the first-found factorizations back from T_n
            reach = set(level[0])
            factors: dict[GroupElement, None] = {}
            pairs: dict[tuple[GroupElement, GroupElement], None] = {}
            for _, witness in reversed(levels):
                prefixes = set()
                for t in reach:
                    prefix, a = witness[t]
                    factors[a] = None
                    if prefix is not None:
                        prefixes.add(prefix)
                        pairs[(project(prefix), project(a))] = None
                reach = prefixes
            if settings.full_corrections and len(l_n) ** 2 <= budget:
                pairs = dict.fromkeys((x, y) for x in l_n for y in l_n)
            corrections = dict.fromkeys(carry(x, y) for x, y in pairs)
            errors = dict.fromkeys(lift_error(a) for a in factors)
            gens = [*f_in_kernel, *corrections, *errors]
            in_kernel = all(kernel.contains(z) for z in gens)
            pulled = [kernel.pull(z) for z in gens if kernel.contains(z)]
            k_n = commuting_closure(kernel.family, pulled, settings.closure_budget)
            # N is abelian, so T_n(rho, K_n) is generated by K_n, rho(K_n), ..., rho^{n-1}(K_n)
            images, orbit = list(k_n.generators), list(k_n.generators)
            for _ in range(1, n):
                images = [rho_map(z) for z in images]
                orbit.extend(images)
            t_kernel = commuting_closure(kernel.family, orbit, budget)
            eta_verified, eta_sample = None, ()
            if settings.record_eta:
                etas = [lift_error(t) for t in level[0]]
                eta_verified = sum(
                    1 for z in etas if kernel.contains(z) and kernel.pull(z) in k_n
                )
                eta_sample = tuple(etas[:5])
            step = DaggerStep(
                n=n,
                trajectory=len(level[0]),
                quotient_trajectory=len(l_n),
                kernel_trajectory=t_kernel.order,
                sections=len(l_n),
                corrections=len(corrections),
                lift_errors=len(errors),
                kernel_order=k_n.order,
                in_kernel=in_kernel,
                eta_verified=eta_verified,
                eta_sample=eta_sample,
            )
            logger.debug("%s n=%d slack=%d", name, n, step.slack)
            if not step.holds:
                logger.error("%s: counting inequality fails at n=%d", name, n)
            steps.append(step)
    except BudgetExceeded as e:
        logger.warning("%s: certificate truncated after n=%d: %s", name, len(steps), e.message)
        truncated = True
    return DaggerCertificate(name, f.order, q.order, tuple(steps), truncated)


# =============================================================================
# Subadditivity, chains, dichotomy
# =============================================================================


def fekete_violations(table: TrajectoryTable) -> list[tuple[int, int]]:
    """Pairs (n, m) with |T_{n+m}| > |T_n| |T_m|."""
    sizes = table.sizes
    return [
        (n, m)
        for n in range(1, len(sizes))
        for m in range(1, len(sizes) - n + 1)
        if sizes[n + m - 1] > sizes[n - 1] * sizes[m - 1]
    ]


def check_fekete(table: TrajectoryTable) -> bool:
    """Whether the sizes are submultiplicative; failures are logged."""
    violations = fekete_violations(table)
    if violations:
        logger.error("Subadditivity fails on %s at %s", list(table.sizes), violations)
    return not violations


def check_chain_sup(
    name: str,
    phi: EndoSpec,
    chain: Sequence[SubgroupDescriptor],
    ladder: Sequence[FiniteSubgroup],
    n_max: int,
    window: int = DEFAULT_WINDOW,
    settings: Settings | None = None,
) -> ChainReport:
    """Entropy of phi restricted to each chain term, against the full ladder.

    Args:
        name: Scenario name for reports and logs.
        phi: Endomorphism of G.
        chain: Ascending phi-invariant subgroups.
        ladder: Finite subgroups of G; each term uses its intersection with them.
        n_max: Largest horizon.
        window: Ratio window for the estimates.
        settings: Budgets, samples, seed and threads; defaults when omitted.

    Returns:
        Per-term ladder reports, the full ladder and the nesting flag.

    Raises:
        NotInvariant: If a chain term is not invariant under phi.
    """
    settings = settings or Settings()
    samples, seed = settings.homomorphism_samples, settings.seed
    budget, workers = settings.product_budget, settings.threads
    reports = []
    pulled_top = []
    for term in chain:
        rho = restrict(phi, term, samples, seed)
        rungs = [pull_subgroup(f, term) for f in ladder]
        pulled_top.append({term.embed(x) for x in rungs[-1]} if rungs else set())
        reports.append(h_ladder(rho, rungs, n_max, window, budget, workers))
    ascending = all(a <= b for a, b in zip(pulled_top, pulled_top[1:]))
    full = h_ladder(phi, ladder, n_max, window, budget, workers)
    report = ChainReport(name, tuple(term.name for term in chain), tuple(reports), full, ascending)
    if not report.monotone:
        logger.error("%s: chain entropies decrease: %s", name, report.alphas)
    return report


def check_dichotomy(estimate: EntropyEstimate) -> bool:
    """Whether the stabilized growth ratio is a positive integer.

    Raises:
        NotStabilized: If the trailing ratios never agreed.
    """
    if estimate.common_ratio is None:
        raise NotStabilized(
            "trajectory ratios did not stabilize",
            details=f"ratios {[str(r) for r in estimate.ratios]}",
        )
    ratio = estimate.common_ratio
    return ratio.denominator == 1 and ratio.numerator >= 1

