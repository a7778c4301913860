"""Finitely generated finite subgroups: closure, set products, normality, quotients."""

import logging
from collections.abc import Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from entrolab.models.element import GroupElement
from entrolab.models.errors import (
    ClosureBudgetExceeded,
    FamilyMismatch,
    NotContained,
    NotNormal,
    ProductBudgetExceeded,
)
from entrolab.models.group import BaseGroupTable, GroupFamily
from entrolab.models.subgroup import ElementSet, FiniteSubgroup, QuotientTable
from entrolab.services.arithmetic import (
    identity,
    inverter,
    multiplier,
    require_family,
    sort_key,
)

logger = logging.getLogger(__name__)

DEFAULT_BUDGET = 10_000_000


def element_set(family: GroupFamily, elements: Iterable[GroupElement]) -> ElementSet:
    """Deduplicated set of ``elements``, keeping first-seen order."""
    return ElementSet(family, tuple(dict.fromkeys(elements)))


def closure(
    family: GroupFamily,
    gens: Sequence[GroupElement],
    budget: int = DEFAULT_BUDGET,
) -> FiniteSubgroup:
    """The subgroup generated by ``gens``, by breadth-first saturation.

    The frontier is multiplied on the right by the generators and their
    inverses; enumeration order is deterministic.

    Args:
        family: Group family the generators belong to.
        gens: Generators; the identity and repeats are ignored.
        budget: Largest subgroup order allowed.

    Returns:
        The generated subgroup, identity first.

    Raises:
        FamilyMismatch: If a generator belongs to another family.
        ClosureBudgetExceeded: As soon as more than ``budget`` elements are found.
    """
    require_family(family, *gens)
    times, inv = multiplier(family), inverter(family)
    e = identity(family)
    steps = list(dict.fromkeys([g for g in gens if g != e] + [inv(g) for g in gens if g != e]))
    seen = {e: None}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in steps:
                y = times(x, g)
                if y not in seen:
                    seen[y] = None
                    nxt.append(y)
                    if len(seen) > budget:
                        raise ClosureBudgetExceeded(budget, len(seen))
        frontier = nxt
    logger.debug("closure of %d generators in %s: %d elements", len(gens), family.name, len(seen))
    return FiniteSubgroup(family, tuple(seen), generators=tuple(gens))


def commuting_closure(
    family: GroupFamily,
    gens: Iterable[GroupElement],
    budget: int = DEFAULT_BUDGET,
) -> FiniteSubgroup:
    """The subgroup generated by pairwise commuting ``gens``.

    Each generator g outside the current subgroup T extends it to the union of
    the cosets T g^j; work is proportional to the result, not to |T| |gens|.

    Args:
        family: Group family the generators belong to.
        gens: Pairwise commuting generators of finite order.
        budget: Largest subgroup order allowed.

    Returns:
        The generated subgroup; ``generators`` keeps only the ones used.

    Raises:
        ClosureBudgetExceeded: If a coset extension passes ``budget``.
    """
    times = multiplier(family)
    e = identity(family)
    current: dict[GroupElement, None] = {e: None}
    used = []
    for g in gens:
        if g in current:
            continue
        used.append(g)
        base = list(current)
        members = set(base)
        step = g
        while step not in members:
            for x in base:
                current[times(x, step)] = None
            if len(current) > budget:
                raise ClosureBudgetExceeded(budget, len(current))
            step = times(step, g)
    return FiniteSubgroup(family, tuple(current), generators=tuple(used))


def _check_same_family(a: ElementSet, b: ElementSet) -> None:
    if a.family != b.family:
        raise FamilyMismatch(f"{a.family.name} and {b.family.name} differ")


def _product_chunk(
    family: GroupFamily, chunk: Sequence[GroupElement], right: Sequence[GroupElement], budget: int
) -> dict[GroupElement, None]:
    times = multiplier(family)
    out: dict[GroupElement, None] = {}
    for a in chunk:
        for b in right:
            out[times(a, b)] = None
        if len(out) > budget:
            raise ProductBudgetExceeded(budget, len(out))
    return out


def set_product(
    left: ElementSet,
    right: ElementSet,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> ElementSet:
    """{ab : a in left, b in right}, deduplicated.

    With ``workers`` > 1 the left factor is split into contiguous chunks whose
    partial results are merged in chunk order, so the enumeration order matches
    the sequential one.

    Args:
        left: Left factor.
        right: Right factor.
        budget: Largest product size allowed.
        workers: Threads to split the left factor over.

    Returns:
        The product set in first-seen order.

    Raises:
        FamilyMismatch: If the factors live in different families.
        ProductBudgetExceeded: If the product passes ``budget``.
    """
    _check_same_family(left, right)
    if workers <= 1 or len(left) < 2 * workers:
        merged = _product_chunk(left.family, left.elements, right.elements, budget)
    else:
        bounds = np.linspace(0, len(left), workers + 1, dtype=int)
        chunks = [left.elements[lo:hi] for lo, hi in zip(bounds[:-1], bounds[1:], strict=True)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(
                pool.map(lambda c: _product_chunk(left.family, c, right.elements, budget), chunks)
            )
        merged = {}
        for part in parts:
            merged.update(part)
            if len(merged) > budget:
                raise ProductBudgetExceeded(budget, len(merged))
    return ElementSet(left.family, tuple(merged))


def factored_product(
    left: ElementSet,
    right: ElementSet,
    budget: int = DEFAULT_BUDGET,
) -> tuple[ElementSet, dict[GroupElement, tuple[GroupElement, GroupElement]]]:
    """set_product plus, for each product, the first (a, b) that produced it.

    Args:
        left: Left factor.
        right: Right factor.
        budget: Largest product size allowed.

    Returns:
        The product set and a map from each product to its witness pair.

    Raises:
        FamilyMismatch: If the factors live in different families.
        ProductBudgetExceeded: If the product passes ``budget``.
    """
    _check_same_family(left, right)
    times = multiplier(left.family)
    witness: dict[GroupElement, tuple[GroupElement, GroupElement]] = {}
    for a in left.elements:
        for b in right.elements:
            ab = times(a, b)
            if ab not in witness:
                witness[ab] = (a, b)
        if len(witness) > budget:
            raise ProductBudgetExceeded(budget, len(witness))
    return ElementSet(left.family, tuple(witness)), witness


def is_subgroup(s: ElementSet) -> bool:
    """Exact check: contains the identity, closed under products and inverses."""
    if identity(s.family) not in s:
        return False
    times, inv = multiplier(s.family), inverter(s.family)
    if any(inv(x) not in s for x in s):
        return False
    return all(times(x, y) in s for x in s for y in s)


def is_normal_in(h: FiniteSubgroup, k: FiniteSubgroup) -> bool:
    """Whether h is normal in k, by a full conjugation sweep.

    Args:
        h: Candidate normal subgroup.
        k: Ambient subgroup.

    Returns:
        True when g^-1 x g lies in h for every g in k and x in h.

    Raises:
        FamilyMismatch: If h and k live in different families.
        NotContained: If h is not a subset of k.
    """
    _check_same_family(h, k)
    if not h.members <= k.members:
        raise NotContained(f"subgroup of order {h.order} is not contained in subgroup of order {k.order}")
    times, inv = multiplier(k.family), inverter(k.family)
    for g in k:
        g_inv = inv(g)
        for x in h:
            if times(times(g_inv, x), g) not in h:
                return False
    return True


def quotient_table(k: FiniteSubgroup, n: FiniteSubgroup) -> QuotientTable:
    """Cayley table of k/n with canonical-minimal coset representatives.

    Args:
        k: Ambient finite subgroup.
        n: Normal subgroup of k.

    Returns:
        The quotient table, its representatives in ``sort_key`` order (the
        identity coset first) and the coset index of every element of k.

    Raises:
        NotNormal: If n is not normal in k.
        NotContained: If n is not a subset of k.
    """
    if not is_normal_in(n, k):
        raise NotNormal(f"subgroup of order {n.order} is not normal in subgroup of order {k.order}")
    if k.order % n.order:
        raise AssertionError(f"Lagrange violated: {n.order} does not divide {k.order}")
    times, inv = multiplier(k.family), inverter(k.family)
    cosets: list[list[GroupElement]] = []
    assigned: dict[GroupElement, int] = {}
    for x in k:
        if x in assigned:
            continue
        coset = [times(x, y) for y in n]
        for y in coset:
            assigned[y] = len(cosets)
        cosets.append(coset)
    reps = [min(coset, key=sort_key) for coset in cosets]
    order = sorted(range(len(reps)), key=lambda i: sort_key(reps[i]))
    renumber = {old: new for new, old in enumerate(order)}
    representatives = tuple(reps[i] for i in order)
    coset_of = {x: renumber[c] for x, c in assigned.items()}
    size = len(representatives)
    table = np.zeros((size, size), dtype=np.int64)
    for i, a in enumerate(representatives):
        for j, b in enumerate(representatives):
            table[i, j] = coset_of[times(a, b)]
    inverses = np.array([coset_of[inv(a)] for a in representatives], dtype=np.int64)
    name = f"Q{k.order}/{n.order}"
    return QuotientTable(BaseGroupTable(name, table, inverses), representatives, coset_of)
