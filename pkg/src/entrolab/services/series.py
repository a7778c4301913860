"""Center, commutators, central and derived series, n-torsion subgroups."""

import logging
import math

from entrolab.models.group import MAX_TABLE_ORDER, DirectSumFamily, FiniteFamily, GroupFamily
from entrolab.models.series import SeriesKind, SeriesReport
from entrolab.models.subgroup import FiniteSubgroup
from entrolab.services.arithmetic import (
    DEFAULT_ORDER_CAP,
    commutator,
    element_order,
    identity,
    multiplier,
    power,
)
from entrolab.services.fingen import DEFAULT_BUDGET, closure, quotient_table
from entrolab.services.tables import whole_group

logger = logging.getLogger(__name__)


def trivial(family: GroupFamily) -> FiniteSubgroup:
    return FiniteSubgroup(family, (identity(family),))


def center(k: FiniteSubgroup) -> FiniteSubgroup:
    """{z in k : zx = xz for all x in k}."""
    times = multiplier(k.family)
    elements = tuple(z for z in k if all(times(z, x) == times(x, z) for x in k))
    return FiniteSubgroup(k.family, elements, generators=elements)


def commutator_subgroup(
    a: FiniteSubgroup, b: FiniteSubgroup, budget: int = DEFAULT_BUDGET
) -> FiniteSubgroup:
    """[a, b], the closure of all commutators x^-1 y^-1 x y."""
    family = a.family
    gens = dict.fromkeys(commutator(family, x, y) for x in a for y in b)
    return closure(family, list(gens), budget)


def _stabilize(
    kind: SeriesKind, first: FiniteSubgroup, step, done
) -> SeriesReport:
    terms = [first]
    while True:
        nxt = step(terms[-1])
        if nxt.same_elements(terms[-1]):
            break
        terms.append(nxt)
    length = len(terms) - 1 if done(terms[-1]) else None
    logger.debug("%s series orders %s", kind.value, [t.order for t in terms])
    return SeriesReport(kind, tuple(terms), length)


def lower_central_series(k: FiniteSubgroup, budget: int = DEFAULT_BUDGET) -> SeriesReport:
    """gamma_1 = k, gamma_{i+1} = [gamma_i, k]."""
    return _stabilize(
        SeriesKind.LOWER_CENTRAL,
        k,
        lambda term: commutator_subgroup(term, k, budget),
        lambda last: last.order == 1,
    )


def derived_series(k: FiniteSubgroup, budget: int = DEFAULT_BUDGET) -> SeriesReport:
    return _stabilize(
        SeriesKind.DERIVED,
        k,
        lambda term: commutator_subgroup(term, term, budget),
        lambda last: last.order == 1,
    )


def _next_upper_term(k: FiniteSubgroup, z: FiniteSubgroup) -> FiniteSubgroup:
    """Preimage in k of the center of k/z."""
    if k.order // z.order <= MAX_TABLE_ORDER:
        q = quotient_table(k, z)
        quotient_center = center(whole_group(q.table))
        central_cosets = {x.index for x in quotient_center}
        elements = tuple(x for x in k if q.project(x) in central_cosets)
    else:
        # quotient too large for a table: x is central mod z iff [x, g] in z for all g
        logger.debug("quotient of order %d handled without a table", k.order // z.order)
        elements = tuple(x for x in k if all(commutator(k.family, x, g) in z for g in k))
    return FiniteSubgroup(k.family, elements, generators=elements)


def upper_central_series(k: FiniteSubgroup) -> SeriesReport:
    """Z_0 = 1, Z_{i+1}/Z_i = Z(k/Z_i)."""
    return _stabilize(
        SeriesKind.UPPER_CENTRAL,
        trivial(k.family),
        lambda term: _next_upper_term(k, term),
        lambda last: last.order == k.order,
    )


def n_torsion_subgroup(k: FiniteSubgroup, n: int, budget: int = DEFAULT_BUDGET) -> FiniteSubgroup:
    """k[n], generated by the elements x of k with x^n = 1."""
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    e = identity(k.family)
    gens = [x for x in k if x != e and power(k.family, x, n) == e]
    return closure(k.family, gens, budget)


def exponent(k: FiniteSubgroup, cap: int = DEFAULT_ORDER_CAP) -> int:
    """Least common multiple of the element orders of k.

    Raises:
        OrderBudgetExceeded: If some element has order above ``cap``.
    """
    return math.lcm(*(element_order(k.family, x, cap) for x in k))


def series(kind: SeriesKind, k: FiniteSubgroup, budget: int = DEFAULT_BUDGET) -> SeriesReport:
    match kind:
        case SeriesKind.LOWER_CENTRAL:
            return lower_central_series(k, budget)
        case SeriesKind.UPPER_CENTRAL:
            return upper_central_series(k)
        case SeriesKind.DERIVED:
            return derived_series(k, budget)


def table_indices(k: FiniteSubgroup) -> list[int]:
    """Sorted table indices of a subgroup of a Finite family."""
    if not isinstance(k.family, FiniteFamily):
        raise TypeError(f"{k.family.name} is not a table family")
    return sorted(x.index for x in k)


def family_metadata(family: GroupFamily) -> dict:
    """Abelian flag and, for table-backed families, nilpotency class of the table."""
    match family:
        case FiniteFamily(table=table) | DirectSumFamily(base=table):
            report = lower_central_series(whole_group(table))
            return {
                "name": family.name,
                "is_abelian": table.is_abelian,
                "base_order": table.order,
                "base_nilpotency_class": report.group_class,
            }
    return {"name": family.name, "is_abelian": False}

