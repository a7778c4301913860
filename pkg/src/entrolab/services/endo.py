"""Endomorphisms: construction, application, invariance, restriction and quotients.

Infinite invariant subgroups are handled through ``SubgroupDescriptor`` objects
(a membership predicate plus an embedding of a concrete family), and quotients
through hand-coded ``QuotientModel`` objects. Homomorphism properties of maps on
infinite families are verified by fixed-seed sampling; table maps are checked
exhaustively.
"""

import logging
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from entrolab.models.element import BaseElem, DirectSumElem, FinitaryUTElem, GroupElement, PolyHeisElem
from entrolab.models.endo import (
    Compose,
    Diagonal,
    EndoKind,
    EndoSpec,
    Identity,
    Induced,
    Inner,
    QuotientModel,
    Restricted,
    Shift,
    SubgroupDescriptor,
    TScale,
)
from entrolab.models.errors import (
    FamilyMismatch,
    NotCompatible,
    NotHomomorphism,
    NotInvariant,
    ProductBudgetExceeded,
    UnsupportedEndo,
    UnsupportedQuotient,
    UnsupportedRestriction,
)
from entrolab.models.group import (
    BaseGroupTable,
    DirectSumFamily,
    FinitaryUTFamily,
    FiniteFamily,
    GroupFamily,
    PolyHeisenbergFamily,
)
from entrolab.models.subgroup import ElementSet, FiniteSubgroup
from entrolab.services import series
from entrolab.services.arithmetic import (
    check_element,
    identity,
    inverter,
    multiplier,
    poly_shift,
    random_element,
    require_family,
)
from entrolab.services.fingen import DEFAULT_BUDGET, quotient_table
from entrolab.services.tables import cyclic, direct_product, subtable, whole_group

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 1000
DEFAULT_SEED = 20240601

Map = Callable[[GroupElement], GroupElement]


# =============================================================================
# Compiling endomorphisms to plain functions
# =============================================================================


def _shift(family: GroupFamily, k: int) -> Map:
    match family:
        case DirectSumFamily():
            return lambda x: DirectSumElem(tuple((i + k, v) for i, v in x.support))
        case PolyHeisenbergFamily():
            # k-th power of t-scaling; the product term moves by 2k
            return lambda x: PolyHeisElem(
                poly_shift(x.a, k), poly_shift(x.b, k), poly_shift(x.c, 2 * k)
            )
        case FinitaryUTFamily():
            if k < 0:
                raise UnsupportedEndo(f"Shift({k}) leaves the index range of {family.name}")
            return lambda x: FinitaryUTElem(tuple((i + k, j + k, v) for i, j, v in x.entries))
    raise UnsupportedEndo(f"Shift is not defined on {family.name}")


def _diagonal(family: GroupFamily, mapping: tuple[int, ...]) -> Map:
    match family:
        case FiniteFamily():
            return lambda x: BaseElem(mapping[x.index])
        case DirectSumFamily():
            return lambda x: DirectSumElem(
                tuple((i, mapping[v]) for i, v in x.support if mapping[v])
            )
    raise UnsupportedEndo(f"Diagonal is not defined on {family.name}")


def _compile(family: GroupFamily, kind: EndoKind) -> Map:
    match kind:
        case Identity():
            return lambda x: x
        case Shift(k=k):
            return _shift(family, k)
        case TScale():
            if not isinstance(family, PolyHeisenbergFamily):
                raise UnsupportedEndo(f"TScale is not defined on {family.name}")
            return _shift(family, 1)
        case Diagonal(mapping=mapping):
            return _diagonal(family, mapping)
        case Inner(g=g):
            times = multiplier(family)
            g_inv = inverter(family)(g)
            return lambda x: times(times(g_inv, x), g)
        case Compose(parts=parts):
            maps = [_compile(family, part) for part in reversed(parts)]

            def composed(x: GroupElement) -> GroupElement:
                for f in maps:
                    x = f(x)
                return x

            return composed
        case Restricted(endo=endo, subgroup=sub):
            outer = _compile(endo.family, endo.kind)
            return lambda x: sub.pull(outer(sub.embed(x)))
        case Induced(endo=endo, model=model):
            outer = _compile(endo.family, endo.kind)
            return lambda y: model.project(outer(model.lift(y)))
    raise UnsupportedEndo(f"Unknown endomorphism kind: {kind!r}")


def mapper(phi: EndoSpec) -> Map:
    """Unchecked application of ``phi`` for hot loops."""
    return _compile(phi.family, phi.kind)


# =============================================================================
# Construction
# =============================================================================


def _check_kind(family: GroupFamily, kind: EndoKind) -> None:
    match kind:
        case Diagonal(mapping=mapping):
            if not isinstance(family, FiniteFamily | DirectSumFamily):
                raise UnsupportedEndo(f"Diagonal is not defined on {family.name}")
            table = family.table if isinstance(family, FiniteFamily) else family.base
            _check_table_endo(table, mapping)
        case Inner(g=g):
            check_element(family, g)
        case Compose(parts=parts):
            for part in parts:
                _check_kind(family, part)
        case Restricted(subgroup=sub):
            if sub.family != family:
                raise UnsupportedEndo(f"restriction lives on {sub.family.name}, not {family.name}")
        case Induced(model=model):
            if model.target != family:
                raise UnsupportedEndo(f"induced map lives on {model.target.name}, not {family.name}")
        case _:
            _compile(family, kind)


def _check_table_endo(table: BaseGroupTable, mapping: tuple[int, ...]) -> None:
    """Exhaustive check that an index map is an endomorphism of ``table``."""
    if len(mapping) != table.order or any(not 0 <= v < table.order for v in mapping):
        raise NotHomomorphism(f"map must send the {table.order} elements of {table.name} into it")
    m = np.asarray(mapping)
    if not np.array_equal(m[table.mul], table.mul[m[:, None], m[None, :]]):
        raise NotHomomorphism(f"index map is not an endomorphism of {table.name}")


def sampler(family: GroupFamily, kind: EndoKind | None = None) -> Callable[[np.random.Generator], GroupElement]:
    """Random elements of the domain of a map on ``family``."""
    if isinstance(kind, Induced):
        source, project = kind.model.source, kind.model.project
        return lambda rng: project(random_element(source, rng))
    return lambda rng: random_element(family, rng)


def _sample_pairs(family: GroupFamily, kind: EndoKind | None, samples: int, seed: int):
    rng = np.random.default_rng(seed)
    draw = sampler(family, kind)
    for _ in range(samples):
        yield draw(rng), draw(rng)


def verify_homomorphism(
    family: GroupFamily,
    f: Map,
    target: GroupFamily,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
    kind: EndoKind | None = None,
    what: str = "map",
) -> None:
    """f(xy) == f(x) f(y) on every pair for tables, on sampled pairs otherwise.

    Args:
        family: Domain family.
        f: Map to check.
        target: Codomain family.
        samples: Number of random pairs for infinite domains.
        seed: Seed for the sampled pairs.
        kind: Endomorphism kind, used to pick a sampler that stays in its domain.
        what: Name used in the error message.

    Raises:
        NotHomomorphism: On the first pair where the identity fails.
    """
    times, times_target = multiplier(family), multiplier(target)
    if isinstance(family, FiniteFamily):
        elements = [BaseElem(i) for i in range(family.table.order)]
        pairs = ((x, y) for x in elements for y in elements)
    else:
        pairs = _sample_pairs(family, kind, samples, seed)
    for x, y in pairs:
        if f(times(x, y)) != times_target(f(x), f(y)):
            raise NotHomomorphism(
                f"{what} on {family.name} is not a homomorphism",
                details=f"fails on {x!r} and {y!r}",
            )


def build_endo(
    family: GroupFamily,
    kind: EndoKind,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> EndoSpec:
    """Validate ``kind`` on ``family`` and verify it is a homomorphism.

    Args:
        family: Group family the endomorphism acts on.
        kind: Endomorphism description.
        samples: Sampled pairs for the homomorphism check.
        seed: Seed for the sampled pairs.

    Returns:
        The checked endomorphism.

    Raises:
        UnsupportedEndo: If ``kind`` is not defined on ``family``.
        InvalidElement: If an Inner conjugator is not a canonical element.
        NotHomomorphism: If a sampled pair breaks multiplicativity.
    """
    _check_kind(family, kind)
    spec = EndoSpec(family, kind)
    verify_homomorphism(family, mapper(spec), family, samples, seed, kind, what=describe(kind))
    return spec


def compose(*endos: EndoSpec) -> EndoSpec:
    """Compose right to left: compose(f, g) applies g first.

    Raises:
        UnsupportedEndo: If the endomorphisms act on different families.
    """
    family = endos[0].family
    for endo in endos:
        if endo.family != family:
            raise UnsupportedEndo("cannot compose endomorphisms of different families")
    return EndoSpec(family, Compose(tuple(endo.kind for endo in endos)))


def describe(kind: EndoKind) -> str:
    """Short human-readable name of an endomorphism kind."""
    match kind:
        case Identity():
            return "identity"
        case Shift(k=k):
            return f"shift({k})"
        case TScale():
            return "t_scale"
        case Diagonal(mapping=mapping):
            return f"diagonal({list(mapping)})"
        case Inner():
            return "inner"
        case Compose(parts=parts):
            return "compose(" + ", ".join(describe(p) for p in parts) + ")"
        case Restricted(endo=endo, subgroup=sub):
            return f"{describe(endo.kind)} restricted to {sub.name}"
        case Induced(endo=endo, model=model):
            return f"{describe(endo.kind)} induced on {model.name}"
    return repr(kind)


# =============================================================================
# Application
# =============================================================================


def apply(phi: EndoSpec, x: GroupElement) -> GroupElement:
    """phi(x).

    Raises:
        FamilyMismatch: If x is not an element of the family of phi.
    """
    require_family(phi.family, x)
    return mapper(phi)(x)


def _image_chunk(f: Map, chunk: Sequence[GroupElement]) -> dict[GroupElement, None]:
    return dict.fromkeys(f(x) for x in chunk)


def apply_set(
    phi: EndoSpec,
    a: ElementSet,
    budget: int = DEFAULT_BUDGET,
    workers: int = 1,
) -> ElementSet:
    """The image phi(a), deduplicated, in the enumeration order of ``a``.

    Args:
        phi: Endomorphism to apply.
        a: Finite element set in the family of phi.
        budget: Largest input size allowed.
        workers: Threads to split ``a`` over.

    Returns:
        The image set.

    Raises:
        FamilyMismatch: If ``a`` lives in another family.
        ProductBudgetExceeded: If ``a`` is larger than ``budget``.
    """
    if a.family != phi.family:
        raise FamilyMismatch(f"{a.family.name} set under an endomorphism of {phi.family.name}")
    if len(a) > budget:
        raise ProductBudgetExceeded(budget, len(a))
    f = mapper(phi)
    if workers <= 1 or len(a) < 2 * workers:
        image = _image_chunk(f, a.elements)
    else:
        bounds = np.linspace(0, len(a), workers + 1, dtype=int)
        chunks = [a.elements[lo:hi] for lo, hi in zip(bounds[:-1], bounds[1:], strict=True)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda c: _image_chunk(f, c), chunks))
        image = {}
        for part in parts:
            image.update(part)
    return ElementSet(phi.family, tuple(image))


def apply_subgroup(phi: EndoSpec, k: FiniteSubgroup) -> FiniteSubgroup:
    """phi(k); the image of a subgroup is a subgroup."""
    f = mapper(phi)
    return FiniteSubgroup(
        phi.family,
        tuple(dict.fromkeys(f(x) for x in k)),
        generators=tuple(f(g) for g in k.generators),
    )


# =============================================================================
# Subgroup descriptors
# =============================================================================


def coordinatewise(family: DirectSumFamily, indices: Sequence[int], name: str) -> SubgroupDescriptor:
    """The direct sum of copies of a subgroup N of the base table, N given by indices."""
    table, to_base = subtable(family.base, indices, name=f"{family.base.name}|{name}")
    from_base = {b: i for i, b in enumerate(to_base)}
    members = frozenset(to_base)
    base = whole_group(family.base)
    sub = FiniteSubgroup(base.family, tuple(BaseElem(i) for i in to_base))
    central = sub.members <= series.center(base).members
    return SubgroupDescriptor(
        name=name,
        kind="coordinatewise",
        ambient=family,
        family=DirectSumFamily(table),
        contains=lambda x: all(v in members for _, v in x.support),
        embed=lambda y: DirectSumElem(tuple((i, to_base[v]) for i, v in y.support)),
        pull=lambda x: DirectSumElem(tuple((i, from_base[v]) for i, v in x.support)),
        central=central,
        params={"indices": list(to_base)},
    )


def _table_subgroup(family: DirectSumFamily | FiniteFamily, what: str, n: int | None = None) -> list[int]:
    table = family.base if isinstance(family, DirectSumFamily) else family.table
    k = whole_group(table)
    match what:
        case "center":
            sub = series.center(k)
        case "torsion":
            sub = series.n_torsion_subgroup(k, n)
        case "upper_central":
            terms = series.upper_central_series(k).terms
            sub = terms[min(n, len(terms) - 1)]
        case "lower_central_last":
            terms = series.lower_central_series(k).terms
            nontrivial = [t for t in terms if t.order > 1]
            sub = nontrivial[-1] if nontrivial else terms[-1]
        case _:
            raise UnsupportedRestriction(f"Unknown subgroup kind: {what}")
    return series.table_indices(sub)


def direct_sum_center(family: DirectSumFamily) -> SubgroupDescriptor:
    """Z(B) in every coordinate; it is the center of the direct sum."""
    return coordinatewise(family, _table_subgroup(family, "center"), "center")


def direct_sum_torsion(family: DirectSumFamily, n: int) -> SubgroupDescriptor:
    return coordinatewise(family, _table_subgroup(family, "torsion", n), f"torsion[{n}]")


def direct_sum_upper_central(family: DirectSumFamily, n: int) -> SubgroupDescriptor:
    return coordinatewise(family, _table_subgroup(family, "upper_central", n), f"upper_central[{n}]")


def direct_sum_lower_central_last(family: DirectSumFamily) -> SubgroupDescriptor:
    return coordinatewise(family, _table_subgroup(family, "lower_central_last"), "lower_central_last")


def _nonnegative(x: DirectSumElem) -> DirectSumElem:
    """Relabel coordinates injectively into the nonnegative integers."""
    return DirectSumElem(tuple(sorted((2 * i if i >= 0 else -2 * i - 1, v) for i, v in x.support)))


def half_line(family: DirectSumFamily, start: int = 0) -> SubgroupDescriptor:
    """Elements supported on indices >= start, embedded by translation from index 0."""
    return SubgroupDescriptor(
        name=f"half_line[{start}]",
        kind="half_line",
        ambient=family,
        family=family,
        contains=lambda x: all(i >= start for i, _ in x.support),
        embed=lambda y: DirectSumElem(tuple((i + start, v) for i, v in y.support)),
        pull=lambda x: DirectSumElem(tuple((i - start, v) for i, v in x.support)),
        central=family.base.is_abelian,
        params={"start": start},
        sample=lambda rng: _nonnegative(random_element(family, rng)),
    )


def heis_center(family: PolyHeisenbergFamily) -> SubgroupDescriptor:
    """The center {(0, 0, c)}, realized as DirectSum(Z_p) on the c-coefficients."""
    return SubgroupDescriptor(
        name="center",
        kind="heis_center",
        ambient=family,
        family=DirectSumFamily(cyclic(family.p)),
        contains=lambda x: not x.a and not x.b,
        embed=lambda y: PolyHeisElem(c=y.support),
        pull=lambda x: DirectSumElem(x.c),
        central=True,
    )


def finite_descriptor(k: FiniteSubgroup, name: str) -> SubgroupDescriptor:
    """A subgroup of a table family, as a descriptor onto its own table."""
    if not isinstance(k.family, FiniteFamily):
        raise UnsupportedRestriction(f"{k.family.name} is not a table family")
    table, to_base = subtable(k.family.table, [x.index for x in k], name=f"{k.family.table.name}|{name}")
    from_base = {b: i for i, b in enumerate(to_base)}
    members = frozenset(to_base)
    ambient = whole_group(k.family.table)
    return SubgroupDescriptor(
        name=name,
        kind="finite",
        ambient=k.family,
        family=FiniteFamily(table),
        contains=lambda x: x.index in members,
        embed=lambda y: BaseElem(to_base[y.index]),
        pull=lambda x: BaseElem(from_base[x.index]),
        central=k.members <= series.center(ambient).members,
        params={"indices": list(to_base)},
    )


def finite_table_descriptor(family: FiniteFamily, what: str, n: int | None = None) -> SubgroupDescriptor:
    """center, torsion[n], upper_central[n] or lower_central_last of a table group."""
    indices = _table_subgroup(family, what, n)
    sub = FiniteSubgroup(family, tuple(BaseElem(i) for i in indices))
    return finite_descriptor(sub, what if n is None else f"{what}[{n}]")


def corner(family: FinitaryUTFamily, k: int) -> SubgroupDescriptor:
    """UT_k(F_p), the matrices supported in the top-left k x k corner."""

    def sample(rng: np.random.Generator) -> FinitaryUTElem:
        x = random_element(family, rng)
        return FinitaryUTElem(tuple(e for e in x.entries if e[1] <= k))

    return SubgroupDescriptor(
        name=f"UT{k}",
        kind="corner",
        ambient=family,
        family=family,
        contains=lambda x: all(j <= k for _, j, _ in x.entries),
        embed=lambda x: x,
        pull=lambda x: x,
        params={"size": k},
        sample=sample,
    )


# =============================================================================
# Invariance and restriction
# =============================================================================


def sample_member(sub: SubgroupDescriptor, rng: np.random.Generator) -> GroupElement:
    """A random element of the ambient group lying in ``sub``."""
    y = sub.sample(rng) if sub.sample is not None else random_element(sub.family, rng)
    return sub.embed(y)


def is_invariant(
    phi: EndoSpec,
    h: FiniteSubgroup | SubgroupDescriptor,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> bool:
    """phi(h) within h: exact for finite subgroups, sampled for descriptors.

    Args:
        phi: Endomorphism.
        h: Finite subgroup, or descriptor of a possibly infinite one.
        samples: Sampled members of a descriptor.
        seed: Seed for the samples.

    Returns:
        False on the first member mapped outside h.

    Raises:
        NotInvariant: If the descriptor lives in another ambient family.
    """
    f = mapper(phi)
    if isinstance(h, FiniteSubgroup):
        return all(f(x) in h for x in h)
    if h.ambient != phi.family:
        raise NotInvariant(f"{h.name} is a subgroup of {h.ambient.name}, not {phi.family.name}")
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        x = sample_member(h, rng)
        if not h.contains(f(x)):
            logger.debug("%s leaves %s at %r", describe(phi.kind), h.name, x)
            return False
    return True


def _restricted_kind(kind: EndoKind, sub: SubgroupDescriptor) -> EndoKind | None:
    """A native kind on the descriptor family agreeing with ``kind``, if one is known."""
    match kind:
        case Identity():
            return Identity()
        case Compose(parts=parts):
            simplified = [_restricted_kind(part, sub) for part in parts]
            return None if any(p is None for p in simplified) else Compose(tuple(simplified))
    match sub.kind:
        case "corner":
            return kind
        case "heis_center":
            match kind:
                case TScale():
                    return Shift(2)
                case Shift(k=k):
                    return Shift(2 * k)
                case Inner():
                    return Identity()
        case "half_line":
            match kind:
                case Shift(k=k) if k >= 0:
                    return Shift(k)
                case Diagonal():
                    return kind
        case "coordinatewise":
            match kind:
                case Shift():
                    return kind
                case Diagonal(mapping=mapping):
                    to_base = sub.params["indices"]
                    from_base = {b: i for i, b in enumerate(to_base)}
                    return Diagonal(tuple(from_base[mapping[b]] for b in to_base))
                case Inner(g=g) if sub.contains(g):
                    return Inner(sub.pull(g))
        case "finite":
            match kind:
                case Diagonal(mapping=mapping):
                    to_base = sub.params["indices"]
                    from_base = {b: i for i, b in enumerate(to_base)}
                    return Diagonal(tuple(from_base[mapping[b]] for b in to_base))
                case Inner(g=g) if sub.contains(g):
                    return Inner(sub.pull(g))
    return None


def restrict(
    phi: EndoSpec,
    sub: SubgroupDescriptor,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> EndoSpec:
    """phi restricted to an invariant subgroup, as an endomorphism of its family.

    A native kind is used when one is known (a shift for TScale on the
    Heisenberg center, for instance), else a Restricted wrapper.

    Args:
        phi: Endomorphism of the ambient family.
        sub: Invariant subgroup descriptor.
        samples: Sampled members for the invariance and homomorphism checks.
        seed: Seed for the samples.

    Returns:
        An endomorphism of ``sub.family``.

    Raises:
        NotInvariant: If a sampled member of ``sub`` leaves it under phi.
    """
    if not is_invariant(phi, sub, samples, seed):
        raise NotInvariant(f"{sub.name} is not invariant under {describe(phi.kind)}")
    kind = _restricted_kind(phi.kind, sub)
    if kind is None:
        logger.debug("no native restriction of %s to %s", describe(phi.kind), sub.name)
        kind = Restricted(phi, sub)
    return build_endo(sub.family, kind, samples, seed)


def pull_subgroup(k: FiniteSubgroup, sub: SubgroupDescriptor) -> FiniteSubgroup:
    """k intersected with the descriptor, as a subgroup of the descriptor family."""
    elements = tuple(sub.pull(x) for x in k if sub.contains(x))
    return FiniteSubgroup(sub.family, elements, generators=elements)


def embed_subgroup(k: FiniteSubgroup, sub: SubgroupDescriptor) -> FiniteSubgroup:
    """k, a subgroup of the descriptor family, carried into the ambient family."""
    return FiniteSubgroup(
        sub.ambient,
        tuple(sub.embed(x) for x in k),
        generators=tuple(sub.embed(g) for g in k.generators),
    )


# =============================================================================
# Quotient models
# =============================================================================


def _coordinatewise_quotient(sub: SubgroupDescriptor) -> QuotientModel:
    family: DirectSumFamily = sub.ambient
    base = whole_group(family.base)
    n = FiniteSubgroup(base.family, tuple(BaseElem(i) for i in sub.params["indices"]))
    q = quotient_table(base, n)
    coset = {x.index: c for x, c in q.coset_of.items()}
    reps = [r.index for r in q.representatives]

    def simplify(kind: EndoKind) -> EndoKind | None:
        match kind:
            case Identity() | Shift():
                return kind
            case Diagonal(mapping=mapping):
                return Diagonal(tuple(coset[mapping[r]] for r in reps))
            case Inner(g=g):
                return Inner(project(g))
            case Compose(parts=parts):
                simplified = [simplify(p) for p in parts]
                return None if any(p is None for p in simplified) else Compose(tuple(simplified))
        return None

    def project(x: DirectSumElem) -> DirectSumElem:
        return DirectSumElem(tuple((i, coset[v]) for i, v in x.support if coset[v]))

    return QuotientModel(
        name=f"{family.name}/{sub.name}",
        source=family,
        target=DirectSumFamily(q.table),
        kernel=sub,
        project=project,
        lift=lambda y: DirectSumElem(tuple((i, reps[v]) for i, v in y.support)),
        simplify=simplify,
    )


def _half_line_quotient(sub: SubgroupDescriptor) -> QuotientModel:
    family: DirectSumFamily = sub.ambient
    start = sub.params["start"]

    def simplify(kind: EndoKind) -> EndoKind | None:
        return kind if isinstance(kind, Identity | Diagonal) else None

    return QuotientModel(
        name=f"{family.name}/{sub.name}",
        source=family,
        target=family,
        kernel=sub,
        project=lambda x: DirectSumElem(tuple((i, v) for i, v in x.support if i < start)),
        lift=lambda y: y,
        simplify=simplify,
    )


def _heis_quotient(sub: SubgroupDescriptor) -> QuotientModel:
    """G/Z(G) as DirectSum(Z_p x Z_p), coordinate value a * p + b."""
    family: PolyHeisenbergFamily = sub.ambient
    p = family.p

    def project(x: PolyHeisElem) -> DirectSumElem:
        values: dict[int, int] = {}
        for i, v in x.a:
            values[i] = v * p
        for i, v in x.b:
            values[i] = values.get(i, 0) + v
        return DirectSumElem(tuple(sorted(values.items())))

    def lift(y: DirectSumElem) -> PolyHeisElem:
        a = tuple((i, v // p) for i, v in y.support if v // p)
        b = tuple((i, v % p) for i, v in y.support if v % p)
        return PolyHeisElem(a, b, ())

    def simplify(kind: EndoKind) -> EndoKind | None:
        match kind:
            case TScale():
                return Shift(1)
            case Identity() | Shift():
                return kind
            case Inner():
                return Identity()
            case Compose(parts=parts):
                simplified = [simplify(part) for part in parts]
                return None if any(s is None for s in simplified) else Compose(tuple(simplified))
        return None

    return QuotientModel(
        name=f"{family.name}/center",
        source=family,
        target=DirectSumFamily(direct_product(cyclic(p), cyclic(p))),
        kernel=sub,
        project=project,
        lift=lift,
        simplify=simplify,
    )


def _finite_quotient(sub: SubgroupDescriptor) -> QuotientModel:
    family: FiniteFamily = sub.ambient
    k = whole_group(family.table)
    n = FiniteSubgroup(family, tuple(BaseElem(i) for i in sub.params["indices"]))
    q = quotient_table(k, n)
    coset = {x.index: c for x, c in q.coset_of.items()}
    reps = [r.index for r in q.representatives]

    def simplify(kind: EndoKind) -> EndoKind | None:
        match kind:
            case Identity():
                return kind
            case Diagonal(mapping=mapping):
                return Diagonal(tuple(coset[mapping[r]] for r in reps))
            case Inner(g=g):
                return Inner(BaseElem(coset[g.index]))
            case Compose(parts=parts):
                simplified = [simplify(part) for part in parts]
                return None if any(s is None for s in simplified) else Compose(tuple(simplified))
        return None

    return QuotientModel(
        name=f"{family.name}/{sub.name}",
        source=family,
        target=FiniteFamily(q.table),
        kernel=sub,
        project=lambda x: BaseElem(coset[x.index]),
        lift=lambda y: BaseElem(reps[y.index]),
        simplify=simplify,
    )


_QUOTIENTS: dict[str, Callable[[SubgroupDescriptor], QuotientModel]] = {
    "coordinatewise": _coordinatewise_quotient,
    "half_line": _half_line_quotient,
    "heis_center": _heis_quotient,
    "finite": _finite_quotient,
}


def quotient_model(
    sub: SubgroupDescriptor,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> QuotientModel:
    """The built-in model of ambient/sub, verified on samples.

    Args:
        sub: Normal subgroup descriptor.
        samples: Sampled elements for the model checks.
        seed: Seed for the samples.

    Returns:
        Projection, section and target family of the quotient.

    Raises:
        UnsupportedQuotient: If no model exists for this kind of descriptor.
        NotHomomorphism: If the model fails a sampled check.
    """
    builder = _QUOTIENTS.get(sub.kind)
    if builder is None:
        raise UnsupportedQuotient(
            f"No quotient model for {sub.ambient.name} by {sub.name}",
            details=f"models exist for: {', '.join(sorted(_QUOTIENTS))}",
        )
    model = builder(sub)
    verify_quotient_model(model, samples, seed)
    return model


def verify_quotient_model(
    model: QuotientModel, samples: int = DEFAULT_SAMPLES, seed: int = DEFAULT_SEED
) -> None:
    """Sampled checks: homomorphism, kernel killed, project(lift(y)) == y."""
    verify_homomorphism(model.source, model.project, model.target, samples, seed, what="projection")
    rng = np.random.default_rng(seed)
    e = identity(model.target)
    if model.lift(e) != identity(model.source):
        raise NotHomomorphism(f"{model.name}: the section does not fix the identity")
    for _ in range(samples):
        h = sample_member(model.kernel, rng)
        if model.project(h) != e:
            raise NotHomomorphism(f"{model.name}: projection does not kill {h!r}")
        y = model.project(random_element(model.source, rng))
        if model.project(model.lift(y)) != y:
            raise NotHomomorphism(f"{model.name}: lift is not a section at {y!r}")


def induced(
    phi: EndoSpec,
    model: QuotientModel,
    samples: int = DEFAULT_SAMPLES,
    seed: int = DEFAULT_SEED,
) -> EndoSpec:
    """The map psi on the quotient with psi(project(x)) == project(phi(x)).

    Args:
        phi: Endomorphism of the model's source family.
        model: Quotient model whose kernel is phi-invariant.
        samples: Sampled elements for the compatibility check.
        seed: Seed for the samples.

    Returns:
        An endomorphism of ``model.target``.

    Raises:
        NotCompatible: If the kernel is not invariant, or psi fails to commute
            with the projection on a sample.
    """
    if model.source != phi.family:
        raise NotCompatible(f"{model.name} is a quotient of {model.source.name}, not {phi.family.name}")
    if not is_invariant(phi, model.kernel, samples, seed):
        raise NotCompatible(f"{model.kernel.name} is not invariant under {describe(phi.kind)}")
    kind = model.simplify(phi.kind) or Induced(phi, model)
    psi = build_endo(model.target, kind, samples, seed)
    f, g = mapper(phi), mapper(psi)
    rng = np.random.default_rng(seed)
    for _ in range(samples):
        x = random_element(phi.family, rng)
        if g(model.project(x)) != model.project(f(x)):
            raise NotCompatible(
                f"{describe(kind)} does not commute with the projection of {model.name}",
                details=f"fails at {x!r}",
            )
    return psi


def project_subgroup(k: FiniteSubgroup, model: QuotientModel) -> FiniteSubgroup:
    """The image of k in the quotient model."""
    elements = tuple(dict.fromkeys(model.project(x) for x in k))
    return FiniteSubgroup(model.target, elements, generators=tuple(model.project(g) for g in k.generators))
