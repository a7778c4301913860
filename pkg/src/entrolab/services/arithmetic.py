"""Element arithmetic for base tables and the four group families."""

import logging
from collections import defaultdict
from collections.abc import Callable

import numpy as np

from entrolab.models.element import (
    BaseElem,
    DirectSumElem,
    FinitaryUTElem,
    GroupElement,
    Poly,
    PolyHeisElem,
)
from entrolab.models.errors import FamilyMismatch, InvalidElement, OrderBudgetExceeded
from entrolab.models.group import (
    DirectSumFamily,
    FinitaryUTFamily,
    FiniteFamily,
    GroupFamily,
    PolyHeisenbergFamily,
)

logger = logging.getLogger(__name__)

Multiplier = Callable[[GroupElement, GroupElement], GroupElement]
Inverter = Callable[[GroupElement], GroupElement]

DEFAULT_ORDER_CAP = 1_000_000


# =============================================================================
# Laurent polynomials over F_p
# =============================================================================


def poly_add(f: Poly, g: Poly, p: int) -> Poly:
    """Sum of two Laurent polynomials over F_p.

    Args:
        f: Sorted (exponent, residue) pairs.
        g: Sorted (exponent, residue) pairs.
        p: Prime modulus.

    Returns:
        The canonical sum, zero coefficients dropped.
    """
    if not g:
        return f
    if not f:
        return g
    acc = dict(f)
    for e, v in g:
        w = (acc.get(e, 0) + v) % p
        if w:
            acc[e] = w
        else:
            acc.pop(e, None)
    return tuple(sorted(acc.items()))


def poly_neg(f: Poly, p: int) -> Poly:
    """Additive inverse over F_p; residues stay in 1..p-1."""
    return tuple((e, p - v) for e, v in f)


def poly_mul(f: Poly, g: Poly, p: int) -> Poly:
    """Convolution product of two finitely supported coefficient maps.

    Args:
        f: Sorted (exponent, residue) pairs.
        g: Sorted (exponent, residue) pairs.
        p: Prime modulus.

    Returns:
        The canonical product; exponents add, so negative ones are allowed.
    """
    if not f or not g:
        return ()
    acc: dict[int, int] = defaultdict(int)
    for e1, v1 in f:
        for e2, v2 in g:
            acc[e1 + e2] += v1 * v2
    return tuple(sorted((e, v % p) for e, v in acc.items() if v % p))


def poly_shift(f: Poly, k: int) -> Poly:
    """Multiply by t^k."""
    return tuple((e + k, v) for e, v in f)


# =============================================================================
# Per-family kernels
# =============================================================================


def _table_mul(rows: tuple[tuple[int, ...], ...]) -> Multiplier:
    def mul(x: BaseElem, y: BaseElem) -> BaseElem:
        return BaseElem(rows[x.index][y.index])

    return mul


def _direct_sum_mul(rows: tuple[tuple[int, ...], ...]) -> Multiplier:
    def mul(x: DirectSumElem, y: DirectSumElem) -> DirectSumElem:
        if not y.support:
            return x
        if not x.support:
            return y
        acc = dict(x.support)
        for i, v in y.support:
            w = rows[acc.get(i, 0)][v]
            if w:
                acc[i] = w
            else:
                acc.pop(i, None)
        return DirectSumElem(tuple(sorted(acc.items())))

    return mul


def _heis_mul(p: int) -> Multiplier:
    def mul(x: PolyHeisElem, y: PolyHeisElem) -> PolyHeisElem:
        return PolyHeisElem(
            poly_add(x.a, y.a, p),
            poly_add(x.b, y.b, p),
            poly_add(poly_add(x.c, y.c, p), poly_mul(x.a, y.b, p), p),
        )

    return mul


def _sparse_matmul(
    p: int, left: dict[tuple[int, int], int], right: dict[tuple[int, int], int]
) -> dict[tuple[int, int], int]:
    by_row: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for (k, j), v in right.items():
        by_row[k].append((j, v))
    out: dict[tuple[int, int], int] = defaultdict(int)
    for (i, k), v in left.items():
        for j, w in by_row.get(k, ()):
            out[(i, j)] = (out[(i, j)] + v * w) % p
    return {key: v for key, v in out.items() if v}


def _ut_pack(acc: dict[tuple[int, int], int]) -> FinitaryUTElem:
    return FinitaryUTElem(tuple(sorted((i, j, v) for (i, j), v in acc.items() if v)))


def _ut_mul(p: int) -> Multiplier:
    def mul(x: FinitaryUTElem, y: FinitaryUTElem) -> FinitaryUTElem:
        if not y.entries:
            return x
        if not x.entries:
            return y
        left = {(i, j): v for i, j, v in x.entries}
        right = {(i, j): v for i, j, v in y.entries}
        acc = dict(left)
        for key, v in right.items():
            acc[key] = (acc.get(key, 0) + v) % p
        for key, v in _sparse_matmul(p, left, right).items():
            acc[key] = (acc.get(key, 0) + v) % p
        return _ut_pack(acc)

    return mul


def _ut_inverse(p: int) -> Inverter:
    def inverse(x: FinitaryUTElem) -> FinitaryUTElem:
        # (I + M)^-1 = sum_k (-M)^k; M is nilpotent
        neg = {(i, j): (p - v) % p for i, j, v in x.entries}
        acc: dict[tuple[int, int], int] = {}
        term = dict(neg)
        while term:
            for key, v in term.items():
                acc[key] = (acc.get(key, 0) + v) % p
            term = _sparse_matmul(p, term, neg)
        return _ut_pack(acc)

    return inverse


def multiplier(family: GroupFamily) -> Multiplier:
    """Unchecked multiplication for hot loops.

    Args:
        family: Group family whose product is wanted.

    Returns:
        A two-argument function on canonical elements of ``family``; it does
        not check element tags.

    Raises:
        FamilyMismatch: If ``family`` is not one of the known families.
    """
    match family:
        case FiniteFamily(table=table):
            return _table_mul(table.rows)
        case DirectSumFamily(base=base):
            return _direct_sum_mul(base.rows)
        case PolyHeisenbergFamily(p=p):
            return _heis_mul(p)
        case FinitaryUTFamily(p=p):
            return _ut_mul(p)
    raise FamilyMismatch(f"Unknown family: {family!r}")


def inverter(family: GroupFamily) -> Inverter:
    """Unchecked inversion for hot loops.

    Args:
        family: Group family whose inverse is wanted.

    Returns:
        A one-argument function on canonical elements of ``family``.

    Raises:
        FamilyMismatch: If ``family`` is not one of the known families.
    """
    match family:
        case FiniteFamily(table=table):
            inv = table.inv
            return lambda x: BaseElem(int(inv[x.index]))
        case DirectSumFamily(base=base):
            inv = base.inv
            return lambda x: DirectSumElem(tuple((i, int(inv[v])) for i, v in x.support))
        case PolyHeisenbergFamily(p=p):
            return lambda x: PolyHeisElem(
                poly_neg(x.a, p),
                poly_neg(x.b, p),
                poly_add(poly_neg(x.c, p), poly_mul(x.a, x.b, p), p),
            )
        case FinitaryUTFamily(p=p):
            return _ut_inverse(p)
    raise FamilyMismatch(f"Unknown family: {family!r}")


def identity(family: GroupFamily) -> GroupElement:
    """The identity: index 0 of a table, else the empty payload."""
    if isinstance(family, FiniteFamily):
        return BaseElem(0)
    return family.element_type()


# =============================================================================
# Checked operations
# =============================================================================


def require_family(family: GroupFamily, *elements: GroupElement) -> None:
    """Raise FamilyMismatch unless every element carries the family's tag."""
    for x in elements:
        if type(x) is not family.element_type:
            raise FamilyMismatch(
                f"{type(x).__name__} is not an element of {family.name}",
                details=f"expected {family.element_type.__name__}",
            )


def mul(family: GroupFamily, x: GroupElement, y: GroupElement) -> GroupElement:
    """Product xy in ``family``.

    Args:
        family: Group family both factors belong to.
        x: Left factor.
        y: Right factor.

    Returns:
        The canonical product.

    Raises:
        FamilyMismatch: If either factor belongs to another family.
    """
    require_family(family, x, y)
    return multiplier(family)(x, y)


def inverse(family: GroupFamily, x: GroupElement) -> GroupElement:
    """Inverse of x in ``family``.

    Args:
        family: Group family x belongs to.
        x: Element to invert.

    Returns:
        The canonical inverse.

    Raises:
        FamilyMismatch: If x belongs to another family.
    """
    require_family(family, x)
    return inverter(family)(x)


def power(family: GroupFamily, x: GroupElement, k: int) -> GroupElement:
    """x^k by repeated squaring; negative k uses the inverse.

    Args:
        family: Group family x belongs to.
        x: Base.
        k: Any integer exponent.

    Returns:
        The canonical power; x^0 is the identity.

    Raises:
        FamilyMismatch: If x belongs to another family.
    """
    require_family(family, x)
    times = multiplier(family)
    if k < 0:
        x, k = inverter(family)(x), -k
    result = identity(family)
    base = x
    while k:
        if k & 1:
            result = times(result, base)
        base = times(base, base)
        k >>= 1
    return result


def element_order(family: GroupFamily, x: GroupElement, cap: int = DEFAULT_ORDER_CAP) -> int:
    """Least k >= 1 with x^k == identity.

    Args:
        family: Group family x belongs to.
        x: Element whose order is wanted.
        cap: Largest order searched.

    Returns:
        The order of x.

    Raises:
        FamilyMismatch: If x belongs to another family.
        OrderBudgetExceeded: If x^k is not the identity for any k <= cap.
    """
    require_family(family, x)
    times = multiplier(family)
    e = identity(family)
    y, k = x, 1
    while y != e:
        y = times(y, x)
        k += 1
        if k > cap:
            raise OrderBudgetExceeded(cap, k)
    return k


def commutator(family: GroupFamily, x: GroupElement, y: GroupElement) -> GroupElement:
    """[x, y] = x^-1 y^-1 x y."""
    times, inv = multiplier(family), inverter(family)
    return times(times(inv(x), inv(y)), times(x, y))


def conjugate(family: GroupFamily, x: GroupElement, g: GroupElement) -> GroupElement:
    """g^-1 x g."""
    times = multiplier(family)
    return times(times(inverter(family)(g), x), g)


def sort_key(x: GroupElement) -> tuple:
    """Shortlex key on the canonical payload; the identity is always minimal."""
    match x:
        case BaseElem(index=index):
            return (index,)
        case DirectSumElem(support=support):
            return (len(support), support)
        case PolyHeisElem(a=a, b=b, c=c):
            return (len(a) + len(b) + len(c), a, b, c)
        case FinitaryUTElem(entries=entries):
            return (len(entries), entries)
    raise FamilyMismatch(f"Not a group element: {x!r}")


# =============================================================================
# Validation
# =============================================================================


def _check_sparse(pairs: tuple, modulus: int, what: str) -> None:
    keys = [pair[:-1] for pair in pairs]
    if keys != sorted(set(keys)):
        raise InvalidElement(f"{what}: indices must be strictly increasing")
    for pair in pairs:
        if not 0 < pair[-1] < modulus:
            raise InvalidElement(f"{what}: value {pair[-1]} is not a nonzero residue below {modulus}")


def check_element(family: GroupFamily, x: GroupElement) -> GroupElement:
    """Verify ``x`` is a canonical element of ``family`` and return it.

    Args:
        family: Group family x should belong to.
        x: Element to check.

    Returns:
        x unchanged.

    Raises:
        FamilyMismatch: If x carries another family's tag.
        InvalidElement: If the payload is out of range, unsorted, stores a
            zero value or has an entry on or below the diagonal.
    """
    require_family(family, x)
    match family:
        case FiniteFamily(table=table):
            if not 0 <= x.index < table.order:
                raise InvalidElement(f"index {x.index} outside table of order {table.order}")
        case DirectSumFamily(base=base):
            _check_sparse(x.support, base.order, "support")
        case PolyHeisenbergFamily(p=p):
            for name in ("a", "b", "c"):
                _check_sparse(getattr(x, name), p, name)
        case FinitaryUTFamily(p=p):
            _check_sparse(x.entries, p, "entries")
            for i, j, _ in x.entries:
                if not 1 <= i < j:
                    raise InvalidElement(f"entry ({i}, {j}) is not strictly upper triangular")
    return x


# =============================================================================
# Sampling and generators
# =============================================================================


def _random_sparse(rng: np.random.Generator, indices: range, modulus: int, size: int) -> dict:
    picks = rng.choice(len(indices), size=min(size, len(indices)), replace=False)
    out = {}
    for pick in picks:
        out[indices[int(pick)]] = int(rng.integers(1, modulus))
    return out


def random_element(
    family: GroupFamily, rng: np.random.Generator, span: int = 6, density: int = 3
) -> GroupElement:
    """A random element with support inside a window of ``span`` indices.

    Args:
        family: Group family to sample from.
        rng: Source of randomness.
        span: Width of the coordinate window (matrix size for FinitaryUT).
        density: Most nonzero entries per component.

    Returns:
        A canonical element; table families are sampled uniformly.

    Raises:
        FamilyMismatch: If ``family`` is not one of the known families.
    """
    match family:
        case FiniteFamily(table=table):
            return BaseElem(int(rng.integers(0, table.order)))
        case DirectSumFamily(base=base):
            if base.order == 1:
                return DirectSumElem()
            size = int(rng.integers(0, density + 1))
            picks = _random_sparse(rng, range(-span // 2, span - span // 2), base.order, size)
            return DirectSumElem(tuple(sorted(picks.items())))
        case PolyHeisenbergFamily(p=p):
            window = range(-span // 2, span - span // 2)
            parts = [
                tuple(sorted(_random_sparse(rng, window, p, int(rng.integers(0, density + 1))).items()))
                for _ in range(3)
            ]
            return PolyHeisElem(*parts)
        case FinitaryUTFamily(p=p):
            cells = [(i, j) for i in range(1, span + 1) for j in range(i + 1, span + 1)]
            size = int(rng.integers(0, density + 1))
            picks = rng.choice(len(cells), size=min(size, len(cells)), replace=False)
            entries = sorted((*cells[int(c)], int(rng.integers(1, p))) for c in picks)
            return FinitaryUTElem(tuple(entries))
    raise FamilyMismatch(f"Unknown family: {family!r}")


def ball_generators(family: GroupFamily, radius: int, symmetric: bool = False) -> list[GroupElement]:
    """Generators of the support ball of ``radius``.

    DirectSum and PolyHeisenberg balls cover coordinates [0, radius] (or
    [-radius, radius] when ``symmetric``); FinitaryUT balls are the corners
    UT_{radius + 2}; a finite family is its own ball.

    Args:
        family: Group family.
        radius: Ball radius.
        symmetric: Whether the ball extends to negative coordinates.

    Returns:
        Generators in a fixed order.

    Raises:
        FamilyMismatch: If ``family`` is not one of the known families.
    """
    low = -radius if symmetric else 0
    coords = range(low, radius + 1)
    match family:
        case FiniteFamily(table=table):
            return [BaseElem(i) for i in range(1, table.order)]
        case DirectSumFamily(base=base):
            return [DirectSumElem(((i, v),)) for i in coords for v in range(1, base.order)]
        case PolyHeisenbergFamily():
            gens: list[GroupElement] = []
            for i in coords:
                unit = ((i, 1),)
                gens += [PolyHeisElem(a=unit), PolyHeisElem(b=unit), PolyHeisElem(c=unit)]
            return gens
        case FinitaryUTFamily():
            size = radius + 2
            return [FinitaryUTElem(((i, i + 1, 1),)) for i in range(1, size)]
    raise FamilyMismatch(f"Unknown family: {family!r}")
