"""Built-in Cayley tables and table constructions."""

import itertools
import re
from collections.abc import Callable, Hashable, Sequence

import numpy as np
from sympy.combinatorics.named_groups import SymmetricGroup

from entrolab.models.element import BaseElem, FinitaryUTElem
from entrolab.models.errors import InvalidTable, ScenarioError
from entrolab.models.group import BaseGroupTable, FinitaryUTFamily, FiniteFamily
from entrolab.models.subgroup import FiniteSubgroup
from entrolab.services.arithmetic import multiplier, sort_key


def from_elements(name: str, elements: Sequence[Hashable], op: Callable) -> BaseGroupTable:
    """Tabulate ``op`` on ``elements``; ``elements[0]`` must be the identity."""
    index = {x: i for i, x in enumerate(elements)}
    n = len(elements)
    table = np.zeros((n, n), dtype=np.int64)
    for (i, a), (j, b) in itertools.product(enumerate(elements), repeat=2):
        try:
            table[i, j] = index[op(a, b)]
        except KeyError:
            raise InvalidTable(f"{name}: elements are not closed under the operation")
    return BaseGroupTable(name, table)


def cyclic(n: int) -> BaseGroupTable:
    ids = np.arange(n)
    return BaseGroupTable(f"Z{n}", (ids[:, None] + ids[None, :]) % n)


def direct_product(left: BaseGroupTable, right: BaseGroupTable) -> BaseGroupTable:
    """Index a * |right| + b for the pair (a, b)."""
    m = right.order
    pairs = [(a, b) for a in range(left.order) for b in range(m)]
    return from_elements(
        f"{left.name}x{right.name}",
        pairs,
        lambda x, y: (left.rows[x[0]][y[0]], right.rows[x[1]][y[1]]),
    )


def symmetric(n: int) -> BaseGroupTable:
    perms = sorted(SymmetricGroup(n).elements, key=lambda g: (not g.is_Identity, g.array_form))
    return from_elements(f"S{n}", perms, lambda a, b: a * b)


def unitriangular(n: int, p: int) -> BaseGroupTable:
    """UT_n(F_p) as a table, enumerated in canonical order (identity first)."""
    family = FinitaryUTFamily(p)
    cells = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    elements = []
    for values in itertools.product(range(p), repeat=len(cells)):
        entries = tuple((i, j, v) for (i, j), v in zip(cells, values, strict=True) if v)
        elements.append(FinitaryUTElem(entries))
    elements.sort(key=sort_key)
    return from_elements(f"UT{n}(F{p})", elements, multiplier(family))


# unit products u * v = sign * w over the basis 1, i, j, k
_QUATERNION_UNITS = (
    ((1, 0), (1, 1), (1, 2), (1, 3)),
    ((1, 1), (-1, 0), (1, 3), (-1, 2)),
    ((1, 2), (-1, 3), (-1, 0), (1, 1)),
    ((1, 3), (1, 2), (-1, 1), (-1, 0)),
)


def quaternion() -> BaseGroupTable:
    """Q8 on pairs (sign, unit): 1, -1, i, -i, j, -j, k, -k in index order."""
    elements = [(s, u) for u in range(4) for s in (1, -1)]

    def op(x: tuple[int, int], y: tuple[int, int]) -> tuple[int, int]:
        sign, unit = _QUATERNION_UNITS[x[1]][y[1]]
        return x[0] * y[0] * sign, unit

    return from_elements("Q8", elements, op)


def subtable(table: BaseGroupTable, indices: Sequence[int], name: str | None = None) -> tuple[BaseGroupTable, tuple[int, ...]]:
    """The subgroup on ``indices`` as its own table, plus the map back into ``table``."""
    to_base = tuple(sorted(set(indices)))
    if not to_base or to_base[0] != 0:
        raise InvalidTable("a subgroup must contain the identity")
    return (
        from_elements(name or f"{table.name}|{len(to_base)}", to_base, lambda a, b: table.rows[a][b]),
        to_base,
    )


def whole_group(table: BaseGroupTable) -> FiniteSubgroup:
    """The full table group as a subgroup of its own Finite family."""
    elements = tuple(BaseElem(i) for i in range(table.order))
    return FiniteSubgroup(FiniteFamily(table), elements, generators=elements[1:])


_BUILTINS: dict[str, Callable[[], BaseGroupTable]] = {
    "ut3_f2": lambda: unitriangular(3, 2),
    "ut4_f2": lambda: unitriangular(4, 2),
    "s3": lambda: symmetric(3),
    "q8": quaternion,
    "z2xz4": lambda: direct_product(cyclic(2), cyclic(4)),
    "z2xz3": lambda: direct_product(cyclic(2), cyclic(3)),
    "z2xz2": lambda: direct_product(cyclic(2), cyclic(2)),
}

_CYCLIC = re.compile(r"^z_?(\d+)$")


def builtin(name: str) -> BaseGroupTable:
    """Resolve a named table: z_n (or zn), ut3_f2, ut4_f2, s3, q8, z2xz4, z2xz3, z2xz2."""
    key = name.lower()
    if match := _CYCLIC.match(key):
        n = int(match.group(1))
        if n < 1:
            raise ScenarioError(f"Cyclic order must be positive: {name}")
        return cyclic(n)
    if key not in _BUILTINS:
        raise ScenarioError(
            f"Unknown builtin table: {name}",
            details=f"choose z_n or one of {', '.join(sorted(_BUILTINS))}",
        )
    return _BUILTINS[key]()
