"""Group element payloads.

Elements are immutable, hashable tuples of integers. They do not carry their
family: arithmetic always goes through a family object (see
``entrolab.services.arithmetic``). Sparse payloads never store identity or zero
values, so structural equality is group equality.
"""

from dataclasses import dataclass

Poly = tuple[tuple[int, int], ...]  # sorted (exponent, nonzero residue) pairs


@dataclass(frozen=True, slots=True)
class BaseElem:
    """An element of a finite Cayley-table group, by index (0 is the identity)."""

    index: int


@dataclass(frozen=True, slots=True)
class DirectSumElem:
    """A finitely supported map from integer coordinates to base-table indices."""

    support: tuple[tuple[int, int], ...] = ()


@dataclass(frozen=True, slots=True)
class PolyHeisElem:
    """A triple (a, b, c) of Laurent polynomials over F_p.

    The product is (a, b, c)(a', b', c') = (a + a', b + b', c + c' + a*b').
    """

    a: Poly = ()
    b: Poly = ()
    c: Poly = ()


@dataclass(frozen=True, slots=True)
class FinitaryUTElem:
    """I + M for a sparse strictly upper triangular M over F_p.

    Entries are sorted (row, column, nonzero residue) triples with 1 <= row < column.
    """

    entries: tuple[tuple[int, int, int], ...] = ()


GroupElement = BaseElem | DirectSumElem | PolyHeisElem | FinitaryUTElem
