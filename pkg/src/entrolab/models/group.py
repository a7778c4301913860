"""Cayley tables and the four group families."""

from dataclasses import dataclass, field
from typing import ClassVar

import numpy as np
from sympy import isprime

from entrolab.models.element import BaseElem, DirectSumElem, FinitaryUTElem, PolyHeisElem
from entrolab.models.errors import InvalidTable

MAX_TABLE_ORDER = 256


@dataclass(frozen=True, eq=False)
class BaseGroupTable:
    """A finite group given by its Cayley table.

    Element 0 is the identity. The constructor verifies the group axioms
    (associativity by a full triple sweep), so every instance is a group.
    """

    name: str
    mul: np.ndarray
    inv: np.ndarray | None = None  # derived from mul when omitted
    rows: tuple[tuple[int, ...], ...] = field(init=False, repr=False)
    _key: bytes = field(init=False, repr=False)

    def __post_init__(self) -> None:
        mul = np.asarray(self.mul, dtype=np.int64)
        if mul.ndim != 2 or mul.shape[0] != mul.shape[1] or mul.shape[0] == 0:
            raise InvalidTable(f"{self.name}: table must be a non-empty square array")
        n = mul.shape[0]
        if n > MAX_TABLE_ORDER:
            raise InvalidTable(f"{self.name}: order {n} exceeds {MAX_TABLE_ORDER}")
        if mul.min() < 0 or mul.max() >= n:
            raise InvalidTable(f"{self.name}: table entries out of range")
        ids = np.arange(n)
        if not (np.array_equal(mul[0], ids) and np.array_equal(mul[:, 0], ids)):
            raise InvalidTable(f"{self.name}: element 0 is not a two-sided identity")
        small = mul.astype(np.int16)
        # m[m[a, b], c] == m[a, m[b, c]] for all triples
        if not np.array_equal(small[small], small[ids[:, None, None], small[None, :, :]]):
            raise InvalidTable(f"{self.name}: multiplication is not associative")
        inv = np.argmax(mul == 0, axis=1) if self.inv is None else np.asarray(self.inv, dtype=np.int64)
        if inv.shape != (n,) or np.any(mul[ids, inv] != 0) or np.any(mul[inv, ids] != 0):
            raise InvalidTable(f"{self.name}: inverses are not two-sided")
        object.__setattr__(self, "mul", mul)
        object.__setattr__(self, "inv", inv)
        object.__setattr__(self, "rows", tuple(tuple(int(v) for v in row) for row in mul))
        object.__setattr__(self, "_key", mul.tobytes())

    @property
    def order(self) -> int:
        return len(self.rows)

    @property
    def is_abelian(self) -> bool:
        return bool(np.array_equal(self.mul, self.mul.T))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, BaseGroupTable) and self._key == other._key

    def __hash__(self) -> int:
        return hash(self._key)


@dataclass(frozen=True)
class FiniteFamily:
    """The finite group of a Cayley table."""

    table: BaseGroupTable
    kind: ClassVar[str] = "finite"
    element_type: ClassVar[type] = BaseElem

    @property
    def name(self) -> str:
        return f"Finite({self.table.name})"


@dataclass(frozen=True)
class DirectSumFamily:
    """The restricted direct sum of copies of a base table, indexed by the integers."""

    base: BaseGroupTable
    kind: ClassVar[str] = "direct_sum"
    element_type: ClassVar[type] = DirectSumElem

    @property
    def name(self) -> str:
        return f"DirectSum({self.base.name})"


def _require_prime(p: int) -> None:
    if not isprime(p):
        raise InvalidTable(f"p must be prime, got {p}")


@dataclass(frozen=True)
class PolyHeisenbergFamily:
    """Upper unitriangular 3x3 matrices over the Laurent polynomial ring F_p[t, 1/t]."""

    p: int
    kind: ClassVar[str] = "poly_heis"
    element_type: ClassVar[type] = PolyHeisElem

    def __post_init__(self) -> None:
        _require_prime(self.p)

    @property
    def name(self) -> str:
        return f"PolyHeisenberg({self.p})"


@dataclass(frozen=True)
class FinitaryUTFamily:
    """UT_inf(p): finitary upper unitriangular matrices over F_p."""

    p: int
    kind: ClassVar[str] = "finitary_ut"
    element_type: ClassVar[type] = FinitaryUTElem

    def __post_init__(self) -> None:
        _require_prime(self.p)

    @property
    def name(self) -> str:
        return f"FinitaryUT({self.p})"


GroupFamily = FiniteFamily | DirectSumFamily | PolyHeisenbergFamily | FinitaryUTFamily
