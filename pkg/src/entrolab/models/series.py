"""Subgroup series report model."""

from dataclasses import dataclass
from enum import Enum

from entrolab.models.subgroup import FiniteSubgroup


class SeriesKind(str, Enum):
    """Available subgroup series."""

    LOWER_CENTRAL = "lower_central"
    UPPER_CENTRAL = "upper_central"
    DERIVED = "derived"


_FAILURE = {
    SeriesKind.LOWER_CENTRAL: "not nilpotent",
    SeriesKind.UPPER_CENTRAL: "not nilpotent",
    SeriesKind.DERIVED: "not solvable",
}


@dataclass(frozen=True)
class SeriesReport:
    """Terms of a series up to stabilization.

    ``length`` is the nilpotency class (central series) or derived length,
    None when the series stalls before reaching its end.
    """

    kind: SeriesKind
    terms: tuple[FiniteSubgroup, ...]
    length: int | None

    @property
    def orders(self) -> list[int]:
        return [term.order for term in self.terms]

    @property
    def group_class(self) -> int | str:
        return _FAILURE[self.kind] if self.length is None else self.length

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "orders": self.orders, "class": self.group_class}
