"""Finite element sets and explicitly enumerated finite subgroups."""

from collections.abc import Iterator
from dataclasses import dataclass, field

from entrolab.models.element import GroupElement
from entrolab.models.group import BaseGroupTable, GroupFamily


@dataclass(frozen=True, eq=False)
class ElementSet:
    """A deduplicated set of elements with a deterministic enumeration order."""

    family: GroupFamily
    elements: tuple[GroupElement, ...]
    members: frozenset[GroupElement] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        members = frozenset(self.elements)
        if len(members) != len(self.elements):
            # keep first occurrences only
            object.__setattr__(self, "elements", tuple(dict.fromkeys(self.elements)))
        object.__setattr__(self, "members", members)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self) -> Iterator[GroupElement]:
        return iter(self.elements)

    def __contains__(self, x: object) -> bool:
        return x in self.members

    def same_elements(self, other: "ElementSet") -> bool:
        return self.members == other.members


@dataclass(frozen=True, eq=False)
class FiniteSubgroup(ElementSet):
    """An ElementSet known to be a subgroup, with the generators it came from."""

    generators: tuple[GroupElement, ...] = ()

    @property
    def order(self) -> int:
        return len(self.elements)


@dataclass(frozen=True, eq=False)
class QuotientTable:
    """The Cayley table of K/N together with the quotient map.

    ``representatives[i]`` is the canonical-minimal element of coset ``i``;
    coset 0 is N itself, represented by the identity.
    """

    table: BaseGroupTable
    representatives: tuple[GroupElement, ...]
    coset_of: dict[GroupElement, int]

    def project(self, x: GroupElement) -> int:
        return self.coset_of[x]
