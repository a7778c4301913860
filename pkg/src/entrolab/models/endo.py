"""Endomorphism descriptions, subgroup descriptors and quotient models."""

from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass, field

import numpy as np

from entrolab.models.element import GroupElement
from entrolab.models.group import GroupFamily


@dataclass(frozen=True)
class Identity:
    pass


@dataclass(frozen=True)
class Shift:
    """Index translation by ``k``."""

    k: int


@dataclass(frozen=True)
class Diagonal:
    """A base-table endomorphism given as an index map, applied coordinatewise."""

    mapping: tuple[int, ...]


@dataclass(frozen=True)
class TScale:
    """(a, b, c) -> (t a, t b, t^2 c) on PolyHeisenberg."""


@dataclass(frozen=True)
class Inner:
    """Conjugation x -> g^-1 x g."""

    g: GroupElement


@dataclass(frozen=True)
class Compose:
    """Composition applied right to left: Compose((f, g))(x) == f(g(x))."""

    parts: tuple[EndoKind, ...]


@dataclass(frozen=True)
class Restricted:
    """An endomorphism transported onto the embedded family of an invariant subgroup."""

    endo: EndoSpec
    subgroup: SubgroupDescriptor


@dataclass(frozen=True)
class Induced:
    """The map induced on a quotient model: y -> project(endo(lift(y)))."""

    endo: EndoSpec
    model: QuotientModel


EndoKind = Identity | Shift | Diagonal | TScale | Inner | Compose | Restricted | Induced


@dataclass(frozen=True)
class EndoSpec:
    """A finitely described endomorphism of a group family.

    Build instances through ``entrolab.services.endo.build_endo`` so the
    homomorphism property is verified.
    """

    family: GroupFamily
    kind: EndoKind


@dataclass(frozen=True, eq=False)
class SubgroupDescriptor:
    """A possibly infinite subgroup H of ``ambient``, realized as a family.

    ``embed`` maps elements of ``family`` into ``ambient``; ``pull`` is its
    inverse on elements satisfying ``contains``. ``sample``, when set, draws
    random elements of ``family`` that ``embed`` accepts.
    """

    name: str
    kind: str
    ambient: GroupFamily
    family: GroupFamily
    contains: Callable[[GroupElement], bool]
    embed: Callable[[GroupElement], GroupElement]
    pull: Callable[[GroupElement], GroupElement]
    central: bool = False
    params: dict = field(default_factory=dict)
    sample: Callable[[np.random.Generator], GroupElement] | None = None


@dataclass(frozen=True, eq=False)
class QuotientModel:
    """An explicit family ``target`` with a surjection ``project`` realizing G/H.

    ``lift`` is a set-theoretic section with lift(identity) == identity.
    ``simplify`` turns an endomorphism kind of the source into a native kind on
    the target when one exists, else returns None.
    """

    name: str
    source: GroupFamily
    target: GroupFamily
    kernel: SubgroupDescriptor
    project: Callable[[GroupElement], GroupElement]
    lift: Callable[[GroupElement], GroupElement]
    simplify: Callable[[EndoKind], EndoKind | None]
