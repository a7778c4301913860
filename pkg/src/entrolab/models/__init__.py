"""Domain models for entrolab."""

from entrolab.models.element import (
    BaseElem,
    DirectSumElem,
    FinitaryUTElem,
    GroupElement,
    PolyHeisElem,
)
from entrolab.models.group import (
    BaseGroupTable,
    DirectSumFamily,
    FinitaryUTFamily,
    FiniteFamily,
    GroupFamily,
    PolyHeisenbergFamily,
)
from entrolab.models.subgroup import ElementSet, FiniteSubgroup, QuotientTable

__all__ = [
    "BaseElem",
    "BaseGroupTable",
    "DirectSumElem",
    "DirectSumFamily",
    "ElementSet",
    "FinitaryUTElem",
    "FinitaryUTFamily",
    "FiniteFamily",
    "FiniteSubgroup",
    "GroupElement",
    "GroupFamily",
    "PolyHeisElem",
    "PolyHeisenbergFamily",
    "QuotientTable",
]
