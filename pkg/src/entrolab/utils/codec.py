"""JSON literals for group elements and endomorphisms.

Element literals name their family and carry the canonical payload; support
maps use string keys on output so reports stay valid JSON objects.
"""

from typing import Any

from pydantic import TypeAdapter, ValidationError

from entrolab.models.element import (
    BaseElem,
    DirectSumElem,
    FinitaryUTElem,
    GroupElement,
    PolyHeisElem,
)
from entrolab.models.endo import (
    Compose,
    Diagonal,
    EndoKind,
    Identity,
    Induced,
    Inner,
    Restricted,
    Shift,
    TScale,
)
from entrolab.models.errors import FamilyMismatch, InvalidElement
from entrolab.models.group import GroupFamily
from entrolab.models.scenario import (
    ComposeLiteral,
    DiagonalLiteral,
    DirectSumLiteral,
    ElementLiteral,
    EndoLiteral,
    FinitaryUTLiteral,
    FiniteLiteral,
    IdentityLiteral,
    InnerLiteral,
    PolyHeisLiteral,
    ShiftLiteral,
    TScaleLiteral,
)
from entrolab.services.arithmetic import check_element

_ELEMENT = TypeAdapter(ElementLiteral)
_ENDO = TypeAdapter(EndoLiteral)


def _sparse(values: dict[int, int]) -> tuple[tuple[int, int], ...]:
    return tuple((i, v) for i, v in sorted(values.items()) if v)


def _sparse_out(pairs: tuple[tuple[int, int], ...]) -> dict[str, int]:
    return {str(i): v for i, v in pairs}


# =============================================================================
# Elements
# =============================================================================


def encode_element(x: GroupElement) -> dict[str, Any]:
    match x:
        case BaseElem(index=index):
            return {"family": "finite", "index": index}
        case DirectSumElem(support=support):
            return {"family": "direct_sum", "support": _sparse_out(support)}
        case PolyHeisElem(a=a, b=b, c=c):
            return {
                "family": "poly_heis",
                "a": _sparse_out(a),
                "b": _sparse_out(b),
                "c": _sparse_out(c),
            }
        case FinitaryUTElem(entries=entries):
            return {"family": "finitary_ut", "entries": [list(e) for e in entries]}
    raise InvalidElement(f"Not a group element: {x!r}")


def element_from_literal(
    family: GroupFamily,
    literal: FiniteLiteral | DirectSumLiteral | PolyHeisLiteral | FinitaryUTLiteral,
) -> GroupElement:
    """Build and validate the element a literal denotes in ``family``."""
    if literal.family != family.kind:
        raise FamilyMismatch(f"a {literal.family} literal cannot denote an element of {family.name}")
    match literal:
        case FiniteLiteral(index=index):
            x = BaseElem(index)
        case DirectSumLiteral(support=support):
            x = DirectSumElem(_sparse(support))
        case PolyHeisLiteral(a=a, b=b, c=c):
            x = PolyHeisElem(_sparse(a), _sparse(b), _sparse(c))
        case FinitaryUTLiteral(entries=entries):
            x = FinitaryUTElem(tuple(sorted(e for e in entries if e[2])))
    return check_element(family, x)


def parse_element(family: GroupFamily, data: Any) -> GroupElement:
    """Parse a raw JSON literal, as emitted by ``encode_element``."""
    try:
        literal = _ELEMENT.validate_python(data)
    except ValidationError as e:
        raise InvalidElement("Malformed element literal", details=str(e))
    return element_from_literal(family, literal)


# =============================================================================
# Endomorphisms
# =============================================================================


def encode_endo(kind: EndoKind) -> dict[str, Any]:
    """Literal for a kind; restricted and induced maps are described, not re-parseable."""
    match kind:
        case Identity():
            return {"endo": "identity"}
        case Shift(k=k):
            return {"endo": "shift", "k": k}
        case TScale():
            return {"endo": "t_scale"}
        case Inner(g=g):
            return {"endo": "inner", "g": encode_element(g)}
        case Diagonal(mapping=mapping):
            return {"endo": "diagonal", "map": list(mapping)}
        case Compose(parts=parts):
            return {"endo": "compose", "list": [encode_endo(p) for p in parts]}
        case Restricted(endo=endo, subgroup=sub):
            return {"endo": "restricted", "base": encode_endo(endo.kind), "subgroup": sub.name}
        case Induced(endo=endo, model=model):
            return {"endo": "induced", "base": encode_endo(endo.kind), "quotient": model.name}
    raise InvalidElement(f"Not an endomorphism kind: {kind!r}")


def endo_from_literal(family: GroupFamily, literal: Any) -> EndoKind:
    match literal:
        case IdentityLiteral():
            return Identity()
        case ShiftLiteral(k=k):
            return Shift(k)
        case TScaleLiteral():
            return TScale()
        case InnerLiteral(g=g):
            return Inner(element_from_literal(family, g))
        case DiagonalLiteral(mapping=mapping):
            return Diagonal(tuple(mapping))
        case ComposeLiteral(parts=parts):
            return Compose(tuple(endo_from_literal(family, p) for p in parts))
    raise InvalidElement(f"Not an endomorphism literal: {literal!r}")


def parse_endo(family: GroupFamily, data: Any) -> EndoKind:
    try:
        literal = _ENDO.validate_python(data)
    except ValidationError as e:
        raise InvalidElement("Malformed endomorphism literal", details=str(e))
    return endo_from_literal(family, literal)
