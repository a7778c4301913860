"""Scenario file schema and run results.

Scenario files are JSON documents validated by these models before any
computation; unknown fields are rejected everywhere.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Annotated, Literal

from pydantic import BaseModel, ConfigDict, Field, model_validator

from entrolab.models.entropy import TrajectoryTable


class _Strict(BaseModel):
    model_config = ConfigDict(extra="forbid", populate_by_name=True)


# =============================================================================
# Element literals
# =============================================================================


class FiniteLiteral(_Strict):
    family: Literal["finite"]
    index: int


class DirectSumLiteral(_Strict):
    family: Literal["direct_sum"]
    support: dict[int, int] = Field(default_factory=dict)


class PolyHeisLiteral(_Strict):
    family: Literal["poly_heis"]
    a: dict[int, int] = Field(default_factory=dict)
    b: dict[int, int] = Field(default_factory=dict)
    c: dict[int, int] = Field(default_factory=dict)


class FinitaryUTLiteral(_Strict):
    family: Literal["finitary_ut"]
    entries: list[tuple[int, int, int]] = Field(default_factory=list)


ElementLiteral = Annotated[
    FiniteLiteral | DirectSumLiteral | PolyHeisLiteral | FinitaryUTLiteral,
    Field(discriminator="family"),
]


# =============================================================================
# Endomorphism literals
# =============================================================================


class IdentityLiteral(_Strict):
    endo: Literal["identity"]


class ShiftLiteral(_Strict):
    endo: Literal["shift"]
    k: int = 1


class TScaleLiteral(_Strict):
    endo: Literal["t_scale"]


class InnerLiteral(_Strict):
    endo: Literal["inner"]
    g: ElementLiteral


class DiagonalLiteral(_Strict):
    endo: Literal["diagonal"]
    mapping: list[int] = Field(alias="map")


class ComposeLiteral(_Strict):
    """Parts apply right to left."""

    endo: Literal["compose"]
    parts: list["EndoLiteral"] = Field(alias="list", min_length=1)


EndoLiteral = Annotated[
    IdentityLiteral
    | ShiftLiteral
    | TScaleLiteral
    | InnerLiteral
    | DiagonalLiteral
    | ComposeLiteral,
    Field(discriminator="endo"),
]

ComposeLiteral.model_rebuild()


# =============================================================================
# Families, subgroups, ladders, descriptors
# =============================================================================


class FamilySpec(_Strict):
    """A family; table-backed kinds take a builtin ``table`` name or an inline ``mul``."""

    kind: Literal["finite", "direct_sum", "poly_heis", "finitary_ut"]
    table: str | None = None
    mul: list[list[int]] | None = None
    p: int | None = None

    @model_validator(mode="after")
    def _check_params(self) -> "FamilySpec":
        if self.kind in ("finite", "direct_sum"):
            if (self.table is None) == (self.mul is None):
                raise ValueError(f"{self.kind} families need exactly one of 'table' or 'mul'")
        elif self.p is None:
            raise ValueError(f"{self.kind} families need a prime 'p'")
        return self


SubgroupKind = Literal[
    "generators", "ball", "whole", "center", "torsion", "upper_central", "lower_central_last"
]


class SubgroupSpec(_Strict):
    """A finite subgroup: a generated closure, a support ball, or a table subgroup."""

    kind: SubgroupKind = "generators"
    generators: list[ElementLiteral] = Field(default_factory=list)
    radius: int = 0
    symmetric: bool = False
    n: int | None = None


class LadderSpec(_Strict):
    kind: Literal["support_balls", "explicit"]
    radii: list[int] = Field(default_factory=list)
    symmetric: bool = False
    rungs: list[SubgroupSpec] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_rungs(self) -> "LadderSpec":
        if self.kind == "support_balls" and not self.radii:
            raise ValueError("support_balls ladders need 'radii'")
        if self.kind == "explicit" and not self.rungs:
            raise ValueError("explicit ladders need 'rungs'")
        return self


class NormalSpec(_Strict):
    """An invariant subgroup descriptor (possibly infinite)."""

    kind: Literal[
        "center",
        "torsion",
        "upper_central",
        "lower_central_last",
        "half_line",
        "trivial",
        "corner",
        "generators",
    ]
    n: int | None = None
    start: int = 0
    size: int | None = None
    generators: list[ElementLiteral] = Field(default_factory=list)


class SeriesSpec(_Strict):
    kinds: list[Literal["lower_central", "upper_central", "derived"]] = Field(
        default_factory=lambda: ["lower_central", "upper_central", "derived"]
    )
    torsion: list[int] = Field(default_factory=list)


class BudgetSpec(_Strict):
    closure: int | None = Field(default=None, gt=0)
    product: int | None = Field(default=None, gt=0)


class ExpectSpec(_Strict):
    """Expected results checked by ``selftest``."""

    sizes: list[int] | None = None
    alpha: int | None = None
    sup_alpha: int | None = None
    verdict: Literal["exact_equality", "bounds_consistent", "violation", "inconclusive"] | None = None
    alphas: dict[Literal["G", "H", "Q"], int] | None = None
    holds: bool | None = None
    agree: bool | None = None
    chain_alphas: list[int] | None = None
    orders: dict[str, list[int]] | None = None
    classes: dict[str, int | str] | None = None
    center_order: int | None = None
    exponent: int | None = None
    torsion_orders: dict[int, int] | None = None


ScenarioKind = Literal["entropy", "ladder", "series", "at", "dagger", "chain", "conjugation"]

_REQUIRED: dict[str, tuple[str, ...]] = {
    "entropy": ("subgroup",),
    "ladder": ("ladder",),
    "series": ("subgroup",),
    "at": ("normal", "ladder"),
    "dagger": ("normal", "subgroup"),
    "chain": ("chain", "ladder"),
    "conjugation": ("subgroup", "conjugator"),
}


class Scenario(_Strict):
    schema_version: Literal[1]
    name: str
    kind: ScenarioKind
    description: str | None = None
    family: FamilySpec
    endo: EndoLiteral = Field(default_factory=lambda: IdentityLiteral(endo="identity"))
    subgroup: SubgroupSpec | None = None
    ladder: LadderSpec | None = None
    normal: NormalSpec | None = None
    chain: list[NormalSpec] = Field(default_factory=list)
    series: SeriesSpec | None = None
    conjugator: ElementLiteral | None = None
    n_max: int | None = Field(default=None, gt=0)
    window: int | None = Field(default=None, gt=0)
    seed: int | None = None
    budgets: BudgetSpec = Field(default_factory=BudgetSpec)
    expect: ExpectSpec | None = None
    output: str | None = None

    @model_validator(mode="after")
    def _check_kind_fields(self) -> "Scenario":
        missing = [name for name in _REQUIRED[self.kind] if not getattr(self, name)]
        if missing:
            raise ValueError(f"'{self.kind}' scenarios need: {', '.join(missing)}")
        return self


# =============================================================================
# Run results
# =============================================================================


class RunStatus(str, Enum):
    OK = "ok"
    VIOLATION = "violation"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ScenarioResult:
    """The outcome of running one scenario.

    ``payload`` is the JSON report; ``observed`` holds the values that
    ``expect`` entries are compared against; ``tables`` are every trajectory
    table computed, for the subadditivity sweep.
    """

    name: str
    kind: str
    status: RunStatus
    payload: dict
    observed: dict = field(default_factory=dict)
    tables: tuple[TrajectoryTable, ...] = ()


@dataclass(frozen=True)
class SelftestOutcome:
    name: str
    status: RunStatus
    failures: tuple[str, ...] = ()
    payload: dict | None = None
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.failures
