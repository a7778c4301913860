"""Addition Theorem scenarios and their reports."""

from dataclasses import dataclass
from enum import Enum

from entrolab.models.element import GroupElement
from entrolab.models.endo import EndoSpec, QuotientModel, SubgroupDescriptor
from entrolab.models.entropy import LadderReport
from entrolab.models.subgroup import FiniteSubgroup


class Verdict(str, Enum):
    """Outcome of an additivity check."""

    EXACT_EQUALITY = "exact_equality"
    BOUNDS_CONSISTENT = "bounds_consistent"
    VIOLATION = "violation"
    INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class ATScenario:
    """G with phi, an invariant normal H, the quotient model and a ladder for G.

    Ladders for H and G/H are derived from the G ladder by intersection and
    projection.
    """

    name: str
    endo: EndoSpec
    subgroup: SubgroupDescriptor
    model: QuotientModel
    restricted: EndoSpec
    induced: EndoSpec
    ladder: tuple[FiniteSubgroup, ...]
    n_max: int
    window: int


@dataclass(frozen=True)
class ATReport:
    name: str
    verdict: Verdict
    group: LadderReport | None = None
    subgroup: LadderReport | None = None
    quotient: LadderReport | None = None
    reason: str | None = None

    @property
    def alphas(self) -> dict[str, int | None]:
        return {
            "G": None if self.group is None else self.group.sup_alpha,
            "H": None if self.subgroup is None else self.subgroup.sup_alpha,
            "Q": None if self.quotient is None else self.quotient.sup_alpha,
        }

    def to_dict(self) -> dict:
        return {
            "scenario": self.name,
            "verdict": self.verdict.value,
            "alphas": self.alphas,
            "reason": self.reason,
            "tables": {
                key: None if ladder is None else ladder.to_dict()
                for key, ladder in (("G", self.group), ("H", self.subgroup), ("Q", self.quotient))
            },
        }


@dataclass(frozen=True)
class DaggerStep:
    """One horizon n of the central-extension counting certificate.

    ``trajectory`` is |T_n(phi, F)|, ``quotient_trajectory`` is |T_n(phi_bar, Q)|
    and ``kernel_trajectory`` is |T_n(phi|N, K_n)|.
    """

    n: int
    trajectory: int
    quotient_trajectory: int
    kernel_trajectory: int
    sections: int
    corrections: int
    lift_errors: int
    kernel_order: int
    in_kernel: bool
    eta_verified: int | None = None
    eta_sample: tuple[GroupElement, ...] = ()

    @property
    def slack(self) -> int:
        return self.quotient_trajectory * self.kernel_trajectory - self.trajectory

    @property
    def holds(self) -> bool:
        return self.in_kernel and self.slack >= 0

    def to_dict(self) -> dict:
        data = {
            "n": self.n,
            "T": self.trajectory,
            "T_quotient": self.quotient_trajectory,
            "T_kernel": self.kernel_trajectory,
            "sections": self.sections,
            "corrections": self.corrections,
            "lift_errors": self.lift_errors,
            "K_order": self.kernel_order,
            "slack": self.slack,
            "holds": self.holds,
        }
        if self.eta_verified is not None:
            data["eta_verified"] = self.eta_verified
        return data


@dataclass(frozen=True)
class DaggerCertificate:
    name: str
    subgroup_order: int
    quotient_order: int
    steps: tuple[DaggerStep, ...]
    truncated: bool = False

    @property
    def holds(self) -> bool:
        return all(step.holds for step in self.steps)

    def to_dict(self) -> dict:
        return {
            "scenario": self.name,
            "F_order": self.subgroup_order,
            "Q_order": self.quotient_order,
            "holds": self.holds,
            "truncated": self.truncated,
            "steps": [step.to_dict() for step in self.steps],
        }


@dataclass(frozen=True)
class ChainReport:
    """Entropy along an ascending chain of invariant subgroups."""

    name: str
    terms: tuple[str, ...]
    ladders: tuple[LadderReport, ...]
    full: LadderReport
    ascending: bool

    @property
    def alphas(self) -> list[int | None]:
        return [ladder.sup_alpha for ladder in self.ladders]

    @property
    def monotone(self) -> bool:
        known = [a for a in self.alphas if a is not None]
        return all(a <= b for a, b in zip(known, known[1:]))

    @property
    def sup_alpha(self) -> int | None:
        known = [a for a in self.alphas if a is not None]
        return max(known) if known else None

    @property
    def sup_matches_full(self) -> bool | None:
        if self.sup_alpha is None or not self.full.top_stabilized:
            return None
        return self.sup_alpha == self.full.sup_alpha

    def to_dict(self) -> dict:
        return {
            "scenario": self.name,
            "terms": list(self.terms),
            "alphas": self.alphas,
            "sup_alpha": self.sup_alpha,
            "full_alpha": self.full.sup_alpha,
            "ascending": self.ascending,
            "monotone": self.monotone,
            "sup_matches_full": self.sup_matches_full,
            "tables": [ladder.to_dict() for ladder in self.ladders],
        }
