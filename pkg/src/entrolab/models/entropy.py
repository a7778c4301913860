"""Trajectory tables and entropy estimates."""

import math
from dataclasses import dataclass, field
from fractions import Fraction


@dataclass(frozen=True)
class TrajectoryTable:
    """Exact sizes |T_1|, ..., |T_n| of one trajectory.

    ``truncated`` is set when a budget stopped the computation before ``n_max``.
    """

    sizes: tuple[int, ...]
    n_max: int
    truncated: bool = False
    budget: int | None = None

    def to_dict(self) -> dict:
        return {
            "sizes": list(self.sizes),
            "n_max": self.n_max,
            "truncated": self.truncated,
        }


@dataclass(frozen=True)
class EntropyEstimate:
    """Three readings of H(phi, F) from one trajectory table.

    ``prefix_inf`` is the Fekete bound min log|T_n| / n; ``increments`` are
    log(|T_{n+1}| / |T_n|); ``stabilized_ratio`` is the integer alpha when the
    trailing ``window`` exact ratios agree on an integer. Logs are natural.
    """

    table: TrajectoryTable
    window: int
    prefix_bounds: tuple[float, ...]
    ratios: tuple[Fraction, ...]
    common_ratio: Fraction | None = None

    @property
    def prefix_inf(self) -> float:
        return min(self.prefix_bounds)

    @property
    def increments(self) -> tuple[float, ...]:
        return tuple(math.log(r) for r in self.ratios)

    @property
    def stabilized(self) -> bool:
        return self.common_ratio is not None

    @property
    def stabilized_ratio(self) -> int | None:
        if self.common_ratio is None or self.common_ratio.denominator != 1:
            return None
        return self.common_ratio.numerator

    @property
    def h_report(self) -> float | None:
        alpha = self.stabilized_ratio
        return None if alpha is None else math.log(alpha)

    @property
    def bounds(self) -> tuple[float, float]:
        """(low, high): log alpha twice when stabilized, else last increment and prefix_inf."""
        if self.h_report is not None:
            return self.h_report, self.h_report
        low = self.increments[-1] if self.ratios else 0.0
        return low, self.prefix_inf

    def to_dict(self) -> dict:
        return {
            "sizes": list(self.table.sizes),
            "truncated": self.table.truncated,
            "prefix_inf": self.prefix_inf,
            "increments": list(self.increments),
            "ratios": [str(r) for r in self.ratios],
            "window": self.window,
            "stabilized_alpha": self.stabilized_ratio,
            "common_ratio": None if self.common_ratio is None else str(self.common_ratio),
            "h": self.h_report,
            "bounds": list(self.bounds),
        }


@dataclass(frozen=True)
class LadderReport:
    """Per-rung estimates along an ascending ladder of finite subgroups.

    ``sup_alpha`` is the largest stabilized alpha seen; log(sup_alpha) is a
    lower bound on h(phi), never the value itself.
    """

    estimates: tuple[EntropyEstimate | None, ...]
    running_sup: tuple[int | None, ...]
    monotone: bool
    unresolved: tuple[int, ...] = field(default_factory=tuple)
    truncated: bool = False

    @property
    def sup_alpha(self) -> int | None:
        return self.running_sup[-1] if self.running_sup else None

    @property
    def h_lower_bound(self) -> float | None:
        return None if self.sup_alpha is None else math.log(self.sup_alpha)

    @property
    def top_stabilized(self) -> bool:
        """Whether the largest rung produced an integer alpha."""
        return bool(self.estimates) and self.estimates[-1] is not None and (
            self.estimates[-1].stabilized_ratio is not None
        )

    @property
    def bounds(self) -> tuple[float, float]:
        resolved = [e for e in self.estimates if e is not None]
        if not resolved:
            return 0.0, math.inf
        low = max(e.bounds[0] for e in resolved)
        return low, max(low, resolved[-1].bounds[1])

    def to_dict(self) -> dict:
        return {
            "rungs": [None if e is None else e.to_dict() for e in self.estimates],
            "running_sup_alpha": list(self.running_sup),
            "sup_alpha": self.sup_alpha,
            "h_lower_bound": self.h_lower_bound,
            "monotone": self.monotone,
            "unresolved_rungs": list(self.unresolved),
            "truncated": self.truncated,
        }


@dataclass(frozen=True)
class ConjugationReport:
    """Trajectories of phi on F and of xi phi xi^-1 on xi(F), for xi = Inner(g)."""

    original: TrajectoryTable
    conjugated: TrajectoryTable

    @property
    def agree(self) -> bool:
        return self.original.sizes == self.conjugated.sizes

    @property
    def truncated(self) -> bool:
        return self.original.truncated or self.conjugated.truncated

    def to_dict(self) -> dict:
        return {
            "original": self.original.to_dict(),
            "conjugated": self.conjugated.to_dict(),
            "agree": self.agree,
        }
