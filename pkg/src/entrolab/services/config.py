"""Run settings: budgets, horizons, seeds and worker counts."""

import logging
import os
from dataclasses import dataclass, fields, replace

logger = logging.getLogger(__name__)

THREADS_ENV = "ENTROLAB_THREADS"


def threads_from_env() -> int:
    """Worker cap from ENTROLAB_THREADS, defaulting to 1."""
    raw = os.environ.get(THREADS_ENV)
    if not raw:
        return 1
    try:
        value = int(raw)
    except ValueError:
        logger.warning("Ignoring %s=%r: not an integer", THREADS_ENV, raw)
        return 1
    if value < 1:
        logger.warning("Ignoring %s=%r: must be positive", THREADS_ENV, raw)
        return 1
    return value


@dataclass(frozen=True)
class Settings:
    """Defaults for every tunable computation parameter.

    Horizon and window defaults are engineering choices: nothing bounds how fast
    (1/n) log |T_n| converges, so reports always carry the horizon used.
    """

    closure_budget: int = 10_000_000
    product_budget: int = 10_000_000
    order_cap: int = 1_000_000
    n_max: int = 8
    window: int = 3
    seed: int = 20240601
    homomorphism_samples: int = 1000
    threads: int = 1
    strict_inconclusive: bool = False
    record_eta: bool = False
    full_corrections: bool = False

    @classmethod
    def from_env(cls) -> "Settings":
        return cls(threads=threads_from_env())

    def merged(self, **overrides: object) -> "Settings":
        """Return a copy with every non-None override applied."""
        known = {f.name for f in fields(self)}
        unknown = set(overrides) - known
        if unknown:
            raise TypeError(f"Unknown settings: {sorted(unknown)}")
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})
