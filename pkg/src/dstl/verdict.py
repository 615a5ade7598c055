from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

from .computation import DistributedState


@dataclass(frozen=True)
class Verdict:
    """Outcome of checking one formula on one computation.

    ``failing_ds`` is the smallest distributed state (bitmask order) at which
    the formula's obligation is not met.  ``witness_ds`` is filled in for
    existential successes on a queried distributed state.
    """
    holds: bool
    operator: str
    failing_ds: Optional[DistributedState] = None
    witness_ds: Optional[DistributedState] = None
    formula: str = ""
    checked: int = field(default=0, compare=False)   # premise-satisfying ds visited

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        def ds(x):
            return None if x is None else [str(s) for s in x]
        return {
            "formula": self.formula,
            "operator": self.operator,
            "holds": self.holds,
            "failing_ds": ds(self.failing_ds),
            "witness_ds": ds(self.witness_ds),
        }
