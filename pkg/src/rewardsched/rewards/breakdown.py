from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Optional, Tuple


@dataclass(frozen=True)
class RewardBreakdown:
    """A scalar reward plus everything that produced it.

    ``components`` hold raw (unclamped, unweighted) component values and
    ``weights`` the coefficients applied to them. Hybrid breakdowns nest the
    hard and continuous breakdowns they were mixed from.
    """

    total: float
    components: Dict[str, float]
    weights: Dict[str, float]
    flags: Tuple[str, ...] = ()
    nested: Dict[str, "RewardBreakdown"] = field(default_factory=dict)
    correct: Optional[bool] = None

    def to_dict(self) -> dict:
        out = {
            "total": self.total,
            "components": dict(self.components),
            "weights": dict(self.weights),
            "flags": list(self.flags),
        }
        if self.correct is not None:
            out["correct"] = self.correct
        if self.nested:
            out["nested"] = {k: v.to_dict() for k, v in self.nested.items()}
        return out
