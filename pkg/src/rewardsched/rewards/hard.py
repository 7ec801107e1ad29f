"""Binary correctness plus a fixed bonus for emitting both tag pairs."""

from __future__ import annotations

from ..config import HardRewardConfig
from ..parsing import GroundTruth, ParsedCompletion, answers_match
from .breakdown import RewardBreakdown


def hard_reward(pred: ParsedCompletion, truth: GroundTruth, cfg: HardRewardConfig = HardRewardConfig()) -> RewardBreakdown:
    correct = answers_match(pred, truth)
    r_correct = 1.0 if correct else 0.0
    r_format = cfg.format_bonus if pred.well_formed else 0.0
    return RewardBreakdown(
        total=min(r_correct + r_format, cfg.clamp_max),
        components={"correct": r_correct, "format": r_format},
        weights={"correct": 1.0, "format": 1.0},
        correct=correct,
    )
