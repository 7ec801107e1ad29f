from .breakdown import RewardBreakdown
from .continuous import (
    SegmentLosses,
    consistency_reward,
    continuous_reward,
    correctness_numeric,
    correctness_text,
    perplexity_reward,
    reasoning_quality,
)
from .hard import hard_reward
from .losses import LossProvider, TrigramLossModel

__all__ = [
    "RewardBreakdown",
    "SegmentLosses",
    "consistency_reward",
    "continuous_reward",
    "correctness_numeric",
    "correctness_text",
    "perplexity_reward",
    "reasoning_quality",
    "hard_reward",
    "LossProvider",
    "TrigramLossModel",
]
