"""Four-component continuous reward: correctness, perplexity, reasoning quality, consistency."""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Optional

from ..config import (
    ConsistencyConfig,
    ContinuousWeights,
    CorrectnessConfig,
    PerplexityConfig,
    ReasoningQualityConfig,
)
from ..parsing import GroundTruth, ParsedCompletion, answers_match, extract_number
from ..similarity import gestalt_similarity, word_overlap
from .breakdown import RewardBreakdown

MISSING_LOSSES = "missing_losses"

_WORD_RE = re.compile(r"[a-z]+")
_NUMBERED_LINE_RE = re.compile(r"^\s*\d+\.", re.MULTILINE)
_DIGIT_GROUP_RE = re.compile(r"\d+(?:[.,]\d+)*")


def _clip01(x: float) -> float:
    return min(1.0, max(0.0, x))


@dataclass(frozen=True)
class SegmentLosses:
    """Per-token log-losses of the full response, reasoning span and answer span."""

    full: float
    reasoning: float
    answer: float

    def __post_init__(self) -> None:
        for name in ("full", "reasoning", "answer"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v >= 0):
                raise ValueError(f"segment loss {name!r} must be finite and >= 0, got {v!r}")

    def capped(self, cap: float) -> "SegmentLosses":
        return SegmentLosses(min(self.full, cap), min(self.reasoning, cap), min(self.answer, cap))


def magnitude_gap(pred: float, truth: float, zero_guard: float = 1e-12) -> float:
    """|log10|pred| - log10|truth||, with |0| read as ``zero_guard``."""
    return abs(math.log10(max(abs(pred), zero_guard)) - math.log10(max(abs(truth), zero_guard)))


def correctness_numeric(pred: float, truth: float, cfg: CorrectnessConfig = CorrectnessConfig()) -> float:
    rel_err = abs(pred - truth) / max(abs(truth), 1.0)
    gap = magnitude_gap(pred, truth, cfg.zero_guard)
    score = (
        cfg.alpha * math.exp(-rel_err)
        + cfg.beta / (1.0 + gap)
        + cfg.gamma * (1.0 if gap < 1.0 else 0.0)
    )
    return _clip01(score)


def correctness_text(pred: str, truth: str, cfg: CorrectnessConfig = CorrectnessConfig()) -> float:
    return _clip01(cfg.alpha_p * gestalt_similarity(pred, truth) + cfg.beta_p * word_overlap(pred, truth))


def correctness_reward(pred: ParsedCompletion, truth: GroundTruth, cfg: CorrectnessConfig = CorrectnessConfig()) -> float:
    if pred.answer_numeric is not None and truth.answer_numeric is not None:
        return correctness_numeric(pred.answer_numeric, truth.answer_numeric, cfg)
    return correctness_text(pred.answer_text or "", truth.answer_text, cfg)


def perplexity_reward(losses: SegmentLosses, cfg: PerplexityConfig = PerplexityConfig()) -> float:
    lc = losses.capped(cfg.loss_cap)
    score = (
        cfg.w_full * math.exp(-lc.full / cfg.tau_full)
        + cfg.w_reason * math.exp(-lc.reasoning / cfg.tau_reason)
        + cfg.w_ans * math.exp(-lc.answer / cfg.tau_ans)
    )
    return _clip01(score)


def count_step_indicators(text: str, cfg: ReasoningQualityConfig = ReasoningQualityConfig()) -> int:
    lexicon = set(cfg.step_words)
    words = sum(1 for w in _WORD_RE.findall(text.lower()) if w in lexicon)
    return words + len(_NUMBERED_LINE_RE.findall(text))


def count_math_indicators(text: str, cfg: ReasoningQualityConfig = ReasoningQualityConfig()) -> int:
    symbols = sum(1 for ch in text if ch in cfg.math_symbols)
    return symbols + len(_DIGIT_GROUP_RE.findall(text))


def length_score(n_words: int, cfg: ReasoningQualityConfig = ReasoningQualityConfig()) -> float:
    if n_words < cfg.min_words or n_words > cfg.max_words:
        return 0.0
    return max(0.0, 1.0 - abs(n_words - cfg.ideal_words) / cfg.penalty_factor)


def reasoning_quality(reasoning: Optional[str], cfg: ReasoningQualityConfig = ReasoningQualityConfig()) -> float:
    text = reasoning or ""
    length = length_score(len(text.split()), cfg)
    steps = min(count_step_indicators(text, cfg) / cfg.step_threshold, 1.0)
    maths = min(count_math_indicators(text, cfg) / cfg.math_threshold, 1.0)
    return _clip01(cfg.w_len * length + cfg.w_step * steps + cfg.w_math * maths)


def similarity_bin(d: float) -> float:
    if d < 0.2:
        return 0.0
    if d < 0.8:
        return 0.5
    return 1.0


def consistency_reward(pred: ParsedCompletion, truth: GroundTruth, cfg: ConsistencyConfig = ConsistencyConfig()) -> float:
    """Agreement score, numeric evidence first.

    With ``compare_to="answer"`` the last number of the reasoning is checked
    against the stated answer; with ``"truth"`` the stated answer is checked
    against the ground truth.
    """
    if cfg.compare_to == "answer":
        left, right = extract_number(pred.reasoning), pred.answer_numeric
        text_l, text_r = pred.reasoning or "", pred.answer_text or ""
    else:
        left, right = pred.answer_numeric, truth.answer_numeric
        text_l, text_r = pred.answer_text or "", truth.answer_text

    if left is not None and right is not None:
        if abs(left - right) <= cfg.tolerance * max(abs(right), 1.0):
            return cfg.match_reward
        return cfg.num_reward
    if left is not None or right is not None:
        return cfg.partial_reward
    if not text_l and not text_r:
        # nothing on either side to agree about
        return 0.0
    return similarity_bin(gestalt_similarity(text_l, text_r))


def combine(components: dict, weights: ContinuousWeights) -> float:
    w = weights.as_dict()
    return _clip01(sum(w[k] * components[k] for k in w))


def continuous_reward(
    pred: ParsedCompletion,
    truth: GroundTruth,
    losses: Optional[SegmentLosses] = None,
    weights: ContinuousWeights = ContinuousWeights(),
    correctness: CorrectnessConfig = CorrectnessConfig(),
    perplexity: PerplexityConfig = PerplexityConfig(),
    reasoning: ReasoningQualityConfig = ReasoningQualityConfig(),
    consistency: ConsistencyConfig = ConsistencyConfig(),
) -> RewardBreakdown:
    flags = ()
    if losses is None:
        r_perp = 0.0
        flags = (MISSING_LOSSES,)
    else:
        r_perp = perplexity_reward(losses, perplexity)
    components = {
        "correctness": correctness_reward(pred, truth, correctness),
        "perplexity": r_perp,
        "reasoning": reasoning_quality(pred.reasoning, reasoning),
        "consistency": consistency_reward(pred, truth, consistency),
    }
    return RewardBreakdown(
        total=combine(components, weights),
        components=components,
        weights=weights.as_dict(),
        flags=flags,
        correct=answers_match(pred, truth),
    )
