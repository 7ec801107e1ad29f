"""Synthetic completion generator standing in for the language model.

Each difficulty bucket carries two logits. A completion is well formed
(both tag pairs) with probability sigmoid(format_logit); a well-formed
completion states the right answer with probability sigmoid(correct_logit).
Malformed completions never carry an answer block, so they are never scored
correct.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import List, Sequence, Tuple

from .config import PolicyConfig
from .parsing import GroundTruth, answers_match, parse_completion, render_completion


def sigmoid(x: float) -> float:
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


@dataclass(frozen=True)
class Problem:
    prompt_id: str
    prompt: str
    truth: GroundTruth
    bucket: int = 0
    operands: Tuple[int, int] = (0, 0)
    op: str = "+"


_ITEMS = ("apples", "marbles", "stickers", "books", "cupcakes", "pencils")


def make_dataset(n: int, n_buckets: int = 3, seed: int = 3407) -> List[Problem]:
    """Arithmetic word problems; bucket b uses larger operands and harder operators."""
    rng = random.Random(seed)
    out = []
    for i in range(n):
        bucket = i % n_buckets
        hi = 10 ** (bucket + 1)
        a, b = rng.randint(2, hi), rng.randint(2, hi)
        op = ("+", "-", "*")[min(bucket, 2)] if rng.random() < 0.7 else rng.choice("+-*")
        ans = {"+": a + b, "-": a - b, "*": a * b}[op]
        item = rng.choice(_ITEMS)
        verb = {"+": "gets", "-": "gives away", "*": "multiplies her pile by"}[op]
        prompt = f"Sam has {a} {item} and {verb} {b}. How many {item} does Sam have now?"
        out.append(Problem(f"p{i:04d}", prompt, GroundTruth.from_text(str(ans)), bucket, (a, b), op))
    return out


@dataclass(frozen=True)
class SampledCompletion:
    text: str
    bucket: int
    well_formed: bool
    correct: bool


_FILLER = (
    "First, we read the problem carefully.",
    "Then we write down what we know.",
    "Next, we set up the calculation.",
    "We keep track of the units as we go.",
    "Finally, we double check the arithmetic.",
    "This step combines the two quantities.",
)


def _reasoning_text(problem: Problem, shown: int, rng: random.Random) -> str:
    a, b = problem.operands
    n_filler = rng.randint(0, len(_FILLER))
    parts = list(rng.sample(_FILLER, n_filler))
    parts.append(f"We compute {a} {problem.op} {b} = {shown}.")
    parts.append(f"So the total is {shown}.")
    return " ".join(parts)


@dataclass(frozen=True)
class SyntheticPolicy:
    correct_logits: Tuple[float, ...] = PolicyConfig().correct_logits
    format_logits: Tuple[float, ...] = PolicyConfig().format_logits

    def __post_init__(self) -> None:
        if len(self.correct_logits) != len(self.format_logits) or not self.correct_logits:
            raise ValueError("need one (correct, format) logit pair per bucket")
        object.__setattr__(self, "correct_logits", tuple(float(x) for x in self.correct_logits))
        object.__setattr__(self, "format_logits", tuple(float(x) for x in self.format_logits))

    @classmethod
    def from_config(cls, cfg: PolicyConfig) -> "SyntheticPolicy":
        return cls(tuple(cfg.correct_logits), tuple(cfg.format_logits))

    @property
    def n_buckets(self) -> int:
        return len(self.correct_logits)

    def _bucket(self, problem: Problem) -> int:
        return problem.bucket % self.n_buckets

    def p_format(self, bucket: int) -> float:
        return sigmoid(self.format_logits[bucket])

    def p_correct(self, bucket: int) -> float:
        return sigmoid(self.correct_logits[bucket])

    def expected_accuracy(self, bucket: int) -> float:
        return self.p_format(bucket) * self.p_correct(bucket)

    def sample(self, problem: Problem, rng: random.Random) -> SampledCompletion:
        bucket = self._bucket(problem)
        well_formed = rng.random() < self.p_format(bucket)
        right = rng.random() < self.p_correct(bucket)
        truth = int(problem.truth.answer_numeric)
        shown = truth if right else truth + rng.choice((-1, 1)) * rng.randint(1, max(2, abs(truth) // 4 + 1))
        reasoning = _reasoning_text(problem, shown, rng)
        if well_formed:
            text = render_completion(reasoning, str(shown))
        elif rng.random() < 0.5:
            text = f"{reasoning} The answer is {shown}."
        else:
            text = f"<reasoning>\n{reasoning}\n</reasoning>\nThe answer is {shown}."
        parsed = parse_completion(text)
        return SampledCompletion(text, bucket, parsed.well_formed, answers_match(parsed, problem.truth))

    def sample_group(self, problem: Problem, g: int, rng: random.Random) -> List[SampledCompletion]:
        return [self.sample(problem, rng) for _ in range(g)]


def policy_update(
    policy: SyntheticPolicy,
    completions: Sequence[SampledCompletion],
    advantages: Sequence[float],
    learning_rate: float,
) -> SyntheticPolicy:
    """REINFORCE step: each logit moves by lr * sum_i A_i * [completion i shows the trait]."""
    if len(completions) != len(advantages):
        raise ValueError(f"{len(completions)} completions but {len(advantages)} advantages")
    dc = [0.0] * policy.n_buckets
    df = [0.0] * policy.n_buckets
    for c, a in zip(completions, advantages):
        if c.correct:
            dc[c.bucket] += a
        if c.well_formed:
            df[c.bucket] += a
    return SyntheticPolicy(
        tuple(x + learning_rate * d for x, d in zip(policy.correct_logits, dc)),
        tuple(x + learning_rate * d for x, d in zip(policy.format_logits, df)),
    )
