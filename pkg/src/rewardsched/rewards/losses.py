"""Loss providers for the perplexity component.

A loss provider is any callable ``(full_text, reasoning_text, answer_text) ->
SegmentLosses``. The toolkit ships a character-trigram surrogate so the
perplexity path can be exercised without a language model.
"""

from __future__ import annotations

import math
import random
from collections import Counter
from typing import Callable, Iterable, Optional

from .continuous import SegmentLosses

LossProvider = Callable[[str, str, str], SegmentLosses]

_OPENERS = ("First", "Then", "Next", "Finally", "So", "Step 1:", "Step 2:", "Now")
_NOUNS = ("apples", "books", "dollars", "minutes", "students", "eggs", "cookies", "miles")
_VERBS = ("has", "buys", "sells", "gives away", "earns", "spends", "reads", "bakes")


def reference_corpus(seed: int, n_sentences: int = 400) -> str:
    """Arithmetic word-problem style sentences, reproducible from ``seed``."""
    rng = random.Random(seed)
    lines = []
    for _ in range(n_sentences):
        a, b = rng.randint(1, 99), rng.randint(1, 99)
        op = rng.choice("+-*")
        val = {"+": a + b, "-": a - b, "*": a * b}[op]
        lines.append(
            f"{rng.choice(_OPENERS)}, she {rng.choice(_VERBS)} {a} {rng.choice(_NOUNS)}, "
            f"so {a} {op} {b} = {val}. The total is {val}."
        )
    return "\n".join(lines)


class TrigramLossModel:
    """Add-k smoothed character trigram model; loss is mean negative log-likelihood
    per character in nats. Deterministic given ``seed`` (which fixes the corpus)."""

    def __init__(
        self,
        seed: int = 3407,
        corpus: Optional[Iterable[str]] = None,
        smoothing: float = 0.5,
        empty_loss: float = 1000.0,
    ):
        text = "\n".join(corpus) if corpus is not None else reference_corpus(seed)
        self.smoothing = smoothing
        self.empty_loss = empty_loss
        self.vocab_size = len(set(text)) + 1  # +1 bucket for unseen characters
        padded = "\x02\x02" + text
        self._tri = Counter(padded[i : i + 3] for i in range(len(padded) - 2))
        self._bi = Counter(padded[i : i + 2] for i in range(len(padded) - 2))

    def loss(self, text: str) -> float:
        if not text:
            return self.empty_loss
        padded = "\x02\x02" + text
        k, v = self.smoothing, self.vocab_size
        nll = 0.0
        for i in range(len(text)):
            ctx = padded[i : i + 2]
            p = (self._tri[ctx + padded[i + 2]] + k) / (self._bi[ctx] + k * v)
            nll -= math.log(p)
        return nll / len(text)

    def __call__(self, full_text: str, reasoning_text: str, answer_text: str) -> SegmentLosses:
        return SegmentLosses(self.loss(full_text), self.loss(reasoning_text), self.loss(answer_text))
