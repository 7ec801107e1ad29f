"""Split raw completions into reasoning / answer segments and read numeric answers."""

from __future__ import annotations

import math
import re
import unicodedata
from dataclasses import dataclass
from typing import Optional

REASONING_OPEN = "<reasoning>"
REASONING_CLOSE = "</reasoning>"
ANSWER_OPEN = "<answer>"
ANSWER_CLOSE = "</answer>"

NUMERIC_TOLERANCE = 1e-9

_MINUS_SIGNS = {"−": "-", "‒": "-", "–": "-", "﹣": "-", "－": "-"}
_CURRENCY = "$€£¥₹"

# A number is either comma-grouped thousands or a plain digit run, with an
# optional fractional part. The left lookbehind stops us from reading the
# tail of an identifier ("x2") or of a longer number.
_NUMBER_RE = re.compile(
    r"(?<![\w.])(?<!\d,)"
    r"(?P<sign>-)?"
    rf"[{_CURRENCY}]?"
    r"(?P<body>\d{1,3}(?:,\d{3})+(?:\.\d+)?|\d+(?:\.\d+)?|\.\d+)"
    r"(?!\d)"
)


@dataclass(frozen=True)
class ParsedCompletion:
    raw: str
    reasoning: Optional[str] = None
    answer_text: Optional[str] = None
    has_reasoning_tag: bool = False
    has_answer_tag: bool = False
    answer_numeric: Optional[float] = None

    @property
    def well_formed(self) -> bool:
        return self.has_reasoning_tag and self.has_answer_tag


@dataclass(frozen=True)
class GroundTruth:
    answer_text: str
    answer_numeric: Optional[float] = None

    @classmethod
    def from_text(cls, text: str) -> "GroundTruth":
        # GSM8K solutions end with "#### <answer>"; keep only the answer part.
        if "####" in text:
            text = text.rsplit("####", 1)[1]
        text = text.strip()
        return cls(answer_text=text, answer_numeric=extract_number(text))


def normalize_text(s: str) -> str:
    """NFKC-fold (full-width digits become ASCII) and map unicode minus signs to "-"."""
    s = unicodedata.normalize("NFKC", s)
    for k, v in _MINUS_SIGNS.items():
        s = s.replace(k, v)
    return s


def _between(raw: str, open_tag: str, close_tag: str) -> Optional[str]:
    start = raw.find(open_tag)
    if start < 0:
        return None
    start += len(open_tag)
    end = raw.find(close_tag, start)
    if end < 0:
        return None
    return raw[start:end].strip()


def extract_number(s: Optional[str]) -> Optional[float]:
    """Return the last standalone number in ``s``, or None.

    Currency symbols and thousands separators are dropped. Values that do not
    fit in a finite float are treated as unparseable.
    """
    if not s:
        return None
    s = normalize_text(s)
    last = None
    for m in _NUMBER_RE.finditer(s):
        last = m
    if last is None:
        return None
    value = float(last.group("body").replace(",", ""))
    if last.group("sign"):
        value = -value
    if not math.isfinite(value):
        return None
    return value


def parse_completion(raw: str) -> ParsedCompletion:
    reasoning = _between(raw, REASONING_OPEN, REASONING_CLOSE)
    answer = _between(raw, ANSWER_OPEN, ANSWER_CLOSE)
    return ParsedCompletion(
        raw=raw,
        reasoning=reasoning,
        answer_text=answer,
        has_reasoning_tag=reasoning is not None,
        has_answer_tag=answer is not None,
        answer_numeric=extract_number(answer) if answer is not None else None,
    )


def render_completion(reasoning: str, answer: str) -> str:
    return f"{REASONING_OPEN}\n{reasoning}\n{REASONING_CLOSE}\n{ANSWER_OPEN}\n{answer}\n{ANSWER_CLOSE}"


def _canonical(s: str) -> str:
    return " ".join(normalize_text(s).lower().split())


def answers_match(pred: ParsedCompletion, truth: GroundTruth) -> bool:
    if pred.answer_text is None:
        return False
    if pred.answer_numeric is not None and truth.answer_numeric is not None:
        return abs(pred.answer_numeric - truth.answer_numeric) <= NUMERIC_TOLERANCE
    return _canonical(pred.answer_text) == _canonical(truth.answer_text)
