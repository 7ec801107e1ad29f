"""String similarity used by the text correctness path and the consistency bins."""

from __future__ import annotations

from difflib import SequenceMatcher


def gestalt_similarity(a: str, b: str) -> float:
    """Ratcliff/Obershelp ratio: 2 * matched characters / (len(a) + len(b)).

    Matching recurses on the longest common substring (earliest in ``a``, then
    earliest in ``b`` on ties) and the unmatched text either side of it.
    Two empty strings are identical and score 1.0.
    """
    if not a and not b:
        return 1.0
    # autojunk would silently drop frequent characters on strings >= 200 chars
    return SequenceMatcher(None, a, b, autojunk=False).ratio()


def word_overlap(a: str, b: str) -> float:
    """Jaccard overlap of lowercased whitespace-split word sets."""
    wa = set(a.lower().split())
    wb = set(b.lower().split())
    if not wa and not wb:
        return 1.0
    return len(wa & wb) / len(wa | wb)
