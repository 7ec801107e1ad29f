"""Independent reference computations used to derive and check expected values.

Nothing here imports the package under test.
"""

from __future__ import annotations

import itertools
import math

import mpmath

mpmath.mp.dps = 50


def scan_last_number(s: str):
    """Character scanner: drop '$' and ',' between digits, return the last
    maximal run of digits with at most one '.' as a float."""
    cleaned = []
    for i, ch in enumerate(s):
        if ch == "$":
            continue
        if ch == "," and 0 < i < len(s) - 1 and s[i - 1].isdigit() and s[i + 1].isdigit():
            continue
        cleaned.append(ch)
    text = "".join(cleaned)
    tokens, cur = [], ""
    for ch in text + " ":
        if ch.isdigit() or (ch == "." and cur and "." not in cur):
            cur += ch
        else:
            if cur:
                tokens.append(cur.rstrip("."))
            cur = ""
    return float(tokens[-1]) if tokens else None


def longest_match_bruteforce(a: str, b: str, alo: int, ahi: int, blo: int, bhi: int):
    """Longest common substring of a[alo:ahi], b[blo:bhi] by enumeration;
    ties go to the smallest start in a, then in b."""
    best = (alo, blo, 0)
    for i in range(alo, ahi):
        for j in range(blo, bhi):
            k = 0
            while i + k < ahi and j + k < bhi and a[i + k] == b[j + k]:
                k += 1
            if k > best[2]:
                best = (i, j, k)
    return best


def gestalt_matches(a: str, b: str, alo=0, ahi=None, blo=0, bhi=None) -> int:
    ahi = len(a) if ahi is None else ahi
    bhi = len(b) if bhi is None else bhi
    i, j, k = longest_match_bruteforce(a, b, alo, ahi, blo, bhi)
    if k == 0:
        return 0
    return k + gestalt_matches(a, b, alo, i, blo, j) + gestalt_matches(a, b, i + k, ahi, j + k, bhi)


def gestalt_ratio(a: str, b: str) -> float:
    if not a and not b:
        return 1.0
    return 2.0 * gestalt_matches(a, b) / (len(a) + len(b))


def correctness_numeric_mp(pred, truth, alpha=0.6, beta=0.25, gamma=0.15):
    pred, truth = mpmath.mpf(pred), mpmath.mpf(truth)
    eps = abs(pred - truth) / max(abs(truth), 1)
    gap = abs(mpmath.log10(abs(pred)) - mpmath.log10(abs(truth)))
    return alpha * mpmath.e ** (-eps) + beta / (1 + gap) + gamma * (1 if gap < 1 else 0)


def perplexity_mp(losses, weights=(0.4, 0.3, 0.3), taus=(100, 80, 60)):
    return mpmath.fsum(mpmath.mpf(w) * mpmath.exp(-mpmath.mpf(l) / t) for w, l, t in zip(weights, losses, taus))


def group_advantages_bruteforce(rewards, eps=1e-8):
    n = len(rewards)
    mean = sum(rewards) / n
    var = sum((r - mean) * (r - mean) for r in rewards) / n
    std = math.sqrt(var)
    if std < eps:
        return [0.0] * n, mean, std
    return [(r - mean) / std for r in rewards], mean, std


def t_pdf_mp(x, df):
    df = mpmath.mpf(df)
    c = mpmath.gamma((df + 1) / 2) / (mpmath.sqrt(df * mpmath.pi) * mpmath.gamma(df / 2))
    return c * (1 + x * x / df) ** (-(df + 1) / 2)


def t_two_sided_p_quadrature(t, df):
    """2 * integral of the t density from |t| to infinity."""
    return float(2 * mpmath.quad(lambda x: t_pdf_mp(x, df), [abs(t), mpmath.inf]))


def expected_hard_logit_drift(p_format: float, p_correct: float, g: int, format_bonus: float = 0.2, eps: float = 1e-8):
    """E[sum_i A_i * 1[correct_i]] for one group under the hard reward.

    Each completion is well-formed & correct (reward 1), well-formed & wrong
    (reward = bonus) or malformed (reward 0, never correct). Enumerates all
    3**g outcomes.
    """
    kinds = [
        (p_format * p_correct, min(1.0 + format_bonus, 1.0), True),
        (p_format * (1 - p_correct), format_bonus, False),
        (1 - p_format, 0.0, False),
    ]
    total = 0.0
    for outcome in itertools.product(kinds, repeat=g):
        prob = math.prod(k[0] for k in outcome)
        adv, _, _ = group_advantages_bruteforce([k[1] for k in outcome], eps)
        total += prob * sum(a for a, k in zip(adv, outcome) if k[2])
    return total
