"""Run-level metrics: stability, convergence, pooled t-test / Cohen's d, weighted score."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, List, Optional, Sequence

from .config import AnalysisConfig, Scheme
from .runlog import RunLog

HEATMAP_COLUMNS = (
    "method",
    "final_accuracy",
    "final_perplexity",
    "convergence_step",
    "training_stability",
    "avg_reward",
    "convergence_normalized",
)


class EffectSize(str, enum.Enum):
    NEGLIGIBLE = "Negligible"
    SMALL = "Small"
    MEDIUM = "Medium"
    LARGE = "Large"


@dataclass(frozen=True)
class StatsResult:
    t: float
    p: float
    cohens_d: float
    pooled_std: float
    effect_label: EffectSize
    n: int

    @property
    def df(self) -> int:
        return 2 * self.n - 2


def _mean(xs: Sequence[float]) -> float:
    return math.fsum(xs) / len(xs)


def population_variance(xs: Sequence[float]) -> float:
    m = _mean(xs)
    return math.fsum((x - m) ** 2 for x in xs) / len(xs)


def sample_variance(xs: Sequence[float]) -> float:
    m = _mean(xs)
    return math.fsum((x - m) ** 2 for x in xs) / (len(xs) - 1)


def stability(rewards: Sequence[float]) -> float:
    """1 / (1 + population variance)."""
    if len(rewards) == 0:
        raise ValueError("stability of an empty reward sequence is undefined")
    return 1.0 / (1.0 + population_variance(rewards))


def completion_reward_variance(log: RunLog) -> float:
    """Population variance over every completion reward in the run,
    recovered from per-step means and within-step variances."""
    n = sum(r.n_completions for r in log.records)
    mean = math.fsum(r.avg_reward * r.n_completions for r in log.records) / n
    second = math.fsum((r.reward_var + r.avg_reward**2) * r.n_completions for r in log.records) / n
    return max(0.0, second - mean**2)


def run_stability(log: RunLog, stream: str = "step") -> float:
    """Stability over per-step average rewards (``"step"``) or over all
    individual completion rewards (``"completion"``)."""
    if stream == "step":
        return stability(log.avg_rewards)
    if stream == "completion":
        return 1.0 / (1.0 + completion_reward_variance(log))
    raise ValueError(f"unknown reward stream {stream!r}")


def convergence_step(log: RunLog, method: str = "first_max", cfg: AnalysisConfig = AnalysisConfig()) -> int:
    """Step at which the run converged.

    ``first_max``: first step reaching the run's maximum accuracy.
    ``plateau``: first step after which accuracy does not rise by
    ``cfg.improvement_threshold`` or more within the next ``cfg.improvement_steps``
    steps (the last step if that never happens).
    """
    recs = log.records
    if not recs:
        raise ValueError("empty run log")
    acc = [r.accuracy for r in recs]
    if method == "first_max":
        best = max(acc)
        return next(r.step for r in recs if r.accuracy >= best - 1e-12)
    if method == "plateau":
        k = cfg.improvement_steps
        for i in range(len(acc) - k):
            if max(acc[i + 1 : i + 1 + k]) - acc[i] < cfg.improvement_threshold:
                return recs[i].step
        return recs[-1].step
    raise ValueError(f"unknown convergence method {method!r}")


def effect_label(d: float, cfg: AnalysisConfig = AnalysisConfig()) -> EffectSize:
    a = abs(d)
    if a >= cfg.d_large:
        return EffectSize.LARGE
    if a >= cfg.d_medium:
        return EffectSize.MEDIUM
    if a >= cfg.d_small:
        return EffectSize.SMALL
    return EffectSize.NEGLIGIBLE


# --- Student t tail via the regularized incomplete beta ----------------------


def _betacf(a: float, b: float, x: float, eps: float = 1e-16, max_iter: int = 10_000) -> float:
    """Continued fraction for I_x(a, b), modified Lentz method."""
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    d = tiny if abs(d) < tiny else d
    d = 1.0 / d
    h = d
    for m in range(1, max_iter + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        d = tiny if abs(d) < tiny else d
        c = 1.0 + aa / c
        c = tiny if abs(c) < tiny else c
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            return h
    raise ArithmeticError(f"incomplete beta continued fraction did not converge (a={a}, b={b}, x={x})")


def betainc_regularized(a: float, b: float, x: float) -> float:
    if not 0.0 <= x <= 1.0:
        raise ValueError(f"x must lie in [0, 1], got {x}")
    if x == 0.0 or x == 1.0:
        return x
    log_front = math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b) + a * math.log(x) + b * math.log1p(-x)
    front = math.exp(log_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def t_two_sided_p(t: float, df: float) -> float:
    """P(|T| >= |t|) for Student's t with ``df`` degrees of freedom."""
    if df <= 0:
        raise ValueError("degrees of freedom must be positive")
    if math.isinf(t):
        return 0.0
    return min(1.0, betainc_regularized(df / 2.0, 0.5, df / (df + t * t)))


def compare_runs(a: Sequence[float], b: Sequence[float], cfg: AnalysisConfig = AnalysisConfig()) -> StatsResult:
    """Equal-n pooled two-sample t-test and Cohen's d.

    s_p = sqrt((s1^2 + s2^2) / 2) with sample variances,
    t = (mean1 - mean2) / (s_p * sqrt(2/n)), d = (mean1 - mean2) / s_p,
    two-sided p on 2n - 2 degrees of freedom.
    """
    n = len(a)
    if n != len(b):
        raise ValueError(f"samples must have equal length, got {len(a)} and {len(b)}")
    if n < 2:
        raise ValueError("need at least 2 observations per sample")
    diff = _mean(a) - _mean(b)
    sp = math.sqrt((sample_variance(a) + sample_variance(b)) / 2.0)
    if sp == 0.0:
        raise ValueError("zero pooled variance: t and d are undefined")
    t = diff / (sp * math.sqrt(2.0 / n))
    d = diff / sp
    return StatsResult(t=t, p=t_two_sided_p(t, 2 * n - 2), cohens_d=d, pooled_std=sp, effect_label=effect_label(d, cfg), n=n)


def convergence_speed(step: float, normalization_factor: float = 10.0) -> float:
    return max(0.0, 1.0 - step / normalization_factor)


def weighted_score(
    accuracy: float,
    stability_value: float,
    conv_step: float,
    weights: Optional[Dict[str, float]] = None,
    normalization_factor: float = 10.0,
) -> float:
    w = weights or {"accuracy": 0.4, "stability": 0.3, "convergence_speed": 0.3}
    return (
        w["accuracy"] * accuracy
        + w["stability"] * stability_value
        + w["convergence_speed"] * convergence_speed(conv_step, normalization_factor)
    )


def _method_label(scheme: str) -> str:
    try:
        return Scheme(scheme).label
    except ValueError:
        return scheme


def run_metrics(log: RunLog, cfg: AnalysisConfig = AnalysisConfig(), stream: str = "step") -> Dict[str, object]:
    """One Table-1 style row for a run, plus the weighted score."""
    log.validate()
    last = log.records[-1]
    conv = convergence_step(log, "first_max", cfg)
    stab = run_stability(log, stream)
    row = {
        "method": _method_label(log.scheme),
        "final_accuracy": last.accuracy,
        "final_perplexity": last.perplexity,
        "convergence_step": conv,
        "training_stability": stab,
        "avg_reward": _mean(log.avg_rewards),
        "convergence_normalized": conv / cfg.convergence_normalization,
    }
    row["weighted_score"] = weighted_score(
        last.accuracy,
        stab,
        conv,
        {"accuracy": cfg.score_w_accuracy, "stability": cfg.score_w_stability, "convergence_speed": cfg.score_w_speed},
        cfg.convergence_normalization,
    )
    return row


def heatmap_export(logs: Sequence[RunLog], cfg: AnalysisConfig = AnalysisConfig(), stream: str = "step") -> List[Dict[str, object]]:
    """Rows (in input order) of the metrics behind the performance heatmap."""
    if not logs:
        raise ValueError("need at least one run log")
    rows = []
    for log in logs:
        m = run_metrics(log, cfg, stream)
        rows.append({k: m[k] for k in HEATMAP_COLUMNS})
    return rows


def pairwise_comparisons(logs: Sequence[RunLog], cfg: AnalysisConfig = AnalysisConfig()) -> List[Dict[str, object]]:
    """t-test / Cohen's d on per-step average rewards for every pair of runs.

    Runs of unequal length are compared over their common prefix; a pair whose
    pooled variance is zero is reported with ``error`` set.
    """
    out = []
    for la, lb in combinations(logs, 2):
        n = min(len(la), len(lb))
        row = {"run_a": _method_label(la.scheme), "run_b": _method_label(lb.scheme), "n": n}
        try:
            res = compare_runs(la.avg_rewards[:n], lb.avg_rewards[:n], cfg)
        except ValueError as exc:
            row.update(t=None, p=None, cohens_d=None, pooled_std=None, effect=None, significant=None, error=str(exc))
        else:
            row.update(
                t=res.t,
                p=res.p,
                cohens_d=res.cohens_d,
                pooled_std=res.pooled_std,
                effect=res.effect_label.value,
                significant=res.p < cfg.p_value_threshold,
                error=None,
            )
        out.append(row)
    return out
