"""Group advantage normalization and the synthetic GRPO training loop.

The loop mirrors the usual GRPO step (sample prompts, draw G completions
each, score, normalize rewards within each group, update, log) with the
PPO/KL update replaced by a REINFORCE step on the synthetic policy's logits.
"""

from __future__ import annotations

import dataclasses
import math
import random
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np

from .config import Direction, ScheduleConfig, Scheme, ToolConfig, TrainRunConfig
from .parsing import parse_completion
from .policy import Problem, SampledCompletion, SyntheticPolicy, policy_update
from .rewards import RewardBreakdown, TrigramLossModel, continuous_reward, hard_reward
from .rewards.losses import LossProvider
from .runlog import MetricsRecord, RunLog
from .schedule import ScheduleState, advance, hybrid_reward


@dataclass(frozen=True)
class CompletionGroup:
    prompt_id: str
    rewards: Sequence[float]


@dataclass(frozen=True)
class AdvantageSet:
    advantages: List[float]
    mean: float
    std: float


def normalize_group(group: CompletionGroup, epsilon: float = 1e-8) -> AdvantageSet:
    """A_i = (r_i - mean) / std with the population std.

    Groups whose std falls below ``epsilon`` (including G = 1) get all-zero
    advantages.
    """
    r = np.asarray(group.rewards, dtype=float)
    if r.size == 0:
        raise ValueError(f"group {group.prompt_id!r} is empty")
    if not np.all(np.isfinite(r)):
        raise ValueError(f"group {group.prompt_id!r} has non-finite rewards")
    mean = float(r.mean())
    std = float(r.std())
    if std < epsilon:
        return AdvantageSet([0.0] * r.size, mean, std)
    return AdvantageSet(((r - mean) / std).tolist(), mean, std)


def _schedule_for(scheme: Scheme, base: ScheduleConfig) -> Optional[ScheduleConfig]:
    if scheme is Scheme.HYBRID_CONT_TO_HARD:
        return dataclasses.replace(base, direction=Direction.CONT_TO_HARD)
    if scheme is Scheme.HYBRID_HARD_TO_CONT:
        return dataclasses.replace(base, direction=Direction.HARD_TO_CONT)
    return None


def _flat_components(b: RewardBreakdown) -> dict:
    out = dict(b.components)
    for sub in b.nested.values():
        out.update(sub.components)
    return out


class Scorer:
    """Scores completions under one reward scheme from a ToolConfig."""

    def __init__(self, tool: ToolConfig, scheme: Scheme, loss_provider: Optional[LossProvider] = None):
        self.tool = tool
        self.scheme = Scheme(scheme)
        self.loss_provider = loss_provider

    def losses(self, parsed):
        if self.loss_provider is None:
            return None
        return self.loss_provider(parsed.raw, parsed.reasoning or "", parsed.answer_text or "")

    def score(self, parsed, truth, state: Optional[ScheduleState], losses=None) -> RewardBreakdown:
        t = self.tool
        if self.scheme is Scheme.HARD:
            return hard_reward(parsed, truth, t.hard)
        cont = continuous_reward(
            parsed, truth, losses, t.weights, t.correctness, t.perplexity, t.reasoning, t.consistency
        )
        if self.scheme is Scheme.CONTINUOUS:
            return cont
        if state is None:
            raise ValueError(f"scheme {self.scheme.value} needs a schedule state")
        return hybrid_reward(hard_reward(parsed, truth, t.hard), cont, state)


def run_training(
    tool: ToolConfig,
    policy: SyntheticPolicy,
    dataset: Sequence[Problem],
    loss_provider: Optional[LossProvider] = None,
    train: Optional[TrainRunConfig] = None,
) -> RunLog:
    """Run ``train.total_steps`` GRPO steps and return the per-step log.

    Prompts are taken round-robin from ``dataset``; the seeded RNG drives
    only completion sampling. Non-hard schemes get a surrogate trigram loss
    model when ``loss_provider`` is None.
    """
    cfg = train or tool.train
    cfg.validate()
    if not dataset:
        raise ValueError("dataset is empty")
    scheme = cfg.scheme
    if loss_provider is None and scheme is not Scheme.HARD:
        loss_provider = TrigramLossModel(seed=cfg.seed)
    scorer = Scorer(tool, scheme, loss_provider)
    sched_cfg = _schedule_for(scheme, tool.schedule)
    state = ScheduleState.initial(sched_cfg) if sched_cfg else ScheduleState(0, 1.0 if scheme is Scheme.HARD else 0.0, 0.0 if scheme is Scheme.HARD else 1.0)
    rng = random.Random(cfg.seed)
    lr = cfg.learning_rate * cfg.logit_lr_scale
    log = RunLog(scheme.value)
    cursor = 0

    for step in range(1, cfg.total_steps + 1):
        step_completions: List[SampledCompletion] = []
        step_advantages: List[float] = []
        rewards: List[float] = []
        comp_sums: dict = {}
        full_losses: List[float] = []
        for _ in range(cfg.batch_size):
            problem = dataset[cursor % len(dataset)]
            cursor += 1
            group = policy.sample_group(problem, cfg.group_size, rng)
            group_rewards = []
            for c in group:
                parsed = parse_completion(c.text)
                losses = scorer.losses(parsed)
                if losses is not None:
                    full_losses.append(losses.full)
                b = scorer.score(parsed, problem.truth, state, losses)
                group_rewards.append(b.total)
                for k, v in _flat_components(b).items():
                    comp_sums[k] = comp_sums.get(k, 0.0) + v
            adv = normalize_group(CompletionGroup(problem.prompt_id, group_rewards), cfg.advantage_eps)
            step_completions.extend(group)
            step_advantages.extend(adv.advantages)
            rewards.extend(group_rewards)

        n = len(rewards)
        log.append(
            MetricsRecord(
                step=step,
                scheme=scheme.value,
                w_hard=state.w_hard,
                w_cont=state.w_cont,
                accuracy=sum(c.correct for c in step_completions) / n,
                avg_reward=sum(rewards) / n,
                reward_var=float(np.var(rewards)),
                n_completions=n,
                perplexity=math.exp(sum(full_losses) / len(full_losses)) if full_losses else None,
                components={k: v / n for k, v in sorted(comp_sums.items())},
                policy={"correct_logits": list(policy.correct_logits), "format_logits": list(policy.format_logits)},
            )
        )
        policy = policy_update(policy, step_completions, step_advantages, lr)
        if sched_cfg is not None:
            state = advance(state, sched_cfg)
    return log
