"""Linear hard/continuous mixing schedule and the hybrid reward."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple

from .config import Direction, ScheduleConfig
from .rewards.breakdown import RewardBreakdown


def ramp(cfg: ScheduleConfig, step: int) -> float:
    """0 before t_start, (t - t_start) / (t_end - t_start) on [t_start, t_end), 1 after."""
    if step < cfg.t_start:
        return 0.0
    if step >= cfg.t_end:
        return 1.0
    return (step - cfg.t_start) / (cfg.t_end - cfg.t_start)


def weights_at(cfg: ScheduleConfig, step: int) -> Tuple[float, float]:
    """Return ``(w_hard, w_cont)`` at ``step``."""
    if step < 0:
        raise ValueError(f"step must be >= 0, got {step}")
    if cfg.direction is Direction.CONSTANT:
        return cfg.fixed_mix
    r = ramp(cfg, step)
    if cfg.direction is Direction.CONT_TO_HARD:
        return r, 1.0 - r
    return 1.0 - r, r


@dataclass(frozen=True)
class ScheduleState:
    step: int
    w_hard: float
    w_cont: float

    @classmethod
    def initial(cls, cfg: ScheduleConfig, step: int = 0) -> "ScheduleState":
        return cls(step, *weights_at(cfg, step))


def advance(state: ScheduleState, cfg: ScheduleConfig) -> ScheduleState:
    return ScheduleState.initial(cfg, state.step + 1)


def hybrid_reward(hard: RewardBreakdown, cont: RewardBreakdown, state: ScheduleState) -> RewardBreakdown:
    mixed = state.w_hard * hard.total + state.w_cont * cont.total
    return RewardBreakdown(
        total=min(1.0, max(0.0, mixed)),
        components={"hard": hard.total, "continuous": cont.total},
        weights={"hard": state.w_hard, "continuous": state.w_cont},
        flags=tuple(dict.fromkeys(hard.flags + cont.flags)),
        nested={"hard": hard, "continuous": cont},
        correct=hard.correct,
    )


def schedule_table(cfg: ScheduleConfig, total_steps: int):
    """Rows ``(step, w_hard, w_cont)`` for steps 0..total_steps inclusive."""
    return [(t, *weights_at(cfg, t)) for t in range(total_steps + 1)]
