import pytest
from hypothesis import given, strategies as st

from rewardsched.config import ConfigError, Direction, ScheduleConfig
from rewardsched.rewards import RewardBreakdown
from rewardsched.schedule import ScheduleState, advance, hybrid_reward, schedule_table, weights_at

C2H = ScheduleConfig(Direction.CONT_TO_HARD, 50, 150)
H2C = ScheduleConfig(Direction.HARD_TO_CONT, 50, 150)
MIX = ScheduleConfig(Direction.CONSTANT, 50, 150, fixed_mix=(0.3, 0.7))


def test_endpoints_and_midpoint():
    assert weights_at(C2H, 0) == (0.0, 1.0)
    assert weights_at(C2H, 49) == (0.0, 1.0)
    assert weights_at(C2H, 50) == (0.0, 1.0)  # ramp value at t_start is 0
    assert weights_at(C2H, 100) == (0.5, 0.5)
    assert weights_at(C2H, 150) == (1.0, 0.0)
    assert weights_at(C2H, 10_000) == (1.0, 0.0)


def test_invalid_config_rejected_at_construction():
    with pytest.raises(ConfigError):
        ScheduleConfig(Direction.CONT_TO_HARD, 150, 150)
    with pytest.raises(ConfigError):
        ScheduleConfig(Direction.CONSTANT, 0, 1)
    with pytest.raises(ConfigError):
        ScheduleConfig(Direction.CONSTANT, 0, 1, fixed_mix=(0.5, 0.6))


def test_negative_step_rejected():
    with pytest.raises(ValueError):
        weights_at(C2H, -1)


steps = st.integers(0, 20_000)
bounds = st.tuples(st.integers(0, 500), st.integers(1, 500)).map(lambda p: (p[0], p[0] + p[1]))


@given(steps, bounds, st.sampled_from([Direction.CONT_TO_HARD, Direction.HARD_TO_CONT]))
def test_weights_sum_to_one(t, b, direction):
    wh, wc = weights_at(ScheduleConfig(direction, *b), t)
    assert abs(wh + wc - 1.0) <= 1e-12
    assert 0.0 <= wh <= 1.0 and 0.0 <= wc <= 1.0


@given(steps, steps, bounds)
def test_monotone(t1, t2, b):
    t1, t2 = sorted((t1, t2))
    c2h, h2c = ScheduleConfig(Direction.CONT_TO_HARD, *b), ScheduleConfig(Direction.HARD_TO_CONT, *b)
    assert weights_at(c2h, t1)[0] <= weights_at(c2h, t2)[0]
    assert weights_at(h2c, t1)[0] >= weights_at(h2c, t2)[0]


@given(steps, bounds)
def test_mirror(t, b):
    wh, wc = weights_at(ScheduleConfig(Direction.CONT_TO_HARD, *b), t)
    assert weights_at(ScheduleConfig(Direction.HARD_TO_CONT, *b), t) == (wc, wh)


def _b(total):
    return RewardBreakdown(total, {"x": total}, {"x": 1.0})


def test_hybrid_examples():
    assert hybrid_reward(_b(0.2), _b(0.9), ScheduleState(0, 1.0, 0.0)).total == 0.2
    assert hybrid_reward(_b(1.0), _b(0.6), ScheduleState(0, 0.5, 0.5)).total == pytest.approx(0.8)
    assert hybrid_reward(_b(0.0), _b(1.0), ScheduleState(0, 0.0, 1.0)).total == 1.0


def test_hybrid_nests_inputs():
    h = hybrid_reward(_b(1.0), _b(0.6), ScheduleState(3, 0.25, 0.75))
    assert h.nested["hard"].total == 1.0 and h.nested["continuous"].total == 0.6
    assert h.weights == {"hard": 0.25, "continuous": 0.75}


unit = st.floats(0, 1)


@given(unit, unit, unit)
def test_hybrid_is_convex_combination(hard, cont, wh):
    state = ScheduleState(0, wh, 1.0 - wh)
    raw = wh * hard + (1.0 - wh) * cont
    out = hybrid_reward(_b(hard), _b(cont), state).total
    assert out == raw  # clipping is a no-op for inputs in [0, 1]
    assert min(hard, cont) - 1e-12 <= out <= max(hard, cont) + 1e-12


def test_advance_crosses_boundaries():
    s = advance(ScheduleState.initial(C2H, 49), C2H)
    assert s.step == 50
    s = advance(s, C2H)
    assert s.w_hard > 0.0  # off the endpoint once the ramp starts moving
    s = advance(ScheduleState.initial(C2H, 149), C2H)
    assert (s.step, s.w_hard, s.w_cont) == (150, 1.0, 0.0)


def test_constant_mix_never_changes():
    s = ScheduleState.initial(MIX)
    for _ in range(300):
        s = advance(s, MIX)
        assert (s.w_hard, s.w_cont) == (0.3, 0.7)


def test_appendix_c_ramp_window():
    cfg = ScheduleConfig(Direction.CONT_TO_HARD, 3, 7)
    rows = schedule_table(cfg, 10)
    moving = [t for t, wh, _ in rows if 0.0 < wh < 1.0]
    assert moving == [4, 5, 6]
    assert rows[3][1:] == (0.0, 1.0) and rows[7][1:] == (1.0, 0.0)
