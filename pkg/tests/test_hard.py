from hypothesis import given, strategies as st

from rewardsched.config import HardRewardConfig
from rewardsched.parsing import GroundTruth, parse_completion
from rewardsched.rewards import hard_reward

TRUTH = GroundTruth.from_text("56")
GOOD = "<reasoning>7 * 8 = 56</reasoning><answer>56</answer>"
WRONG = "<reasoning>7 * 8 = 54</reasoning><answer>54</answer>"


def test_correct_and_formatted_clamps_to_one():
    b = hard_reward(parse_completion(GOOD), TRUTH, HardRewardConfig(0.2))
    assert b.components == {"correct": 1.0, "format": 0.2}
    assert b.total == 1.0
    assert b.correct


def test_wrong_but_formatted_gets_bonus():
    assert hard_reward(parse_completion(WRONG), TRUTH).total == 0.2


def test_wrong_no_tags_is_zero():
    assert hard_reward(parse_completion("the answer is 54"), TRUTH).total == 0.0


def test_bonus_needs_both_tag_pairs():
    b = hard_reward(parse_completion("<answer>54</answer>"), TRUTH)
    assert b.components["format"] == 0.0
    b = hard_reward(parse_completion("<answer>56</answer>"), TRUTH)
    assert b.total == 1.0 and b.components["format"] == 0.0


completions = st.one_of(
    st.text(max_size=80),
    st.builds(
        lambda r, a: f"<reasoning>{r}</reasoning><answer>{a}</answer>",
        st.text(max_size=30),
        st.one_of(st.integers(-100, 100).map(str), st.text(max_size=10)),
    ),
)
truths = st.one_of(st.integers(-100, 100).map(str), st.text(max_size=10)).map(GroundTruth.from_text)
bonus = st.floats(0.0, 1.0)


@given(completions, truths, bonus)
def test_range_and_bonus_floor(raw, truth, vf):
    p = parse_completion(raw)
    total = hard_reward(p, truth, HardRewardConfig(vf)).total
    assert 0.0 <= total <= 1.0
    if p.well_formed:
        assert total >= vf


@given(st.text(max_size=30), st.integers(-100, 100), bonus)
def test_monotone_in_correctness(reasoning, ans, vf):
    cfg = HardRewardConfig(vf)
    raw = f"<reasoning>{reasoning}</reasoning><answer>{ans}</answer>"
    right = hard_reward(parse_completion(raw), GroundTruth.from_text(str(ans)), cfg).total
    wrong = hard_reward(parse_completion(raw), GroundTruth.from_text(str(ans + 1)), cfg).total
    assert right >= wrong


@given(completions, truths)
def test_zero_bonus_is_binary(raw, truth):
    assert hard_reward(parse_completion(raw), truth, HardRewardConfig(0.0)).total in (0.0, 1.0)
