import pytest
from hypothesis import given, strategies as st

from rewardsched.config import (
    ConfigError,
    ContinuousWeights,
    Direction,
    PRESETS,
    ToolConfig,
    from_ini,
    load_config,
    preset,
    to_ini,
)


@pytest.mark.parametrize("name", sorted(PRESETS))
def test_presets_valid_and_round_trip(name):
    cfg = preset(name).validate()
    assert from_ini(to_ini(cfg)) == cfg


def test_preset_constants():
    sec4, app = preset("paper-sec4"), preset("appendix-c")
    assert (sec4.schedule.t_start, sec4.schedule.t_end, sec4.train.group_size) == (50, 150, 4)
    assert (app.schedule.t_start, app.schedule.t_end, app.train.group_size) == (3, 7, 2)
    for cfg in (sec4, app):
        assert cfg.hard.format_bonus == 0.2
        assert cfg.weights == ContinuousWeights(0.4, 0.25, 0.2, 0.15)
        assert (cfg.correctness.alpha, cfg.correctness.beta, cfg.correctness.gamma) == (0.6, 0.25, 0.15)
        assert (cfg.correctness.alpha_p, cfg.correctness.beta_p) == (0.7, 0.3)
        assert (cfg.perplexity.tau_full, cfg.perplexity.tau_reason, cfg.perplexity.tau_ans) == (100.0, 80.0, 60.0)
        assert cfg.perplexity.loss_cap == 1000.0
        assert (cfg.reasoning.min_words, cfg.reasoning.ideal_words, cfg.reasoning.max_words) == (20, 100, 200)
        assert (cfg.consistency.match_reward, cfg.consistency.num_reward, cfg.consistency.partial_reward) == (1.0, 0.5, 0.3)
        assert cfg.consistency.tolerance == 0.01
        assert (cfg.train.seed, cfg.train.learning_rate, cfg.train.total_steps) == (3407, 5e-6, 200)
        assert (cfg.analysis.d_small, cfg.analysis.d_medium, cfg.analysis.d_large) == (0.2, 0.5, 0.8)


def test_partial_file_layers_on_preset():
    cfg = from_ini("[meta]\npreset = appendix-c\n[hard]\nformat_bonus = 0.1\n")
    assert cfg.hard.format_bonus == 0.1
    assert cfg.schedule.t_end == 7


@pytest.mark.parametrize(
    "text, path",
    [
        ("[hard]\nbogus = 1\n", "hard.bogus"),
        ("[nonsense]\nx = 1\n", "nonsense"),
        ("[hard]\nformat_bonus = 1.5\n", "hard.format_bonus"),
        ("[schedule]\nt_start = 10\nt_end = 5\n", "schedule"),
        ("[weights]\nw_correct = 0.9\n", "weights"),
        ("[train]\ntotal_steps = many\n", "train.total_steps"),
        ("[meta]\npreset = nope\n", "preset"),
    ],
)
def test_invalid_configs_name_the_field(text, path):
    with pytest.raises(ConfigError) as err:
        from_ini(text)
    assert str(err.value).startswith(path)


def test_env_var_config_path(tmp_path, monkeypatch):
    p = tmp_path / "c.ini"
    p.write_text("[train]\nseed = 11\n")
    monkeypatch.setenv("REWARDSCHED_CONFIG", str(p))
    assert load_config().train.seed == 11
    monkeypatch.delenv("REWARDSCHED_CONFIG")
    assert load_config().train.seed == 3407


@given(
    st.floats(0, 1),
    st.integers(0, 100),
    st.integers(1, 100),
    st.sampled_from(list(Direction)),
    st.floats(0, 1),
    st.text(st.characters(whitelist_categories=("Ll",)), min_size=1, max_size=8),
)
def test_round_trip_property(vf, ts, span, direction, mix, word):
    cfg = ToolConfig()
    cfg = cfg.replace("hard", format_bonus=vf)
    cfg = cfg.replace("schedule", t_start=ts, t_end=ts + span, direction=direction, fixed_mix=(mix, 1.0 - mix) if abs(mix + (1.0 - mix) - 1.0) <= 1e-12 else (0.5, 0.5))
    cfg = cfg.replace("reasoning", step_words=("first", word))
    assert from_ini(to_ini(cfg)) == cfg
