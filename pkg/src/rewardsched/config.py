"""Configuration dataclasses, the two shipped presets, and INI-style load/save.

Every constant defaults to the experiment configuration listing. The two
presets differ only where the published setup disagrees with itself:

* ``paper-sec4``  -- schedule (50, 150), 4 completions per prompt.
* ``appendix-c``  -- schedule (3, 7), 2 completions per prompt.
"""

from __future__ import annotations

import configparser
import dataclasses
import enum
import io
import os
import typing
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple, Union

CONFIG_ENV_VAR = "REWARDSCHED_CONFIG"
_SUM_TOL = 1e-9


class ConfigError(ValueError):
    """Invalid configuration; the message starts with the offending field path."""


def _check(cond: bool, path: str, msg: str) -> None:
    if not cond:
        raise ConfigError(f"{path}: {msg}")


class Direction(str, enum.Enum):
    CONT_TO_HARD = "cont_to_hard"
    HARD_TO_CONT = "hard_to_cont"
    CONSTANT = "constant"


class Scheme(str, enum.Enum):
    HARD = "hard"
    CONTINUOUS = "continuous"
    HYBRID_CONT_TO_HARD = "hybrid_cont_to_hard"
    HYBRID_HARD_TO_CONT = "hybrid_hard_to_cont"

    @property
    def is_hybrid(self) -> bool:
        return self in (Scheme.HYBRID_CONT_TO_HARD, Scheme.HYBRID_HARD_TO_CONT)

    @property
    def label(self) -> str:
        return _SCHEME_LABELS[self]


_SCHEME_LABELS = {
    Scheme.HARD: "Hard_Rewards",
    Scheme.CONTINUOUS: "Continuous_Rewards",
    Scheme.HYBRID_CONT_TO_HARD: "Hybrid_cont_to_hard",
    Scheme.HYBRID_HARD_TO_CONT: "Hybrid_hard_to_cont",
}


@dataclass(frozen=True)
class HardRewardConfig:
    format_bonus: float = 0.2
    clamp_max: float = 1.0

    def validate(self, path: str = "hard") -> None:
        _check(0.0 <= self.format_bonus <= 1.0, f"{path}.format_bonus", "must lie in [0, 1]")
        _check(self.clamp_max == 1.0, f"{path}.clamp_max", "is fixed at 1.0")


@dataclass(frozen=True)
class ContinuousWeights:
    w_correct: float = 0.4
    w_perp: float = 0.25
    w_reason: float = 0.2
    w_consist: float = 0.15

    def as_dict(self) -> dict:
        return {
            "correctness": self.w_correct,
            "perplexity": self.w_perp,
            "reasoning": self.w_reason,
            "consistency": self.w_consist,
        }

    def validate(self, path: str = "weights") -> None:
        for f in dataclasses.fields(self):
            _check(getattr(self, f.name) >= 0, f"{path}.{f.name}", "must be >= 0")
        _check(sum(self.as_dict().values()) <= 1 + _SUM_TOL, path, "weights must sum to <= 1")


@dataclass(frozen=True)
class CorrectnessConfig:
    alpha: float = 0.6
    beta: float = 0.25
    gamma: float = 0.15
    alpha_p: float = 0.7
    beta_p: float = 0.3
    zero_guard: float = 1e-12

    def validate(self, path: str = "correctness") -> None:
        for name in ("alpha", "beta", "gamma", "alpha_p", "beta_p"):
            _check(getattr(self, name) >= 0, f"{path}.{name}", "must be >= 0")
        _check(self.alpha + self.beta + self.gamma <= 1 + _SUM_TOL, path, "alpha + beta + gamma must be <= 1")
        _check(self.alpha_p + self.beta_p <= 1 + _SUM_TOL, path, "alpha_p + beta_p must be <= 1")
        _check(self.zero_guard > 0, f"{path}.zero_guard", "must be > 0")


@dataclass(frozen=True)
class PerplexityConfig:
    w_full: float = 0.4
    w_reason: float = 0.3
    w_ans: float = 0.3
    tau_full: float = 100.0
    tau_reason: float = 80.0
    tau_ans: float = 60.0
    loss_cap: float = 1000.0

    def validate(self, path: str = "perplexity") -> None:
        for name in ("w_full", "w_reason", "w_ans"):
            _check(getattr(self, name) >= 0, f"{path}.{name}", "must be >= 0")
        _check(abs(self.w_full + self.w_reason + self.w_ans - 1) <= _SUM_TOL, path, "segment weights must sum to 1")
        for name in ("tau_full", "tau_reason", "tau_ans", "loss_cap"):
            _check(getattr(self, name) > 0, f"{path}.{name}", "must be > 0")


STEP_WORDS = ("first", "second", "third", "then", "next", "finally", "step")
MATH_SYMBOLS = "+-−×*/=%÷"


@dataclass(frozen=True)
class ReasoningQualityConfig:
    min_words: int = 20
    max_words: int = 200
    ideal_words: int = 100
    penalty_factor: float = 100.0
    step_threshold: int = 3
    math_threshold: int = 5
    w_len: float = 0.4
    w_step: float = 0.3
    w_math: float = 0.3
    step_words: Tuple[str, ...] = STEP_WORDS
    math_symbols: str = MATH_SYMBOLS

    def validate(self, path: str = "reasoning") -> None:
        for name in ("min_words", "max_words", "ideal_words", "step_threshold", "math_threshold"):
            _check(getattr(self, name) > 0, f"{path}.{name}", "must be a positive integer")
        _check(self.min_words <= self.ideal_words <= self.max_words, path, "need min_words <= ideal_words <= max_words")
        _check(self.penalty_factor > 0, f"{path}.penalty_factor", "must be > 0")
        for name in ("w_len", "w_step", "w_math"):
            _check(getattr(self, name) >= 0, f"{path}.{name}", "must be >= 0")
        _check(abs(self.w_len + self.w_step + self.w_math - 1) <= _SUM_TOL, path, "w_len + w_step + w_math must be 1")


@dataclass(frozen=True)
class ConsistencyConfig:
    tolerance: float = 0.01
    match_reward: float = 1.0
    num_reward: float = 0.5
    partial_reward: float = 0.3
    # "answer": reasoning's last number vs the stated answer (single-output check).
    # "truth": stated answer vs the ground truth.
    compare_to: str = "answer"

    def validate(self, path: str = "consistency") -> None:
        _check(self.tolerance > 0, f"{path}.tolerance", "must be > 0")
        _check(
            1 >= self.match_reward >= self.num_reward >= self.partial_reward >= 0,
            path,
            "need 1 >= match_reward >= num_reward >= partial_reward >= 0",
        )
        _check(self.compare_to in ("answer", "truth"), f"{path}.compare_to", "must be 'answer' or 'truth'")


@dataclass(frozen=True)
class ScheduleConfig:
    direction: Direction = Direction.CONT_TO_HARD
    t_start: int = 50
    t_end: int = 150
    fixed_mix: Optional[Tuple[float, float]] = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "direction", Direction(self.direction))
        self.validate()

    def validate(self, path: str = "schedule") -> None:
        _check(self.t_start >= 0, f"{path}.t_start", "must be >= 0")
        _check(self.t_start < self.t_end, path, f"t_start ({self.t_start}) must be < t_end ({self.t_end})")
        if self.direction is Direction.CONSTANT:
            _check(self.fixed_mix is not None, f"{path}.fixed_mix", "required for a constant schedule")
        if self.fixed_mix is not None:
            wh, wc = self.fixed_mix
            _check(wh >= 0 and wc >= 0, f"{path}.fixed_mix", "weights must be >= 0")
            _check(abs(wh + wc - 1) <= 1e-12, f"{path}.fixed_mix", "weights must sum to 1")


@dataclass(frozen=True)
class PolicyConfig:
    """Initial logits of the synthetic policy, one pair per difficulty bucket."""

    correct_logits: Tuple[float, ...] = (-0.5, -1.0, -1.5)
    format_logits: Tuple[float, ...] = (1.5, 1.5, 1.5)

    def validate(self, path: str = "policy") -> None:
        _check(len(self.correct_logits) >= 1, f"{path}.correct_logits", "need at least one bucket")
        _check(
            len(self.correct_logits) == len(self.format_logits),
            path,
            "correct_logits and format_logits must have one entry per bucket",
        )


@dataclass(frozen=True)
class TrainRunConfig:
    total_steps: int = 200
    group_size: int = 4
    batch_size: int = 1
    seed: int = 3407
    learning_rate: float = 5e-6
    # The synthetic policy has two logits per bucket, not LLM weights; this
    # converts the LLM learning rate into a logit step size.
    logit_lr_scale: float = 2e4
    scheme: Scheme = Scheme.HARD
    dataset_size: int = 1000
    advantage_eps: float = 1e-8

    def __post_init__(self) -> None:
        object.__setattr__(self, "scheme", Scheme(self.scheme))

    def validate(self, path: str = "train") -> None:
        _check(self.total_steps >= 1, f"{path}.total_steps", "must be >= 1")
        _check(self.group_size >= 1, f"{path}.group_size", "must be >= 1")
        _check(self.batch_size >= 1, f"{path}.batch_size", "must be >= 1")
        _check(self.learning_rate > 0, f"{path}.learning_rate", "must be > 0")
        _check(self.logit_lr_scale > 0, f"{path}.logit_lr_scale", "must be > 0")
        _check(self.dataset_size >= 1, f"{path}.dataset_size", "must be >= 1")
        _check(self.advantage_eps > 0, f"{path}.advantage_eps", "must be > 0")


@dataclass(frozen=True)
class AnalysisConfig:
    convergence_normalization: float = 10.0
    variance_normalization: float = 1.0
    improvement_threshold: float = 0.01
    improvement_steps: int = 3
    p_value_threshold: float = 0.05
    d_small: float = 0.2
    d_medium: float = 0.5
    d_large: float = 0.8
    score_w_accuracy: float = 0.4
    score_w_stability: float = 0.3
    score_w_speed: float = 0.3

    def validate(self, path: str = "analysis") -> None:
        _check(self.convergence_normalization > 0, f"{path}.convergence_normalization", "must be > 0")
        _check(0 < self.d_small < self.d_medium < self.d_large, path, "need 0 < d_small < d_medium < d_large")
        _check(0 < self.p_value_threshold < 1, f"{path}.p_value_threshold", "must lie in (0, 1)")
        _check(self.improvement_steps >= 1, f"{path}.improvement_steps", "must be >= 1")


@dataclass(frozen=True)
class ToolConfig:
    preset: str = "paper-sec4"
    hard: HardRewardConfig = field(default_factory=HardRewardConfig)
    weights: ContinuousWeights = field(default_factory=ContinuousWeights)
    correctness: CorrectnessConfig = field(default_factory=CorrectnessConfig)
    perplexity: PerplexityConfig = field(default_factory=PerplexityConfig)
    reasoning: ReasoningQualityConfig = field(default_factory=ReasoningQualityConfig)
    consistency: ConsistencyConfig = field(default_factory=ConsistencyConfig)
    schedule: ScheduleConfig = field(default_factory=ScheduleConfig)
    train: TrainRunConfig = field(default_factory=TrainRunConfig)
    policy: PolicyConfig = field(default_factory=PolicyConfig)
    analysis: AnalysisConfig = field(default_factory=AnalysisConfig)

    def validate(self) -> "ToolConfig":
        for name in _SECTIONS:
            getattr(self, name).validate(name)
        return self

    def replace(self, section: str, **changes) -> "ToolConfig":
        return dataclasses.replace(self, **{section: dataclasses.replace(getattr(self, section), **changes)})


_SECTIONS = (
    "hard", "weights", "correctness", "perplexity", "reasoning",
    "consistency", "schedule", "train", "policy", "analysis",
)

PRESETS = {
    "paper-sec4": ToolConfig(preset="paper-sec4"),
    "appendix-c": ToolConfig(
        preset="appendix-c",
        schedule=ScheduleConfig(t_start=3, t_end=7),
        train=TrainRunConfig(group_size=2),
    ),
}


def preset(name: str) -> ToolConfig:
    try:
        return PRESETS[name]
    except KeyError:
        raise ConfigError(f"preset: unknown preset {name!r}; choose from {sorted(PRESETS)}") from None


# --- INI serialization -------------------------------------------------------


def _format_value(value) -> str:
    if value is None:
        return "none"
    if isinstance(value, enum.Enum):
        return value.value
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, tuple):
        return ", ".join(_format_value(v) for v in value)
    return str(value)


def _parse_value(text: str, tp, path: str):
    text = text.strip()
    origin = typing.get_origin(tp)
    if origin is Union:
        args = [a for a in typing.get_args(tp) if a is not type(None)]
        if text.lower() == "none":
            return None
        return _parse_value(text, args[0], path)
    if origin in (tuple, Tuple):
        args = typing.get_args(tp)
        items = [t for t in (p.strip() for p in text.split(",")) if t] if text else []
        inner = args[0]
        if len(args) == 2 and args[1] is Ellipsis:
            return tuple(_parse_value(t, inner, path) for t in items)
        _check(len(items) == len(args), path, f"expected {len(args)} comma-separated values")
        return tuple(_parse_value(t, a, path) for t, a in zip(items, args))
    try:
        if isinstance(tp, type) and issubclass(tp, enum.Enum):
            return tp(text)
        if tp is bool:
            if text.lower() in ("true", "yes", "1"):
                return True
            if text.lower() in ("false", "no", "0"):
                return False
            raise ValueError(text)
        if tp is int:
            return int(text)
        if tp is float:
            return float(text)
    except ValueError:
        raise ConfigError(f"{path}: cannot parse {text!r} as {getattr(tp, '__name__', tp)}") from None
    return text


def to_ini(cfg: ToolConfig) -> str:
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    parser["meta"] = {"preset": cfg.preset}
    for name in _SECTIONS:
        section = getattr(cfg, name)
        parser[name] = {f.name: _format_value(getattr(section, f.name)) for f in dataclasses.fields(section)}
    buf = io.StringIO()
    parser.write(buf)
    return buf.getvalue()


def from_ini(text: str, base: Optional[ToolConfig] = None) -> ToolConfig:
    """Parse an INI config. Sections/keys not present fall back to ``base``
    (or to the preset named in ``[meta]``); unknown sections or keys are errors."""
    parser = configparser.ConfigParser(interpolation=None)
    parser.optionxform = str
    try:
        parser.read_string(text)
    except configparser.Error as exc:
        raise ConfigError(f"<file>: {exc}") from None

    for sec in parser.sections():
        _check(sec == "meta" or sec in _SECTIONS, sec, "unknown section")
    if parser.has_section("meta"):
        for key in parser["meta"]:
            _check(key == "preset", f"meta.{key}", "unknown key")
    if base is None:
        base = preset(parser.get("meta", "preset", fallback="paper-sec4"))
    cfg = base
    if parser.has_option("meta", "preset"):
        cfg = dataclasses.replace(cfg, preset=parser.get("meta", "preset"))

    for name in _SECTIONS:
        if not parser.has_section(name):
            continue
        current = getattr(cfg, name)
        hints = typing.get_type_hints(type(current))
        known = {f.name for f in dataclasses.fields(current)}
        changes = {}
        for key, raw in parser[name].items():
            path = f"{name}.{key}"
            _check(key in known, path, "unknown key")
            changes[key] = _parse_value(raw, hints[key], path)
        try:
            cfg = dataclasses.replace(cfg, **{name: dataclasses.replace(current, **changes)})
        except ConfigError:
            raise
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"{name}: {exc}") from None
    return cfg.validate()


def load_config(path: Optional[Union[str, Path]] = None, preset_name: Optional[str] = None) -> ToolConfig:
    """Resolve the effective config.

    ``path`` (or $REWARDSCHED_CONFIG when ``path`` is None) is layered on top of
    ``preset_name``; with neither, the ``paper-sec4`` preset is returned.
    """
    if path is None:
        path = os.environ.get(CONFIG_ENV_VAR) or None
    base = preset(preset_name) if preset_name else None
    if path is None:
        return (base or preset("paper-sec4")).validate()
    return from_ini(Path(path).read_text(), base=base)
