"""Hard, continuous and hybrid rewards for tagged chain-of-thought completions,
with a synthetic GRPO simulator and run analytics."""

from .analytics import compare_runs, convergence_step, heatmap_export, stability, weighted_score
from .config import Direction, Scheme, ToolConfig, load_config, preset
from .grpo import AdvantageSet, CompletionGroup, normalize_group, run_training
from .parsing import GroundTruth, ParsedCompletion, answers_match, extract_number, parse_completion
from .policy import SyntheticPolicy, make_dataset, policy_update
from .rewards import (
    RewardBreakdown,
    SegmentLosses,
    TrigramLossModel,
    consistency_reward,
    continuous_reward,
    correctness_numeric,
    correctness_text,
    hard_reward,
    perplexity_reward,
    reasoning_quality,
)
from .runlog import MetricsRecord, RunLog
from .schedule import ScheduleState, advance, hybrid_reward, weights_at

__version__ = "0.1.0"
