"""Check that hard-reward GRPO on the synthetic policy improves accuracy.

For each seed, compares mean accuracy over the last and first ``--window``
steps and reports how many runs improved.

    python3 scripts/learning_signal.py --runs 100
"""

from __future__ import annotations

import argparse
import dataclasses
import time

import numpy as np

from rewardsched.config import Scheme, load_config
from rewardsched.grpo import run_training
from rewardsched.policy import SyntheticPolicy, make_dataset


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--config")
    ap.add_argument("--preset", default="paper-sec4")
    ap.add_argument("--runs", type=int, default=100)
    ap.add_argument("--window", type=int, default=20)
    ap.add_argument("--scheme", default="hard", choices=[s.value for s in Scheme])
    args = ap.parse_args()

    tool = load_config(args.config, args.preset)
    dataset = make_dataset(tool.train.dataset_size, len(tool.policy.correct_logits), tool.train.seed)
    gains = []
    t0 = time.perf_counter()
    for k in range(args.runs):
        train = dataclasses.replace(tool.train, scheme=Scheme(args.scheme), seed=tool.train.seed + k)
        acc = run_training(tool, SyntheticPolicy.from_config(tool.policy), dataset, train=train).accuracies
        gains.append(np.mean(acc[-args.window:]) - np.mean(acc[: args.window]))
    gains = np.asarray(gains)
    print(f"{args.scheme}: improved in {int((gains > 0).sum())}/{args.runs} runs, "
          f"mean gain {gains.mean():+.3f} (sd {gains.std():.3f}), {time.perf_counter() - t0:.1f}s")


if __name__ == "__main__":
    main()
