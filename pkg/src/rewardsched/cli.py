"""Command-line entry point: ``rewardsched {score,simulate,analyze,schedule,config}``."""

from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import logging
import sys
from pathlib import Path
from typing import List, Optional, Sequence, TextIO

from . import analytics
from .config import ConfigError, Direction, Scheme, ToolConfig, load_config, to_ini
from .grpo import Scorer, run_training
from .parsing import GroundTruth, parse_completion
from .policy import SyntheticPolicy, make_dataset
from .rewards import SegmentLosses, TrigramLossModel
from .runlog import RunLog
from .schedule import ScheduleState, schedule_table

log = logging.getLogger("rewardsched")

SUMMARY_COLUMNS = analytics.HEATMAP_COLUMNS[:6]


def _scheme_schedule(tool: ToolConfig, scheme: Scheme):
    direction = Direction.CONT_TO_HARD if scheme is Scheme.HYBRID_CONT_TO_HARD else Direction.HARD_TO_CONT
    return dataclasses.replace(tool.schedule, direction=direction)


def _parse_losses(value) -> Optional[SegmentLosses]:
    if value is None:
        return None
    if isinstance(value, dict):
        return SegmentLosses(float(value["full"]), float(value["reasoning"]), float(value["answer"]))
    if isinstance(value, (list, tuple)) and len(value) == 3:
        return SegmentLosses(*(float(v) for v in value))
    raise ValueError("losses must be {full, reasoning, answer} or a list of three numbers")


def score_lines(
    lines: Sequence[str],
    tool: ToolConfig,
    scheme: Scheme,
    step: Optional[int] = None,
    surrogate_losses: bool = False,
) -> List[dict]:
    """Score BatchRecord JSON lines; one output dict per input line, in order."""
    scheme = Scheme(scheme)
    if scheme.is_hybrid and step is None:
        raise ValueError(f"--step is required for scheme {scheme.value}")
    state = ScheduleState.initial(_scheme_schedule(tool, scheme), step) if scheme.is_hybrid else None
    provider = TrigramLossModel(seed=tool.train.seed) if surrogate_losses else None
    scorer = Scorer(tool, scheme)
    seen = set()
    out = []
    for lineno, line in enumerate(lines, start=1):
        rec_id = None
        try:
            rec = json.loads(line)
            if not isinstance(rec, dict):
                raise ValueError("record must be a JSON object")
            rec_id = rec.get("id")
            for key in ("id", "completion", "truth"):
                if key not in rec:
                    raise ValueError(f"missing field {key!r}")
            if rec_id in seen:
                raise ValueError(f"duplicate id {rec_id!r}")
            seen.add(rec_id)
            parsed = parse_completion(str(rec["completion"]))
            losses = _parse_losses(rec.get("losses"))
            if losses is None and provider is not None:
                losses = provider(parsed.raw, parsed.reasoning or "", parsed.answer_text or "")
            b = scorer.score(parsed, GroundTruth.from_text(str(rec["truth"])), state, losses)
        except (ValueError, TypeError, KeyError) as exc:
            msg = exc.msg if isinstance(exc, json.JSONDecodeError) else str(exc)
            out.append({"line": lineno, "id": rec_id, "error": f"line {lineno}: {msg}"})
            continue
        row = {"line": lineno, "id": rec_id, "scheme": scheme.value}
        if state is not None:
            row.update(step=state.step, w_hard=state.w_hard, w_cont=state.w_cont)
        row.update(b.to_dict())
        out.append(row)
    return out


def _write_csv(rows: Sequence[dict], columns: Sequence[str], fh: TextIO) -> None:
    w = csv.DictWriter(fh, fieldnames=list(columns), extrasaction="ignore", lineterminator="\n")
    w.writeheader()
    for r in rows:
        w.writerow({k: ("" if r.get(k) is None else r.get(k)) for k in columns})


def _fmt(v, digits: int = 3) -> str:
    if v is None:
        return "-"
    if isinstance(v, bool):
        return str(v)
    if isinstance(v, float):
        return f"{v:.{digits}f}"
    return str(v)


def format_table(rows: Sequence[dict], columns: Sequence[str], digits: Optional[dict] = None) -> str:
    digits = digits or {}
    cells = [[_fmt(r.get(c), digits.get(c, 3)) for c in columns] for r in rows]
    widths = [max(len(c), *(len(row[i]) for row in cells)) if cells else len(c) for i, c in enumerate(columns)]
    lines = ["  ".join(c.ljust(w) for c, w in zip(columns, widths))]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(v.ljust(w) for v, w in zip(row, widths)) for row in cells]
    return "\n".join(lines)


_TABLE_DIGITS = {"final_perplexity": 2}


# --- subcommands --------------------------------------------------------------


def cmd_score(args) -> int:
    tool = load_config(args.config, args.preset)
    src = sys.stdin if args.input == "-" else open(args.input)
    with src:
        lines = [ln for ln in src.read().splitlines()]
    try:
        rows = score_lines(lines, tool, Scheme(args.scheme), args.step, args.surrogate_losses)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    dst = sys.stdout if args.out in (None, "-") else open(args.out, "w")
    n_err = 0
    try:
        for r in rows:
            dst.write(json.dumps(r) + "\n")
            if "error" in r:
                n_err += 1
                print(f"error: {r['error']}", file=sys.stderr)
            elif "missing_losses" in r.get("flags", ()):
                log.warning("record %r (line %d): no segment losses, perplexity component set to 0", r["id"], r["line"])
    finally:
        if dst is not sys.stdout:
            dst.close()
    return 1 if n_err else 0


def simulate(tool: ToolConfig, schemes: Sequence[Scheme], out_dir: Path) -> List[dict]:
    out_dir.mkdir(parents=True, exist_ok=True)
    dataset = make_dataset(tool.train.dataset_size, len(tool.policy.correct_logits), tool.train.seed)
    provider = TrigramLossModel(seed=tool.train.seed)
    rows = []
    for scheme in schemes:
        train = dataclasses.replace(tool.train, scheme=scheme)
        run = run_training(tool, SyntheticPolicy.from_config(tool.policy), dataset, provider, train)
        run.write(out_dir / f"runlog_{scheme.value}.jsonl")
        rows.append(analytics.run_metrics(run, tool.analysis))
    with open(out_dir / "summary.csv", "w") as fh:
        _write_csv(rows, SUMMARY_COLUMNS, fh)
    (out_dir / "config.ini").write_text(to_ini(tool))
    return rows


def cmd_simulate(args) -> int:
    tool = load_config(args.config, args.preset)
    changes = {}
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.steps is not None:
        changes["total_steps"] = args.steps
    if args.group_size is not None:
        changes["group_size"] = args.group_size
    if changes:
        tool = tool.replace("train", **changes).validate()
    schemes = list(Scheme) if args.scheme == "all" else [Scheme(args.scheme)]
    rows = simulate(tool, schemes, Path(args.out))
    print(format_table(rows, SUMMARY_COLUMNS, _TABLE_DIGITS))
    return 0


def analyze(logs: Sequence[RunLog], tool: ToolConfig, stream: str = "step"):
    metrics = [analytics.run_metrics(lg, tool.analysis, stream) for lg in logs]
    pairs = analytics.pairwise_comparisons(logs, tool.analysis)
    return metrics, pairs


METRIC_COLUMNS = analytics.HEATMAP_COLUMNS + ("weighted_score",)
PAIR_COLUMNS = ("run_a", "run_b", "n", "t", "p", "cohens_d", "pooled_std", "effect", "significant", "error")


def cmd_analyze(args) -> int:
    tool = load_config(args.config, args.preset)
    logs = []
    for path in args.logs:
        try:
            logs.append(RunLog.read(path))
        except (OSError, ValueError, TypeError) as exc:
            print(f"error: cannot read run log {path}: {exc}", file=sys.stderr)
            return 1
    metrics, pairs = analyze(logs, tool, args.stream)
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        with open(out / "metrics.csv", "w") as fh:
            _write_csv(metrics, METRIC_COLUMNS, fh)
        with open(out / "pairs.csv", "w") as fh:
            _write_csv(pairs, PAIR_COLUMNS, fh)
        (out / "report.json").write_text(json.dumps({"runs": metrics, "pairs": pairs}, indent=2) + "\n")
    print(format_table(metrics, METRIC_COLUMNS, _TABLE_DIGITS))
    if pairs:
        print()
        print(format_table(pairs, PAIR_COLUMNS[:-1], {"p": 4}))
    return 0


def cmd_schedule(args) -> int:
    tool = load_config(args.config, args.preset)
    sched = tool.schedule
    if args.mix:
        wh, wc = (float(x) for x in args.mix.split(","))
        sched = dataclasses.replace(sched, direction=Direction.CONSTANT, fixed_mix=(wh, wc))
    elif args.direction:
        sched = dataclasses.replace(sched, direction=Direction(args.direction))
    steps = args.steps if args.steps is not None else tool.train.total_steps
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["step", "w_hard", "w_cont"])
    w.writerows(schedule_table(sched, steps))
    if args.out in (None, "-"):
        sys.stdout.write(buf.getvalue())
    else:
        Path(args.out).write_text(buf.getvalue())
    return 0


def cmd_config(args) -> int:
    sys.stdout.write(to_ini(load_config(args.config, args.preset)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="rewardsched", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="INI config file (default: $REWARDSCHED_CONFIG)")
        sp.add_argument("--preset", choices=["paper-sec4", "appendix-c"], help="base preset")

    sp = sub.add_parser("score", help="score a JSON-lines batch of completions")
    common(sp)
    sp.add_argument("input", help="JSON-lines file of {id, completion, truth, losses?}; '-' for stdin")
    sp.add_argument("--scheme", choices=[s.value for s in Scheme], default=Scheme.HARD.value)
    sp.add_argument("--step", type=int, help="schedule step (hybrid schemes)")
    sp.add_argument("--surrogate-losses", action="store_true", help="fill missing losses with the trigram surrogate")
    sp.add_argument("--out", help="output JSON-lines file (default stdout)")
    sp.set_defaults(func=cmd_score)

    sp = sub.add_parser("simulate", help="run the synthetic GRPO simulator")
    common(sp)
    sp.add_argument("--scheme", choices=["all"] + [s.value for s in Scheme], default="all")
    sp.add_argument("--seed", type=int)
    sp.add_argument("--steps", type=int)
    sp.add_argument("--group-size", type=int)
    sp.add_argument("--out", default="runs", help="output directory")
    sp.set_defaults(func=cmd_simulate)

    sp = sub.add_parser("analyze", help="compare run logs")
    common(sp)
    sp.add_argument("logs", nargs="+")
    sp.add_argument("--stream", choices=["step", "completion"], default="step", help="reward stream for stability")
    sp.add_argument("--out", help="directory for metrics.csv, pairs.csv, report.json")
    sp.set_defaults(func=cmd_analyze)

    sp = sub.add_parser("schedule", help="emit the hard/continuous weight schedule as CSV")
    common(sp)
    sp.add_argument("--direction", choices=[d.value for d in Direction])
    sp.add_argument("--mix", metavar="W_HARD,W_CONT", help="constant mix, e.g. 0.5,0.5")
    sp.add_argument("--steps", type=int)
    sp.add_argument("--out")
    sp.set_defaults(func=cmd_schedule)

    sp = sub.add_parser("config", help="print the effective config as INI")
    common(sp)
    sp.set_defaults(func=cmd_config)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
