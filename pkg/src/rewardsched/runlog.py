"""Per-step training records and their JSON-lines form."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Union


@dataclass(frozen=True)
class MetricsRecord:
    step: int
    scheme: str
    w_hard: float
    w_cont: float
    accuracy: float
    avg_reward: float
    # population variance of the individual completion rewards within the step
    reward_var: float = 0.0
    n_completions: int = 1
    perplexity: Optional[float] = None
    components: Dict[str, float] = field(default_factory=dict)
    policy: Dict[str, List[float]] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), separators=(", ", ": "))

    @classmethod
    def from_dict(cls, d: dict) -> "MetricsRecord":
        return cls(**d)


@dataclass
class RunLog:
    scheme: str
    records: List[MetricsRecord] = field(default_factory=list)

    def append(self, rec: MetricsRecord) -> None:
        if self.records and rec.step <= self.records[-1].step:
            raise ValueError(f"steps must increase: {rec.step} after {self.records[-1].step}")
        self.records.append(rec)

    def validate(self) -> "RunLog":
        if not self.records:
            raise ValueError("run log is empty")
        if self.records[0].step != 1:
            raise ValueError(f"first step must be 1, got {self.records[0].step}")
        for prev, cur in zip(self.records, self.records[1:]):
            if cur.step <= prev.step:
                raise ValueError(f"steps must increase: {cur.step} after {prev.step}")
        for r in self.records:
            if not 0.0 <= r.accuracy <= 1.0:
                raise ValueError(f"step {r.step}: accuracy {r.accuracy} outside [0, 1]")
        return self

    @property
    def accuracies(self) -> List[float]:
        return [r.accuracy for r in self.records]

    @property
    def avg_rewards(self) -> List[float]:
        return [r.avg_reward for r in self.records]

    def __len__(self) -> int:
        return len(self.records)

    def dumps(self) -> str:
        return "".join(r.to_json() + "\n" for r in self.records)

    def write(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.dumps())

    @classmethod
    def from_lines(cls, lines: Iterable[str], scheme: Optional[str] = None) -> "RunLog":
        records = [MetricsRecord.from_dict(json.loads(line)) for line in lines if line.strip()]
        if scheme is None:
            scheme = records[0].scheme if records else "unknown"
        return cls(scheme, records).validate()

    @classmethod
    def read(cls, path: Union[str, Path]) -> "RunLog":
        with open(path) as fh:
            return cls.from_lines(fh)
