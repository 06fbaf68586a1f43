"""pass@k, mean pass@1, majority vote and per-level aggregation."""

from __future__ import annotations

import json
from collections.abc import Mapping, Sequence
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Literal

from agentlab.errors import InsufficientRuns
from agentlab.evaluation.scoring import exact_match

Metric = Literal["pass@1_avg", "pass@k", "majority_vote"]
METRICS: tuple[str, ...] = ("pass@1_avg", "pass@k", "majority_vote")


@dataclass(frozen=True)
class RunResult:
    task_id: str
    run_index: int
    answer: str
    correct: bool
    retries_used: int = 0
    trajectory_path: str = ""
    level: int = 1
    true_answer: str = ""

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False, sort_keys=True)

    @classmethod
    def from_dict(cls, data: dict) -> RunResult:
        return cls(**{k: data[k] for k in cls.__dataclass_fields__ if k in data})


def _flag(run: RunResult | bool) -> bool:
    return run.correct if isinstance(run, RunResult) else bool(run)


def _first_k(task_id: str, runs: Sequence, k: int) -> Sequence:
    if k < 1:
        raise ValueError("k must be >= 1")
    if len(runs) < k:
        raise InsufficientRuns(f"{task_id} has {len(runs)} runs, need {k}")
    return runs[:k]


def pass_at_k(results: Mapping[str, Sequence[RunResult | bool]], k: int) -> float:
    """Percentage of questions with at least one correct answer among their first k runs."""
    if not results:
        raise InsufficientRuns("no questions to score")
    hits = sum(any(_flag(r) for r in _first_k(tid, runs, k)) for tid, runs in results.items())
    return (100 * hits) / len(results)


def pass_at_1_avg(results: Mapping[str, Sequence[RunResult | bool]], runs: int) -> float:
    """Mean over the first ``runs`` independent runs of the single-run accuracy."""
    if not results:
        raise InsufficientRuns("no questions to score")
    correct = sum(sum(_flag(r) for r in _first_k(tid, rs, runs)) for tid, rs in results.items())
    return float(Fraction(100 * correct, len(results) * runs))


def majority_vote(answers: Sequence[str]) -> str:
    """Representative of the largest group of exact-match-equivalent answers.

    Each answer joins the first group whose representative it matches. Ties
    between groups go to the group whose first member came earliest.
    """
    if not answers:
        raise ValueError("majority_vote needs at least one answer")
    groups: list[list[str]] = []
    for answer in answers:
        for group in groups:
            if exact_match(answer, group[0]):
                group.append(answer)
                break
        else:
            groups.append([answer])
    best = groups[0]
    for group in groups[1:]:
        if len(group) > len(best):
            best = group
    return best[0]


def round_half_up(value: Fraction | float, places: int = 2) -> float:
    exact = Fraction(value)
    scale = 10**places
    scaled = exact * scale
    sign = -1 if scaled < 0 else 1
    rounded = (abs(scaled) + Fraction(1, 2)).__floor__() * sign
    return float(Fraction(rounded, scale))


def question_score(runs: Sequence[RunResult], metric: Metric, k: int, truth: str | None = None) -> Fraction:
    """A question's contribution in [0, 1] under ``metric``."""
    tid = runs[0].task_id if runs else "?"
    head = _first_k(tid, runs, k)
    if metric == "pass@k":
        return Fraction(int(any(r.correct for r in head)))
    if metric == "pass@1_avg":
        return Fraction(sum(r.correct for r in head), k)
    if metric == "majority_vote":
        voted = majority_vote([r.answer for r in head])
        answer_truth = truth if truth is not None else head[0].true_answer
        return Fraction(int(exact_match(voted, answer_truth)))
    raise ValueError(f"unknown metric {metric!r}")


def metric_label(metric: Metric, k: int) -> str:
    if metric == "pass@1_avg":
        return f"pass@1 (mean of {k} independent single runs)"
    if metric == "pass@k":
        return f"pass@{k} (correct in any of {k} runs)"
    return f"majority vote over {k} runs"


@dataclass(frozen=True)
class AggregateReport:
    metric: Metric
    k: int
    average: float
    per_level: dict[int, float]
    counts: dict[int, int] = field(default_factory=dict)
    n_questions: int = 0

    def __post_init__(self) -> None:
        for value in [self.average, *self.per_level.values()]:
            if not 0 <= value <= 100:
                raise ValueError(f"percentage {value} outside [0, 100]")

    @property
    def label(self) -> str:
        return metric_label(self.metric, self.k)

    def to_dict(self) -> dict:
        return {
            "metric": self.metric,
            "label": self.label,
            "k": self.k,
            "n_questions": self.n_questions,
            "average": self.average,
            "per_level": {str(lv): v for lv, v in sorted(self.per_level.items())},
            "counts": {str(lv): c for lv, c in sorted(self.counts.items())},
        }


def aggregate(
    results: Mapping[str, Sequence[RunResult]],
    metric: Metric,
    k: int,
    truths: Mapping[str, str] | None = None,
) -> AggregateReport:
    """Average and per-level percentages, rounded half-up to 2 decimals."""
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}")
    if not results:
        raise InsufficientRuns("no questions to aggregate")
    by_level: dict[int, list[Fraction]] = {}
    for tid, runs in results.items():
        if not runs:
            raise InsufficientRuns(f"{tid} has no runs")
        truth = truths.get(tid) if truths else None
        by_level.setdefault(runs[0].level, []).append(question_score(runs, metric, k, truth))
    every = [s for scores in by_level.values() for s in scores]
    average = round_half_up(100 * sum(every, Fraction(0)) / len(every))
    per_level = {
        lv: round_half_up(100 * sum(scores, Fraction(0)) / len(scores))
        for lv, scores in sorted(by_level.items())
    }
    counts = {lv: len(scores) for lv, scores in sorted(by_level.items())}
    return AggregateReport(
        metric=metric, k=k, average=average, per_level=per_level, counts=counts, n_questions=len(every)
    )
