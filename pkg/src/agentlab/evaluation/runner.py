"""Running questions with the retry protocol, and whole benchmark runs."""

from __future__ import annotations

import json
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from agentlab.core.types import Trajectory
from agentlab.evaluation.dataset import Question
from agentlab.evaluation.metrics import METRICS, AggregateReport, RunResult, aggregate
from agentlab.evaluation.report import write_report
from agentlab.evaluation.scoring import exact_match, is_retryable

DEFAULT_MAX_RETRIES = 2

# solve(question, run_index, attempt) -> trajectory or plain answer text
Solver = Callable[[Question, int, int], "Trajectory | str | None"]


def _answer_of(outcome: Trajectory | str | None) -> tuple[str, Trajectory | None]:
    if isinstance(outcome, Trajectory):
        return outcome.final_answer or "", outcome
    return outcome or "", None


def trajectory_name(task_id: str, run_index: int, attempt: int) -> str:
    safe = "".join(c if c.isalnum() or c in "-_." else "_" for c in task_id)
    return f"trajectories/{safe}.run{run_index}.attempt{attempt}.jsonl"


def run_question(
    question: Question,
    solve: Solver,
    max_retries: int = DEFAULT_MAX_RETRIES,
    run_index: int = 0,
    out_dir: str | Path | None = None,
    config_hash: str = "",
) -> RunResult:
    """Answer one question, re-asking only while the answer is empty or a give-up.

    A wrong but definite answer is final. A solver exception counts as an
    empty answer.
    """
    if max_retries < 0:
        raise ValueError("max_retries must be >= 0")
    attempt = 0
    path = ""
    while True:
        try:
            answer, traj = _answer_of(solve(question, run_index, attempt))
        except Exception as exc:
            answer, traj = "", Trajectory(task_id=question.task_id, stop_reason=f"error: {type(exc).__name__}")
        if out_dir is not None and traj is not None:
            path = trajectory_name(question.task_id, run_index, attempt)
            target = Path(out_dir) / path
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(traj.to_jsonl(config_hash), encoding="utf-8")
        if not is_retryable(answer) or attempt >= max_retries:
            break
        attempt += 1
    return RunResult(
        task_id=question.task_id,
        run_index=run_index,
        answer=answer,
        correct=exact_match(answer, question.true_answer),
        retries_used=attempt,
        trajectory_path=path,
        level=question.level,
        true_answer=question.true_answer,
    )


def group_results(results: Sequence[RunResult]) -> dict[str, list[RunResult]]:
    grouped: dict[str, list[RunResult]] = {}
    for r in results:
        grouped.setdefault(r.task_id, []).append(r)
    for runs in grouped.values():
        runs.sort(key=lambda r: r.run_index)
    return grouped


def standard_reports(grouped: dict[str, list[RunResult]], runs: int, k: int) -> list[AggregateReport]:
    """Every metric the run count supports, each labelled separately."""
    return [
        aggregate(grouped, "pass@1_avg", runs),
        aggregate(grouped, "pass@k", k),
        aggregate(grouped, "majority_vote", runs),
    ]


@dataclass(frozen=True)
class BenchOutcome:
    primary: AggregateReport
    reports: list[AggregateReport]
    results: list[RunResult]


def bench(
    questions: Sequence[Question],
    solve: Solver,
    runs: int = 1,
    metric: str = "pass@1_avg",
    k: int | None = None,
    out_dir: str | Path | None = None,
    workers: int = 4,
    max_retries: int = DEFAULT_MAX_RETRIES,
    config_hash: str = "",
    meta: dict | None = None,
) -> BenchOutcome:
    """Run every question ``runs`` times and aggregate.

    Questions run on a bounded pool; results are appended to
    ``results.jsonl`` by this thread alone, in dataset then run order, so
    the file is the same whatever the scheduling.
    """
    if runs < 1:
        raise ValueError("runs must be >= 1")
    if metric not in METRICS:
        raise ValueError(f"unknown metric {metric!r}; expected one of {METRICS}")
    k = runs if k is None else k
    if not 1 <= k <= runs:
        raise ValueError(f"k must be in 1..{runs}, got {k}")
    out = Path(out_dir) if out_dir is not None else None
    results_file = None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
        results_file = (out / "results.jsonl").open("w", encoding="utf-8")

    def one(question: Question) -> list[RunResult]:
        return [run_question(question, solve, max_retries, r, out, config_hash) for r in range(runs)]

    collected: list[RunResult] = []
    try:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            for batch in pool.map(one, questions):
                collected.extend(batch)
                if results_file is not None:
                    for r in batch:
                        results_file.write(r.to_json() + "\n")
                    results_file.flush()
    finally:
        if results_file is not None:
            results_file.close()

    grouped = group_results(collected)
    primary_k = k if metric == "pass@k" else runs
    primary = aggregate(grouped, metric, primary_k)
    reports = standard_reports(grouped, runs, k)
    if out is not None:
        info = {"runs": runs, "k": k, "metric": metric, "config_hash": config_hash, **(meta or {})}
        write_report(out, primary, reports, info)
    return BenchOutcome(primary=primary, reports=reports, results=collected)


def load_results(path: str | Path) -> list[RunResult]:
    with open(path, encoding="utf-8") as fh:
        return [RunResult.from_dict(json.loads(line)) for line in fh if line.strip()]
