"""Benchmark harness: datasets, scoring, retries, aggregation and reports."""

from agentlab.evaluation.dataset import Question, load_dataset
from agentlab.evaluation.metrics import (
    AggregateReport,
    RunResult,
    aggregate,
    majority_vote,
    pass_at_1_avg,
    pass_at_k,
)
from agentlab.evaluation.runner import bench, run_question
from agentlab.evaluation.scoring import exact_match, is_retryable

__all__ = [
    "AggregateReport",
    "Question",
    "RunResult",
    "aggregate",
    "bench",
    "exact_match",
    "is_retryable",
    "load_dataset",
    "majority_vote",
    "pass_at_1_avg",
    "pass_at_k",
    "run_question",
]
