"""Best-of-N candidate generation and selection."""

from __future__ import annotations

from collections.abc import Callable, Mapping
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from agentlab.core.clients import ModelClient
from agentlab.core.types import GenParams, StepRecord, Trajectory
from agentlab.tts.mixture import MixtureWeights, sample_mixture
from agentlab.tts.prm import CandidateNode
from agentlab.tts.verdicts import PRMVerdict

# (context, client, params) -> the proposed next step
Expand = Callable[[Trajectory, ModelClient, GenParams], StepRecord]
Scorer = Callable[[CandidateNode], PRMVerdict]

DIVERSE_TEMPERATURE = 0.7


@dataclass
class BestOfNResult:
    best: CandidateNode
    best_index: int
    candidates: list[CandidateNode]
    client_ids: list[str]


def candidate_params(n: int, index: int, seed: int, max_tokens: int = 2048) -> GenParams:
    temperature = DIVERSE_TEMPERATURE if n > 1 else 0.0
    return GenParams(temperature=temperature, max_tokens=max_tokens, seed=seed + index)


def score_with_retry(scorer: Scorer, node: CandidateNode) -> PRMVerdict:
    try:
        return scorer(node)
    except Exception:
        return scorer(node)


def best_of_n_full(
    context: Trajectory,
    n: int,
    mixture: MixtureWeights,
    clients: Mapping[str, ModelClient],
    scorer: Scorer,
    expand: Expand,
    seed: int = 0,
    max_workers: int = 1,
) -> BestOfNResult:
    """Like best_of_n but also returns every candidate and which client made it."""
    if n < 1:
        raise ValueError("n must be >= 1")
    missing = set(mixture.client_ids) - clients.keys()
    if missing:
        raise ValueError(f"no client registered for {sorted(missing)}")
    chosen = [sample_mixture(mixture, seed + i) for i in range(n)]

    def make(i: int) -> CandidateNode:
        step = expand(context, clients[chosen[i]], candidate_params(n, i, seed))
        node = CandidateNode(step=step, parent_trajectory=context)
        verdict = score_with_retry(scorer, node)
        node.prm = verdict
        node.step.score = float(verdict.score)
        return node

    if max_workers > 1 and n > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            nodes = list(pool.map(make, range(n)))
    else:
        nodes = [make(i) for i in range(n)]

    best = 0
    for i, node in enumerate(nodes):
        if node.prm.score > nodes[best].prm.score:  # type: ignore[union-attr]
            best = i
    return BestOfNResult(best=nodes[best], best_index=best, candidates=nodes, client_ids=chosen)


def best_of_n(
    context: Trajectory,
    n: int,
    mixture: MixtureWeights,
    clients: Mapping[str, ModelClient],
    scorer: Scorer,
    expand: Expand,
    seed: int = 0,
    max_workers: int = 1,
) -> CandidateNode:
    """Generate ``n`` candidates, score each, keep the best (ties to the lowest index)."""
    return best_of_n_full(context, n, mixture, clients, scorer, expand, seed, max_workers).best
