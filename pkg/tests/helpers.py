"""Independent oracles and generators shared by the unit and acceptance tests."""

from __future__ import annotations

import math
import random

from agentlab.planner.graph import DependencyGraph, Subtask


def random_dag(rng: random.Random, max_nodes: int = 12) -> DependencyGraph:
    """Edges only go from a lower to a higher index, so the graph is acyclic."""
    n = rng.randint(1, max_nodes)
    ids = [f"ST{i + 1}" for i in range(n)]
    p = rng.random()
    subtasks = {}
    for j, sid in enumerate(ids):
        deps = frozenset(ids[i] for i in range(j) if rng.random() < p)
        subtasks[sid] = Subtask(id=sid, description=f"do {sid}", depends_on=deps)
    return DependencyGraph(subtasks=subtasks)


def brute_force_ready(graph: DependencyGraph, done: set[str], started: set[str]) -> set[str]:
    return {
        sid
        for sid in graph.subtasks
        if sid not in started and all((d, sid) not in graph.edges or d in done for d in graph.subtasks)
    }


def naive_softmax(xs: list[float]) -> list[float]:
    exps = [math.exp(x) for x in xs]
    total = sum(exps)
    return [e / total for e in exps]


def linear_scan_top_k(vectors: list[list[float]], query: list[float], k: int) -> list[int]:
    """Exhaustive cosine ranking with index tie-break, written independently of the index."""
    def cos(a, b):
        dot = sum(x * y for x, y in zip(a, b))
        return max(-1.0, min(1.0, dot / (math.sqrt(sum(x * x for x in a)) * math.sqrt(sum(y * y for y in b)))))

    scored = [(cos(v, query), i) for i, v in enumerate(vectors)]
    scored.sort(key=lambda t: (-t[0], t[1]))
    return [i for _, i in scored[:k]]


def brute_pass_at_k(matrix: list[list[bool]], k: int) -> float:
    hits = 0
    for row in matrix:
        hit = False
        for j in range(k):
            if row[j]:
                hit = True
        hits += hit
    return 100 * hits / len(matrix)


def geometric_sum(r: float, gamma: float, t: int) -> float:
    """sum_{i=1..t} gamma^i * r in closed form."""
    if gamma == 1.0:
        return r * t
    return r * gamma * (1 - gamma**t) / (1 - gamma)


def tree_bytes(root) -> dict[str, bytes]:
    """Relative path -> file bytes for every file under ``root``."""
    from pathlib import Path

    root = Path(root)
    return {p.relative_to(root).as_posix(): p.read_bytes() for p in sorted(root.rglob("*")) if p.is_file()}


def run_golden(fixtures, out) -> int:
    from agentlab.evaluation.cli import main

    golden = fixtures / "golden"
    return main([
        "bench", "--dataset", str(golden / "dataset.jsonl"), "--runs", "3", "--metric", "pass@3",
        "--config", str(golden / "config.ini"), "--out", str(out),
    ])
