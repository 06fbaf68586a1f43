"""Subtask decomposition into a dependency graph and wave scheduling."""

from __future__ import annotations

import json
import re
import threading
import warnings
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from graphlib import CycleError, TopologicalSorter
from typing import Literal

from agentlab.core.clients import ModelClient
from agentlab.core.prompts import render
from agentlab.core.types import GenParams
from agentlab.errors import (
    CyclicDependencies,
    DecompositionError,
    ParallelListMismatch,
    UnparseablePlan,
)
from agentlab.planner.plan import Plan, SubtaskOutput, parse_plan_steps

Status = Literal["pending", "running", "done", "failed"]

_ST_HEADER = re.compile(r"^\s*\*\*\s*ST(\d+)\s*:\s*(.*?)\s*(?:\*\*)?\s*$")
_PARALLEL = re.compile(r"PARALLEL-LIST\s*:?\s*\[?([^\]\n]*)\]?", re.IGNORECASE)
_WAIT = re.compile(r"wait\s+for\s+(.+?)\s+to\s+complete", re.IGNORECASE)
_ST_REF = re.compile(r"ST\s*\[?\s*(\d+)\s*\]?", re.IGNORECASE)


@dataclass
class Subtask:
    id: str
    description: str
    depends_on: frozenset[str] = frozenset()
    steps: tuple[str, ...] = ()
    status: Status = "pending"
    output: SubtaskOutput | None = None

    def __post_init__(self) -> None:
        if self.id in self.depends_on:
            raise DecompositionError(f"{self.id} depends on itself")


@dataclass
class DependencyGraph:
    subtasks: dict[str, Subtask]
    declared_roots: frozenset[str] | None = None
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __post_init__(self) -> None:
        for sub in self.subtasks.values():
            missing = sub.depends_on - self.subtasks.keys()
            if missing:
                raise DecompositionError(f"{sub.id} waits for undefined {sorted(missing)}")
        try:
            tuple(TopologicalSorter(self._predecessors()).static_order())
        except CycleError as exc:
            raise CyclicDependencies(f"dependency cycle: {exc.args[1]}") from exc

    def _predecessors(self) -> dict[str, set[str]]:
        return {sid: set(sub.depends_on) for sid, sub in self.subtasks.items()}

    @property
    def edges(self) -> frozenset[tuple[str, str]]:
        """Precedence edges ``(prerequisite, dependent)``."""
        return frozenset(
            (dep, sid) for sid, sub in self.subtasks.items() for dep in sub.depends_on
        )

    @property
    def roots(self) -> frozenset[str]:
        return frozenset(sid for sid, sub in self.subtasks.items() if not sub.depends_on)

    def status_of(self, sid: str) -> Status:
        return self.subtasks[sid].status

    def mark_running(self, sid: str) -> None:
        with self._lock:
            sub = self.subtasks[sid]
            if sub.status != "pending":
                raise ValueError(f"{sid} is {sub.status}, not pending")
            unmet = [d for d in sub.depends_on if self.subtasks[d].status != "done"]
            if unmet:
                raise ValueError(f"{sid} started before {sorted(unmet)} finished")
            sub.status = "running"

    def mark_done(self, sid: str, output: SubtaskOutput) -> None:
        with self._lock:
            sub = self.subtasks[sid]
            sub.output = output
            sub.status = "done"

    def mark_failed(self, sid: str) -> set[str]:
        """Fail ``sid`` and every subtask downstream of it; returns the failed set."""
        with self._lock:
            failed = {sid}
            frontier = [sid]
            while frontier:
                current = frontier.pop()
                for other in self.subtasks.values():
                    if current in other.depends_on and other.id not in failed:
                        failed.add(other.id)
                        frontier.append(other.id)
            for f in failed:
                if self.subtasks[f].status != "done":
                    self.subtasks[f].status = "failed"
            return failed

    def is_finished(self) -> bool:
        return all(s.status in ("done", "failed") for s in self.subtasks.values())

    def to_text(self) -> str:
        """Render back into the ``PARALLEL-LIST`` / ``**STk:`` grammar."""
        ids = sorted(self.subtasks, key=_st_key)
        roots = [sid for sid in ids if not self.subtasks[sid].depends_on]
        parts = ["PARALLEL-LIST [" + ",".join(sid[2:] for sid in roots) + "]", ""]
        for sid in ids:
            sub = self.subtasks[sid]
            parts.append(f"**{sid}:{sub.description}")
            steps = list(sub.steps)
            deps = sorted(sub.depends_on, key=_st_key)
            if deps and not (steps and _WAIT.search(steps[0])):
                steps.insert(0, f"Wait for {' and '.join(deps)} to complete")
            parts.extend(f"{i}. {s}" for i, s in enumerate(steps, 1))
            parts.append("")
        return "\n".join(parts)

    def to_dict(self) -> dict:
        return {
            "subtasks": [
                {
                    "id": s.id,
                    "description": s.description,
                    "depends_on": sorted(s.depends_on, key=_st_key),
                    "steps": list(s.steps),
                    "status": s.status,
                    "output": None
                    if s.output is None
                    else {"knowledge": s.output.knowledge, "valid": s.output.valid},
                }
                for s in sorted(self.subtasks.values(), key=lambda s: _st_key(s.id))
            ]
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: dict) -> DependencyGraph:
        subtasks = {}
        for row in data["subtasks"]:
            out = row.get("output")
            subtasks[row["id"]] = Subtask(
                id=row["id"],
                description=row["description"],
                depends_on=frozenset(row.get("depends_on", ())),
                steps=tuple(row.get("steps", ())),
                status=row.get("status", "pending"),
                output=None if out is None else SubtaskOutput(out["knowledge"], out["valid"]),
            )
        return cls(subtasks=subtasks)


def _st_key(sid: str) -> tuple[int, str]:
    digits = sid[2:]
    return (int(digits), sid) if digits.isdigit() else (1 << 30, sid)


def parse_subtasks(text: str) -> DependencyGraph:
    """Parse the ``**STk:`` subtask grammar.

    Dependencies come from the first step of each subtask ("Wait for ST[X]
    to complete"). A PARALLEL-LIST that disagrees with the computed roots
    triggers a ParallelListMismatch warning; the computed graph wins.
    """
    declared: frozenset[str] | None = None
    blocks: list[tuple[str, str, list[str]]] = []
    for line in text.splitlines():
        header = _ST_HEADER.match(line)
        if header:
            blocks.append((f"ST{int(header.group(1))}", header.group(2).strip(), []))
            continue
        if declared is None and not blocks:
            m = _PARALLEL.search(line)
            if m:
                declared = frozenset(f"ST{int(n)}" for n in re.findall(r"\d+", m.group(1)))
                continue
        if blocks:
            blocks[-1][2].append(line)

    if not blocks:
        raise DecompositionError("no **ST subtask blocks found")

    subtasks: dict[str, Subtask] = {}
    for sid, description, body in blocks:
        if sid in subtasks:
            raise DecompositionError(f"duplicate subtask id {sid}")
        try:
            steps = parse_plan_steps("\n".join(body))
        except UnparseablePlan:
            steps = []
        deps: set[str] = set()
        if steps:
            wait = _WAIT.search(steps[0])
            if wait:
                deps = {f"ST{int(n)}" for n in _ST_REF.findall(wait.group(1))}
        subtasks[sid] = Subtask(
            id=sid,
            description=description,
            depends_on=frozenset(deps),
            steps=tuple(steps),
        )

    graph = DependencyGraph(subtasks=subtasks, declared_roots=declared)
    if declared is not None and declared != graph.roots:
        warnings.warn(
            ParallelListMismatch(
                f"PARALLEL-LIST {sorted(declared, key=_st_key)} but computed roots "
                f"{sorted(graph.roots, key=_st_key)}"
            ),
            stacklevel=2,
        )
    return graph


def decompose(
    task: str,
    facts: str,
    client: ModelClient,
    experience: Sequence[str] = (),
    params: GenParams = GenParams(),
) -> DependencyGraph | Plan:
    if not task.strip():
        raise ValueError("task must be non-empty")
    prompt = render(
        "subtasks",
        task=task,
        answer_facts=facts or "(none)",
        experience="\n".join(f"- {e}" for e in experience) if experience else "(none)",
    )
    raw = client.complete([{"role": "user", "content": prompt}], params)
    if "**ST" in raw:
        return parse_subtasks(raw)
    return Plan(steps=tuple(parse_plan_steps(raw)), raw=raw)


def executable_set(graph: DependencyGraph) -> set[str]:
    """Pending subtasks whose prerequisites are all done."""
    with graph._lock:
        return {
            sid
            for sid, sub in graph.subtasks.items()
            if sub.status == "pending"
            and all(graph.subtasks[d].status == "done" for d in sub.depends_on)
        }


def run_graph(
    graph: DependencyGraph,
    execute: Callable[[Subtask, dict[str, SubtaskOutput]], SubtaskOutput],
    max_workers: int = 4,
) -> list[set[str]]:
    """Run every subtask wave by wave; each wave is an executable set.

    ``execute`` receives the subtask and the outputs of its prerequisites.
    An exception from ``execute`` fails the subtask and its dependents.
    Returns the waves in execution order.
    """
    waves: list[set[str]] = []

    def run_one(sid: str) -> None:
        sub = graph.subtasks[sid]
        inputs = {d: graph.subtasks[d].output for d in sorted(sub.depends_on, key=_st_key)}
        try:
            output = execute(sub, inputs)  # type: ignore[arg-type]
        except Exception:
            graph.mark_failed(sid)
            return
        graph.mark_done(sid, output)

    with ThreadPoolExecutor(max_workers=max(1, max_workers)) as pool:
        while True:
            ready = executable_set(graph)
            if not ready:
                break
            for sid in ready:
                graph.mark_running(sid)
            waves.append(ready)
            list(pool.map(run_one, sorted(ready, key=_st_key)))
    return waves


def topological_ids(graph: DependencyGraph) -> Iterable[str]:
    return TopologicalSorter(graph._predecessors()).static_order()
