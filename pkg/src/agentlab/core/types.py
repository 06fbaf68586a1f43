"""Trajectory data model shared by every module."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field
from typing import Any, Literal

from agentlab.errors import NonMonotonicStep

StepKind = Literal["task", "planning", "action"]

STEP_FIELDS = (
    "kind",
    "step_number",
    "observations",
    "action_output",
    "model_output",
    "error",
    "score",
    "reflection",
)


@dataclass(frozen=True)
class GenParams:
    temperature: float = 0.0
    max_tokens: int = 2048
    seed: int | None = None

    def __post_init__(self) -> None:
        if self.temperature < 0:
            raise ValueError(f"temperature must be >= 0, got {self.temperature}")
        if self.max_tokens < 1:
            raise ValueError(f"max_tokens must be >= 1, got {self.max_tokens}")


@dataclass(frozen=True)
class ToolSpec:
    """Describes a tool to the model: name, purpose and typed parameters."""

    name: str
    description: str
    input_schema: tuple[tuple[str, str], ...] = ()
    output_type: str = "string"

    def __post_init__(self) -> None:
        names = [p for p, _ in self.input_schema]
        if len(names) != len(set(names)):
            raise ValueError(f"tool {self.name!r} has duplicate parameter names")

    @property
    def inputs(self) -> str:
        return json.dumps({p: {"type": t} for p, t in self.input_schema})


@dataclass
class StepRecord:
    kind: StepKind
    step_number: int
    observations: str = ""
    action_output: str = ""
    model_output: str = ""
    error: str | None = None
    score: float | None = None
    reflection: str | None = None

    def __post_init__(self) -> None:
        if self.kind not in ("task", "planning", "action"):
            raise ValueError(f"unknown step kind {self.kind!r}")
        if self.step_number < 0:
            raise ValueError("step_number must be non-negative")
        if self.kind == "task" and (self.action_output or self.model_output):
            raise ValueError("task steps carry no action or model output")
        if self.score is not None and not 0 <= self.score <= 10:
            raise ValueError(f"score {self.score} outside [0, 10]")

    def to_dict(self) -> dict[str, Any]:
        return {name: getattr(self, name) for name in STEP_FIELDS}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> StepRecord:
        return cls(**{name: data.get(name) for name in STEP_FIELDS if name in data})

    def describe(self) -> str:
        """Field-per-line rendering used inside judge and memory prompts."""
        lines = [f"{self.kind.capitalize()}Step", f"- step_number: {self.step_number}"]
        lines.append(f"- observations: {self.observations}")
        if self.kind != "task":
            lines.append(f"- action_output: {self.action_output}")
            lines.append(f"- model_output: {self.model_output}")
        lines.append(f"- error: {self.error}")
        lines.append(f"- score: {self.score}")
        if self.reflection:
            lines.append(f"- reflection: {self.reflection}")
        return "\n".join(lines)


def describe_steps(steps: list[StepRecord]) -> str:
    return "\n\n".join(s.describe() for s in steps) if steps else "(none)"


@dataclass
class Trajectory:
    task_id: str
    steps: list[StepRecord] = field(default_factory=list)
    final_answer: str | None = None
    # "final_answer" or "max_steps_exceeded"; empty while the run is in progress
    stop_reason: str = ""

    @property
    def last_step_number(self) -> int:
        return self.steps[-1].step_number if self.steps else -1

    @property
    def action_steps(self) -> list[StepRecord]:
        return [s for s in self.steps if s.kind == "action"]

    def copy(self) -> Trajectory:
        return Trajectory(
            task_id=self.task_id,
            steps=[StepRecord(**asdict(s)) for s in self.steps],
            final_answer=self.final_answer,
            stop_reason=self.stop_reason,
        )

    def to_jsonl(self, config_hash: str = "") -> str:
        header = {
            "task_id": self.task_id,
            "config_hash": config_hash,
            "final_answer": self.final_answer,
            "stop_reason": self.stop_reason,
        }
        lines = [json.dumps(header, ensure_ascii=False)]
        lines.extend(json.dumps(s.to_dict(), ensure_ascii=False) for s in self.steps)
        return "\n".join(lines) + "\n"

    @classmethod
    def from_jsonl(cls, text: str) -> tuple[Trajectory, str]:
        """Parse a trajectory log; returns the trajectory and its config hash."""
        rows = [json.loads(line) for line in text.splitlines() if line.strip()]
        if not rows:
            raise ValueError("empty trajectory log")
        header, body = rows[0], rows[1:]
        traj = cls(
            task_id=header["task_id"],
            steps=[StepRecord.from_dict(r) for r in body],
            final_answer=header.get("final_answer"),
            stop_reason=header.get("stop_reason", ""),
        )
        return traj, header.get("config_hash", "")


def append_step(trajectory: Trajectory, step: StepRecord) -> Trajectory:
    """Extend ``trajectory`` in place with the next step and return it."""
    expected = trajectory.last_step_number + 1
    if step.step_number != expected:
        raise NonMonotonicStep(
            f"step {step.step_number} cannot follow step {trajectory.last_step_number}"
        )
    if not trajectory.steps and step.kind != "task":
        raise NonMonotonicStep("a trajectory must start with a task step")
    trajectory.steps.append(step)
    return trajectory
