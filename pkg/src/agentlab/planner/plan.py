"""High-level plan generation, periodic revision, and constraint validation."""

from __future__ import annotations

import json
import re
from collections.abc import Sequence
from dataclasses import dataclass, field, replace

from agentlab.core.clients import ModelClient
from agentlab.core.prompts import render
from agentlab.core.types import GenParams, ToolSpec
from agentlab.errors import JudgeUnparseable, UnparseablePlan

END_PLAN = "<end_plan>"
_NUMBERED = re.compile(r"^\s*(?:\*\*)?(\d+)[.)](?:\*\*)?\s+(.+?)\s*$")
_VERDICT = re.compile(r"\b(INVALID|VALID)\b")


@dataclass(frozen=True)
class Plan:
    steps: tuple[str, ...]
    constraints: tuple[str, ...] = ()
    revision_count: int = 0
    # raw model text the plan was parsed from
    raw: str = field(default="", compare=False, repr=False)

    def __post_init__(self) -> None:
        if not self.steps:
            raise UnparseablePlan("a plan needs at least one step")

    def to_text(self) -> str:
        return "\n".join(f"{i}. {s}" for i, s in enumerate(self.steps, 1))

    def to_dict(self) -> dict:
        return {
            "steps": list(self.steps),
            "constraints": list(self.constraints),
            "revision_count": self.revision_count,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), ensure_ascii=False)

    @classmethod
    def from_dict(cls, data: dict) -> Plan:
        return cls(
            steps=tuple(data["steps"]),
            constraints=tuple(data.get("constraints", ())),
            revision_count=int(data.get("revision_count", 0)),
        )


def parse_plan_steps(text: str) -> list[str]:
    """Numbered lines of ``text`` up to the ``<end_plan>`` tag."""
    head = text.split(END_PLAN, 1)[0]
    steps = []
    for line in head.splitlines():
        m = _NUMBERED.match(line)
        if m:
            steps.append(m.group(2))
    if not steps:
        raise UnparseablePlan("no numbered plan line before <end_plan>")
    return steps


def format_tools(tools: Sequence[ToolSpec]) -> str:
    if not tools:
        return "(no tools)"
    lines = []
    for tool in tools:
        lines.append(f"- {tool.name}: {tool.description}")
        lines.append(f"    Takes inputs: {tool.inputs}")
        lines.append(f"    Returns an output of type: {tool.output_type}")
    return "\n".join(lines)


def format_tips(tips: Sequence[str]) -> str:
    return "\n".join(f"- {t}" for t in tips) if tips else "(none)"


def generate_plan(
    task: str,
    facts: str,
    tips: Sequence[str],
    client: ModelClient,
    tools: Sequence[ToolSpec] = (),
    constraints: Sequence[str] = (),
    params: GenParams = GenParams(),
) -> Plan:
    if not task.strip():
        raise ValueError("task must be non-empty")
    prompt = render(
        "plan_tips",
        task=task,
        tools=format_tools(tools),
        answer_facts=facts or "(none)",
        plan_tips=format_tips(tips),
    )
    raw = client.complete([{"role": "user", "content": prompt}], params)
    return Plan(steps=tuple(parse_plan_steps(raw)), constraints=tuple(constraints), raw=raw)


def revise_plan(
    plan: Plan,
    recent_observations: Sequence[str],
    client: ModelClient,
    task: str = "",
    facts: str = "",
    params: GenParams = GenParams(),
) -> Plan:
    if not recent_observations:
        raise ValueError("revise_plan needs at least one recent observation")
    observations = "\n".join(
        f"[{i}] {obs}" for i, obs in enumerate(recent_observations, 1)
    )
    prompt = render(
        "plan_revision",
        plan=plan.to_text(),
        observations=observations,
        answer_facts=facts or "(none)",
        task=task or "(see plan)",
    )
    raw = client.complete([{"role": "user", "content": prompt}], params)
    steps = tuple(parse_plan_steps(raw))
    return replace(plan, steps=steps, revision_count=plan.revision_count + 1, raw=raw)


def should_revise(step_number: int, cadence_n: int) -> bool:
    if step_number < 1 or cadence_n < 1:
        raise ValueError("step_number and cadence_n must both be >= 1")
    return step_number % cadence_n == 0


@dataclass(frozen=True)
class SubtaskOutput:
    knowledge: str
    valid: bool = field(default=False)


def parse_verdict(text: str) -> bool:
    found = set(_VERDICT.findall(text.upper()))
    if len(found) != 1:
        raise JudgeUnparseable(f"expected exactly one of VALID/INVALID, got {text!r}")
    return found.pop() == "VALID"


def validate_output(
    output: str,
    constraints: Sequence[str],
    client: ModelClient | None,
    params: GenParams = GenParams(),
) -> bool:
    """True when ``output`` satisfies every global constraint.

    With no constraints the check is vacuous and the model is not called.
    """
    if not constraints:
        return True
    if client is None:
        raise ValueError("a judge client is required when constraints are present")
    prompt = render(
        "validate_output",
        constraints="\n".join(f"- {c}" for c in constraints),
        output=output,
    )
    return parse_verdict(client.complete([{"role": "user", "content": prompt}], params))


def checked_output(
    knowledge: str,
    constraints: Sequence[str],
    client: ModelClient | None,
) -> SubtaskOutput:
    return SubtaskOutput(knowledge=knowledge, valid=validate_output(knowledge, constraints, client))
