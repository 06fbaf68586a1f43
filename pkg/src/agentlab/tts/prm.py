"""Judge-based node scoring, trajectory selection and reflection."""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass

from agentlab.core.clients import ModelClient, ask_with_reask
from agentlab.core.prompts import render
from agentlab.core.types import GenParams, StepRecord, Trajectory, describe_steps
from agentlab.tts.verdicts import (
    PRMVerdict,
    ReflectionNote,
    parse_prm_list,
    parse_prm_score,
    parse_reflection,
)


@dataclass
class CandidateNode:
    step: StepRecord
    parent_trajectory: Trajectory
    prm: PRMVerdict | None = None
    reflection: ReflectionNote | None = None

    def __post_init__(self) -> None:
        if self.step.step_number != len(self.parent_trajectory.steps):
            raise ValueError(
                f"candidate step {self.step.step_number} does not extend a "
                f"trajectory of {len(self.parent_trajectory.steps)} steps"
            )

    def render(self) -> str:
        return (
            self.step.describe()
            + "\n- previous_steps:\n"
            + describe_steps(self.parent_trajectory.steps)
        )


@dataclass(frozen=True)
class TrajectoryCandidate:
    index: int
    trajectory: Trajectory


def score_node(node: CandidateNode, judge: ModelClient, params: GenParams = GenParams()) -> PRMVerdict:
    verdict = ask_with_reask(judge, render("prm_score", node=node.render()), parse_prm_score, params)
    # commit only after a full parse
    node.prm = verdict
    node.step.score = float(verdict.score)
    return verdict


def select_trajectory(
    candidates: Sequence[TrajectoryCandidate],
    judge: ModelClient,
    params: GenParams = GenParams(),
) -> int:
    if not candidates:
        raise ValueError("select_trajectory needs at least one candidate")
    if sorted(c.index for c in candidates) != list(range(len(candidates))):
        raise ValueError("candidate indexes must be exactly 0..n-1")
    blocks = [
        f"Trajectory {c.index}:\n{describe_steps(c.trajectory.steps)}"
        for c in sorted(candidates, key=lambda c: c.index)
    ]
    prompt = render("prm_list", trajectories="\n\n".join(blocks))
    n = len(candidates)
    return ask_with_reask(judge, prompt, lambda raw: parse_prm_list(raw, n), params).index


def reflect_node(node: CandidateNode, judge: ModelClient, params: GenParams = GenParams()) -> ReflectionNote:
    if not node.parent_trajectory.steps:
        raise ValueError("reflection needs at least one prior step")
    prompt = render(
        "reflection",
        node=node.step.describe(),
        previous_steps=describe_steps(node.parent_trajectory.steps),
    )
    note = ask_with_reask(judge, prompt, parse_reflection, params)
    node.reflection = note
    node.step.reflection = note.to_text()
    return note


def with_lessons(prompt: str, note: ReflectionNote | None) -> str:
    """Prefix a generation prompt with the lessons of the previous reflection."""
    if note is None or not note.lessons_learned:
        return prompt
    return f"Lessons from the previous step: {note.lessons_learned}\n\n{prompt}"
