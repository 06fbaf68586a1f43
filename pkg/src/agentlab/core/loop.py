"""The ReAct-style run loop: plan, then alternate reasoning and tool calls."""

from __future__ import annotations

import re
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field

from agentlab.core.clients import Message, ModelClient
from agentlab.core.prompts import render
from agentlab.core.tools import DEFAULT_OUTPUT_CAP, Tool, invoke, parse_action, validate_toolset
from agentlab.core.types import GenParams, StepRecord, Trajectory, append_step
from agentlab.errors import MaxStepsExceeded, ToolFailure, UnparseablePlan
from agentlab.memory.summarize import AgentMemory
from agentlab.planner.plan import Plan, format_tools, generate_plan, revise_plan, should_revise
from agentlab.tts.bon import best_of_n_full
from agentlab.tts.mixture import MixtureWeights
from agentlab.tts.prm import CandidateNode, reflect_node, score_node, with_lessons
from agentlab.tts.verdicts import ReflectionNote

FINAL_MARKER = "FINAL ANSWER:"


@dataclass(frozen=True)
class AgentConfig:
    max_steps: int = 20
    final_marker: str = FINAL_MARKER
    tool_output_cap: int = DEFAULT_OUTPUT_CAP
    planning: bool = True
    revision_n: int = 5
    tips: tuple[str, ...] = ()
    facts: str = ""
    constraints: tuple[str, ...] = ()
    temperature: float = 0.0
    max_tokens: int = 2048
    seed: int = 0
    bon_n: int = 1
    reflection: bool = False
    memory_in_planning: bool = True
    raise_on_max_steps: bool = False

    def __post_init__(self) -> None:
        if self.max_steps < 1:
            raise ValueError("max_steps must be >= 1")
        if self.revision_n < 1:
            raise ValueError("revision_n must be >= 1")
        if self.bon_n < 1:
            raise ValueError("bon_n must be >= 1")
        if not self.final_marker.strip():
            raise ValueError("final_marker must be non-empty")


@dataclass
class Scaling:
    """Test-time scaling resources: candidate clients, their mixture, and a judge."""

    judge: ModelClient
    mixture: MixtureWeights | None = None
    clients: Mapping[str, ModelClient] = field(default_factory=dict)


def extract_final(text: str, marker: str = FINAL_MARKER) -> str | None:
    """Everything after the first line that starts with ``marker``."""
    m = re.search(rf"^[ \t]*{re.escape(marker)}", text, re.MULTILINE)
    if not m:
        return None
    return text[m.end():].strip()


class _Run:
    def __init__(
        self,
        task: str,
        tools: dict[str, Tool],
        client: ModelClient,
        config: AgentConfig,
        memory: AgentMemory | None,
        scaling: Scaling | None,
    ) -> None:
        self.task = task
        self.tools = tools
        self.client = client
        self.config = config
        self.memory = memory
        self.scaling = scaling
        self.plan: Plan | None = None
        self.lessons: ReflectionNote | None = None
        self.system = render(
            "react_system",
            final_marker=config.final_marker,
            tools=format_tools([t.spec for t in tools.values()]),
        )

    def params(self, step_number: int) -> GenParams:
        c = self.config
        return GenParams(temperature=c.temperature, max_tokens=c.max_tokens, seed=c.seed + step_number)

    def facts(self) -> str:
        parts = [self.config.facts] if self.config.facts else []
        if self.memory is not None and self.config.memory_in_planning:
            ctx = self.memory.context_for(self.task)
            if ctx:
                parts.append("Relevant memory:\n" + ctx)
        return "\n\n".join(parts)

    def messages(self, traj: Trajectory) -> list[Message]:
        head = f"Task: {self.task}"
        if self.plan is not None:
            head += "\n\nPlan:\n" + self.plan.to_text()
        msgs: list[Message] = [
            {"role": "system", "content": self.system},
            {"role": "user", "content": head},
        ]
        for step in traj.action_steps:
            msgs.append({"role": "assistant", "content": step.model_output})
            if extract_final(step.model_output, self.config.final_marker) is None:
                note = f"Observation: {step.observations}" if step.observations else "Observation: (no tool was called)"
                msgs.append({"role": "user", "content": note})
        last = msgs[-1]
        if last["role"] == "user":
            msgs[-1] = {"role": "user", "content": with_lessons(last["content"], self.lessons)}
        else:
            msgs.append({"role": "user", "content": with_lessons("Continue.", self.lessons)})
        return msgs

    def act(self, traj: Trajectory, client: ModelClient, params: GenParams) -> StepRecord:
        """One reasoning call plus at most one tool call, as an unattached step."""
        number = traj.last_step_number + 1
        reply = client.complete(self.messages(traj), params)
        answer = extract_final(reply, self.config.final_marker)
        if answer is not None:
            return StepRecord(kind="action", step_number=number, model_output=reply, action_output=answer)
        call = parse_action(reply)
        if call is None:
            return StepRecord(kind="action", step_number=number, model_output=reply)
        tool = self.tools.get(call.tool)
        try:
            if tool is None:
                raise ToolFailure(f"unknown tool {call.tool!r}")
            result = invoke(tool, call.arguments, self.config.tool_output_cap)
        except ToolFailure as exc:
            return StepRecord(
                kind="action",
                step_number=number,
                model_output=reply,
                observations=f"Error: {exc}",
                error=str(exc),
            )
        return StepRecord(
            kind="action",
            step_number=number,
            model_output=reply,
            action_output=result.content,
            observations=result.content,
        )

    def next_step(self, traj: Trajectory) -> StepRecord:
        number = traj.last_step_number + 1
        scaling = self.scaling
        if scaling is None:
            return self.act(traj, self.client, self.params(number))
        if self.config.bon_n > 1 and scaling.mixture is not None:
            result = best_of_n_full(
                context=traj,
                n=self.config.bon_n,
                mixture=scaling.mixture,
                clients=scaling.clients,
                scorer=lambda node: score_node(node, scaling.judge),
                expand=self.act,
                seed=self.config.seed + number * 1000,
            )
            node = result.best
        else:
            node = CandidateNode(step=self.act(traj, self.client, self.params(number)), parent_trajectory=traj)
        if self.config.reflection:
            self.lessons = reflect_node(node, scaling.judge)
        return node.step

    def planning_step(self, traj: Trajectory, revise: bool) -> None:
        number = traj.last_step_number + 1
        try:
            if revise and self.plan is not None:
                recent = [s.observations for s in traj.action_steps[-self.config.revision_n:]]
                self.plan = revise_plan(
                    self.plan, recent, self.client, task=self.task, facts=self.facts(),
                    params=self.params(number),
                )
            else:
                self.plan = generate_plan(
                    self.task,
                    self.facts(),
                    self.config.tips,
                    self.client,
                    tools=[t.spec for t in self.tools.values()],
                    constraints=self.config.constraints,
                    params=self.params(number),
                )
        except UnparseablePlan as exc:
            append_step(traj, StepRecord(kind="planning", step_number=number, error=str(exc)))
            return
        append_step(
            traj,
            StepRecord(
                kind="planning",
                step_number=number,
                model_output=self.plan.raw,
                action_output=self.plan.to_json(),
            ),
        )


def run_agent_loop(
    task: str,
    tools: Sequence[Tool],
    client: ModelClient,
    config: AgentConfig = AgentConfig(),
    task_id: str = "task",
    memory: AgentMemory | None = None,
    scaling: Scaling | None = None,
) -> Trajectory:
    """Run one task to a final answer or until ``config.max_steps`` action steps.

    Running out of steps leaves ``final_answer`` unset and ``stop_reason``
    set to "max_steps_exceeded"; with ``raise_on_max_steps`` a
    MaxStepsExceeded carrying the trajectory is raised instead.
    """
    if not tools:
        raise ValueError("run_agent_loop needs at least one tool")
    if (config.bon_n > 1 or config.reflection) and scaling is None:
        raise ValueError("best-of-n and reflection need a Scaling judge")
    run = _Run(task, validate_toolset(tools), client, config, memory, scaling)
    traj = Trajectory(task_id=task_id)
    append_step(traj, StepRecord(kind="task", step_number=0, observations=task))
    if config.planning:
        run.planning_step(traj, revise=False)

    for t in range(1, config.max_steps + 1):
        step = run.next_step(traj)
        append_step(traj, step)
        if memory is not None:
            memory.observe(step)
        answer = extract_final(step.model_output, config.final_marker)
        if answer is not None:
            traj.final_answer = answer
            traj.stop_reason = "final_answer"
            return traj
        if config.planning and t < config.max_steps and should_revise(t, config.revision_n):
            run.planning_step(traj, revise=True)

    traj.stop_reason = "max_steps_exceeded"
    if config.raise_on_max_steps:
        raise MaxStepsExceeded(config.max_steps, traj)
    return traj
