"""Build a question solver (run loop plus tools) from a harness config."""

from __future__ import annotations

from dataclasses import replace
from pathlib import Path

from agentlab.core.loop import Scaling, run_agent_loop
from agentlab.core.tools import Tool
from agentlab.core.types import Trajectory
from agentlab.errors import ConfigError
from agentlab.evaluation.config import HarnessConfig, client_factory
from agentlab.evaluation.dataset import Question
from agentlab.memory.index import HashingEmbedder
from agentlab.memory.summarize import AgentMemory
from agentlab.toolkit.documents import document_tool
from agentlab.tts.mixture import MixtureWeights


def build_tools(config: HarnessConfig, files_dir: Path | None, preset: str | None = None, client=None) -> list[Tool]:
    tools = [document_tool(files_dir)]
    s = config["search"]
    if not s["enabled"]:
        return tools
    from agentlab.search.tools import SearchAgent
    from agentlab.search.transport import CassetteTransport, HttpxTransport

    cassettes = config.path("search", "cassettes")
    if cassettes is not None:
        transport = CassetteTransport(cassettes, mode="record" if s["live"] else "replay",
                                      inner=HttpxTransport() if s["live"] else None)
    elif s["live"]:
        transport = HttpxTransport()
    else:
        raise ConfigError("[search] needs cassettes = <dir> or live = true")
    agent = SearchAgent(
        transport=transport,
        preset=preset or s["preset"],
        extractor=s["extractor"],
        client=client,
        optimize=s["optimize"],
        roll_out=s["roll_out"],
        timeout=s["timeout"],
        retries=s["retries"],
    )
    return tools + agent.tools()


def task_text(question: Question) -> str:
    if not question.file_name:
        return question.question
    return f"{question.question}\n\nAttached file: {question.file_name}"


class AgentSolver:
    """Callable ``(question, run_index, attempt) -> Trajectory`` for the runner.

    Each call gets its own client, memory and tool set, so concurrent
    questions share nothing mutable. The seed varies with run and attempt.
    """

    def __init__(self, config: HarnessConfig, files_dir: str | Path | None = None, preset: str | None = None) -> None:
        self.config = config
        self.files_dir = Path(files_dir) if files_dir is not None else None
        self.preset = preset
        self.agent_config = config.agent_config()
        self.make_client = client_factory(config)

    def __call__(self, question: Question, run_index: int, attempt: int) -> Trajectory:
        client = self.make_client(question.task_id, run_index, attempt)
        cfg = replace(self.agent_config, seed=self.agent_config.seed + 1000 * run_index + attempt)
        mem = self.config["memory"]
        memory = None
        if mem["enabled"]:
            memory = AgentMemory(
                client=client, embedder=HashingEmbedder(), mode=mem["mode"],
                tau=mem["tau"], k=mem["k"], long_term=mem["long_term"],
            )
        scaling = None
        if cfg.bon_n > 1 or cfg.reflection:
            # one policy sampled n times; a multi-model mixture needs code, not config
            scaling = Scaling(judge=client, mixture=MixtureWeights.uniform("main"), clients={"main": client})
        tools = build_tools(self.config, self.files_dir, self.preset, client)
        return run_agent_loop(
            task_text(question), tools, client, cfg,
            task_id=question.task_id, memory=memory, scaling=scaling,
        )
