"""Model-backed step summaries, long-term memory fusion, and the per-run store."""

from __future__ import annotations

import re
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Literal

from agentlab.core.clients import ModelClient
from agentlab.core.prompts import render
from agentlab.core.types import GenParams, StepRecord, describe_steps
from agentlab.errors import EmptyModelOutput
from agentlab.memory.buffer import CurrentMemory, append_current
from agentlab.memory.index import Embedder, HashingEmbedder, MemoryIndex, MemorySummary, retrieve

SummaryMode = Literal["with_suggestions", "retrieval_only"]

_SUGGESTIONS = re.compile(r"^\s*(?:[-*#]+\s*)?\**suggestions\**\s*:\s*", re.IGNORECASE | re.MULTILINE)


def split_suggestions(text: str) -> tuple[str, str | None]:
    """Split model output at the first ``Suggestions:`` heading."""
    m = _SUGGESTIONS.search(text)
    if not m:
        return text.strip(), None
    summary = text[: m.start()].strip()
    suggestions = text[m.end():].strip()
    return summary or text.strip(), suggestions or None


def summarize_segment(
    steps: Sequence[StepRecord],
    client: ModelClient,
    mode: SummaryMode = "with_suggestions",
    params: GenParams = GenParams(),
) -> MemorySummary:
    if not steps:
        raise ValueError("summarize_segment needs at least one step")
    if mode not in ("with_suggestions", "retrieval_only"):
        raise ValueError(f"unknown summary mode {mode!r}")
    template = "memory_summarization" if mode == "with_suggestions" else "memory_retrieval"
    prompt = render(template, current_step_memory=describe_steps(list(steps)))
    raw = client.complete([{"role": "user", "content": prompt}], params)
    if not raw.strip():
        raise EmptyModelOutput(f"{template} returned no text")
    step_range = (steps[0].step_number, steps[-1].step_number)
    if mode == "retrieval_only":
        return MemorySummary(step_range=step_range, text=raw.strip())
    text, suggestions = split_suggestions(raw)
    # the model was asked for both; without a heading the whole reply carries them
    return MemorySummary(step_range=step_range, text=text, suggestions=suggestions or text)


@dataclass(frozen=True)
class LongTermMemory:
    text: str = ""
    updates: int = 0


def update_long_term(
    ltm: LongTermMemory,
    previous_step_summary: str,
    client: ModelClient,
    params: GenParams = GenParams(),
) -> LongTermMemory:
    prompt = render(
        "long_term_memory",
        previous_step_memory=previous_step_summary,
        long_term_memory=ltm.text or "(empty)",
    )
    raw = client.complete([{"role": "user", "content": prompt}], params)
    if not raw.strip():
        raise EmptyModelOutput("long-term memory update returned no text")
    return LongTermMemory(text=raw.strip(), updates=ltm.updates + 1)


@dataclass
class AgentMemory:
    """Per-run memory: buffer, per-step summaries, index and long-term document."""

    client: ModelClient
    embedder: Embedder = field(default_factory=HashingEmbedder)
    mode: SummaryMode = "with_suggestions"
    tau: int = 10
    k: int = 3
    long_term: bool = True
    current: CurrentMemory = field(init=False)
    index: MemoryIndex = field(default_factory=MemoryIndex)
    ltm: LongTermMemory = field(default_factory=LongTermMemory)

    def __post_init__(self) -> None:
        self.current = CurrentMemory(capacity_tau=self.tau)

    def observe(self, step: StepRecord) -> MemorySummary:
        """Record one finished action step and return its summary."""
        append_current(self.current, step.observations, step.model_output)
        summary = summarize_segment([step], self.client, self.mode)
        self.index.add_summary(summary, self.embedder)
        if self.long_term:
            self.ltm = update_long_term(self.ltm, summary.text, self.client)
        return summary

    def context_for(self, query: str) -> str:
        """Text block of retrieved summaries and long-term memory for a prompt."""
        parts = []
        if len(self.index):
            try:
                hits = retrieve(self.index, query, self.embedder, self.k)
            except ValueError:
                hits = []
            for hit in hits:
                start, end = hit.step_range
                parts.append(f"- [steps {start}-{end}] {hit.text}")
                if hit.suggestions and hit.suggestions != hit.text:
                    parts.append(f"  suggestions: {hit.suggestions}")
        if self.ltm.text:
            parts.append(f"Long-term memory: {self.ltm.text}")
        return "\n".join(parts)
