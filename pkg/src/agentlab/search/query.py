"""Query optimization: reflect on a query, then expand it into variants."""

from __future__ import annotations

import ast
import json
import re
from collections.abc import Sequence
from dataclasses import dataclass, replace

from agentlab.core.clients import ModelClient, ask_with_reask
from agentlab.core.prompts import render
from agentlab.core.types import GenParams
from agentlab.errors import MalformedList, MalformedVerdict, WrongArity
from agentlab.tts.verdicts import extract_json_object

DEFAULT_ROLL_OUT = 3


@dataclass(frozen=True)
class QuerySpec:
    initial: str
    task_context: str = ""
    optimized: str | None = None
    lexicon: tuple[tuple[str, tuple[str, ...]], ...] = ()
    problems: str = ""
    suggestions: str = ""

    def __post_init__(self) -> None:
        if not self.initial.strip():
            raise ValueError("initial query must be non-empty")

    @property
    def best(self) -> str:
        return self.optimized or self.initial


@dataclass(frozen=True)
class Reflection:
    problems: str
    suggestions: str
    augmented_query: str


def parse_query_reflection(text: str) -> Reflection:
    obj = extract_json_object(text)
    for key in ("Problems", "Suggestions", "Augmented Query"):
        if key not in obj:
            raise MalformedVerdict(f"query reflection is missing {key!r}")
    query = obj["Augmented Query"]
    if not isinstance(query, str) or not query.strip():
        raise MalformedVerdict("Augmented Query must be a non-empty string")
    return Reflection(str(obj["Problems"]), str(obj["Suggestions"]), query.strip())


def reflect_query(spec: QuerySpec, client: ModelClient, params: GenParams = GenParams()) -> QuerySpec:
    prompt = render(
        "query_reflection",
        task_context=spec.task_context or "(none)",
        query=spec.initial,
    )
    verdict = ask_with_reask(client, prompt, parse_query_reflection, params)
    return replace(
        spec,
        optimized=verdict.augmented_query,
        problems=verdict.problems,
        suggestions=verdict.suggestions,
    )


def parse_query_list(text: str) -> list[str]:
    """The first bracketed list in ``text`` as a list of strings."""
    start = text.find("[")
    end = text.rfind("]")
    if start < 0 or end <= start:
        raise MalformedList("no bracketed list in model output")
    chunk = text[start:end + 1]
    items = None
    for loader in (json.loads, ast.literal_eval):
        try:
            value = loader(chunk)
        except (ValueError, SyntaxError, TypeError, MemoryError, RecursionError):
            continue
        if isinstance(value, (list, tuple)):
            items = list(value)
            break
    if items is None:
        inner = chunk[1:-1]
        items = [p.strip().strip("'\"").strip() for p in inner.split(",")] if inner.strip() else []
    out = []
    for item in items:
        if not isinstance(item, str) or not item.strip():
            raise MalformedList(f"list items must be non-empty strings, got {item!r}")
        out.append(item.strip())
    return out


def lexicon_variants(query: str, lexicon: Sequence[tuple[str, Sequence[str]]]) -> list[str]:
    """Queries with one known term swapped for each of its variants."""
    variants = []
    for term, alternatives in lexicon:
        pattern = re.compile(re.escape(term), re.IGNORECASE)
        if not pattern.search(query):
            continue
        for alt in alternatives:
            candidate = pattern.sub(lambda _m, a=alt: a, query)
            if candidate != query and candidate not in variants:
                variants.append(candidate)
    return variants


def expand_query(
    optimized: str,
    roll_out: int,
    client: ModelClient,
    lexicon: Sequence[tuple[str, Sequence[str]]] = (),
    params: GenParams = GenParams(),
) -> list[str]:
    if roll_out < 1:
        raise ValueError("roll_out must be >= 1")
    prompt = render("query_rollout", roll_out=str(roll_out), query=optimized)
    hints = lexicon_variants(optimized, lexicon)
    if hints:
        prompt += "\n\nKnown term variants worth covering:\n" + "\n".join(f"- {h}" for h in hints)
    queries = parse_query_list(client.complete([{"role": "user", "content": prompt}], params))
    if len(queries) != roll_out:
        raise WrongArity(f"expected {roll_out} queries, got {len(queries)}")
    folded = [" ".join(q.casefold().split()) for q in queries]
    if len(set(folded)) != len(folded):
        raise MalformedList("expanded queries must be distinct")
    return queries
