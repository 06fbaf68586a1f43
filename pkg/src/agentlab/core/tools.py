"""Executable tools and parsing of the model's action lines."""

from __future__ import annotations

import json
import re
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass
from typing import Any

from agentlab.core.types import ToolSpec
from agentlab.errors import ToolFailure

DEFAULT_OUTPUT_CAP = 16 * 1024
TRUNCATION_SUFFIX = "[truncated]"

_ACTION = re.compile(r"^\s*Action\s*:\s*(.+?)\s*$", re.MULTILINE)
_ACTION_INPUT = re.compile(r"^\s*Action Input\s*:\s*", re.MULTILINE)


@dataclass(frozen=True)
class Tool:
    spec: ToolSpec
    fn: Callable[..., Any]

    @property
    def name(self) -> str:
        return self.spec.name


@dataclass(frozen=True)
class ToolResult:
    tool_name: str
    content: str
    truncated: bool = False


@dataclass(frozen=True)
class ActionCall:
    tool: str
    arguments: dict[str, Any]


def truncate(text: str, cap: int = DEFAULT_OUTPUT_CAP) -> tuple[str, bool]:
    """Cut ``text`` to ``cap`` UTF-8 bytes, marking the cut with a suffix."""
    data = text.encode("utf-8")
    if len(data) <= cap:
        return text, False
    return data[:cap].decode("utf-8", errors="ignore") + TRUNCATION_SUFFIX, True


def parse_action(text: str) -> ActionCall | None:
    """Read ``Action:`` / ``Action Input:`` lines; None for a reasoning-only reply.

    The input should be a JSON object. Anything else is passed through as a
    single positional string under the key ``""``.
    """
    m = _ACTION.search(text)
    if not m:
        return None
    name = m.group(1).strip().strip("`")
    rest = text[m.end():]
    im = _ACTION_INPUT.search(rest)
    if not im:
        return ActionCall(tool=name, arguments={})
    payload = rest[im.end():].strip()
    if payload.startswith("```"):
        payload = payload.strip("`").removeprefix("json").strip()
    try:
        value, _ = json.JSONDecoder().raw_decode(payload)
    except json.JSONDecodeError:
        first_line = payload.splitlines()[0] if payload else ""
        return ActionCall(tool=name, arguments={"": first_line.strip()})
    if isinstance(value, dict):
        return ActionCall(tool=name, arguments=value)
    return ActionCall(tool=name, arguments={"": value})


def validate_toolset(tools: Sequence[Tool]) -> dict[str, Tool]:
    by_name: dict[str, Tool] = {}
    for tool in tools:
        if tool.name in by_name:
            raise ValueError(f"duplicate tool name {tool.name!r}")
        by_name[tool.name] = tool
    return by_name


def invoke(tool: Tool, arguments: Mapping[str, Any], cap: int = DEFAULT_OUTPUT_CAP) -> ToolResult:
    """Call ``tool``; any exception it raises becomes a ToolFailure."""
    params = [p for p, _ in tool.spec.input_schema]
    args = dict(arguments)
    if "" in args:
        if len(params) < 1:
            raise ToolFailure(f"{tool.name} takes no inputs")
        args[params[0]] = args.pop("")
    unknown = set(args) - set(params)
    if unknown:
        raise ToolFailure(f"{tool.name} got unexpected inputs {sorted(unknown)}")
    try:
        raw = tool.fn(**args)
    except ToolFailure:
        raise
    except Exception as exc:
        raise ToolFailure(f"{tool.name} failed: {type(exc).__name__}: {exc}") from exc
    content, cut = truncate("" if raw is None else str(raw), cap)
    return ToolResult(tool_name=tool.name, content=content, truncated=cut)
