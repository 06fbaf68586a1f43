"""Benchmark question loading (GAIA metadata JSONL, BrowseComp-style JSONL)."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from agentlab.errors import SchemaError


@dataclass(frozen=True)
class Question:
    task_id: str
    question: str
    level: int
    true_answer: str
    file_name: str | None = None

    def __post_init__(self) -> None:
        if self.level not in (1, 2, 3):
            raise ValueError(f"level must be 1, 2 or 3, got {self.level}")
        if not self.true_answer.strip():
            raise ValueError("true_answer must be non-empty")


def _level(value: object) -> int:
    if isinstance(value, bool):
        raise ValueError(f"bad level {value!r}")
    if isinstance(value, int):
        return value
    if isinstance(value, str) and value.strip().isdigit():
        return int(value.strip())
    raise ValueError(f"bad level {value!r}")


def _required_text(row: dict, key: str) -> str:
    if key not in row:
        raise KeyError(key)
    value = row[key]
    if not isinstance(value, str):
        raise ValueError(f"{key} must be a string")
    return value


def parse_record(row: dict, line: int) -> Question:
    try:
        if "Question" in row or "Final answer" in row or "Level" in row:
            file_name = row.get("file_name") or None
            return Question(
                task_id=_required_text(row, "task_id"),
                question=_required_text(row, "Question"),
                level=_level(row["Level"]) if "Level" in row else _level(None),
                true_answer=_required_text(row, "Final answer"),
                file_name=file_name if isinstance(file_name, str) else None,
            )
        if "problem" in row and "answer" in row:
            task_id = row.get("task_id") or row.get("id") or f"bc-{line}"
            return Question(
                task_id=str(task_id),
                question=_required_text(row, "problem"),
                level=1,
                true_answer=_required_text(row, "answer"),
            )
    except KeyError as exc:
        raise SchemaError(line, f"missing field {exc.args[0]!r}") from None
    except ValueError as exc:
        raise SchemaError(line, str(exc)) from None
    raise SchemaError(line, "neither GAIA (Question/Level/Final answer) nor problem/answer fields")


def load_dataset(path: str | Path) -> list[Question]:
    """One Question per non-blank line, in file order."""
    questions = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for line_no, line in enumerate(fh, 1):
            if not line.strip():
                continue
            try:
                row = json.loads(line)
            except json.JSONDecodeError as exc:
                raise SchemaError(line_no, f"invalid JSON: {exc.msg}") from None
            if not isinstance(row, dict):
                raise SchemaError(line_no, "each line must be a JSON object")
            q = parse_record(row, line_no)
            if q.task_id in seen:
                raise SchemaError(line_no, f"duplicate task_id {q.task_id!r}")
            seen.add(q.task_id)
            questions.append(q)
    return questions
