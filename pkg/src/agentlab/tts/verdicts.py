"""Strict parsers for judge outputs.

Every parser either returns a complete value or raises; nothing is
partially applied.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass
from typing import Any

from agentlab.errors import IndexOutOfRange, MalformedVerdict, OutOfRangeScore

CONFIDENCE_LEVELS = ("High", "Medium", "Low")

_REFLECTION_FIELDS = ("experience_summary", "confidence_assessment", "lessons_learned", "comments")
_HEADING = re.compile(
    r"^\s*(?:[-*]\s*)?\**(experience_summary|confidence_assessment|confidence|lessons_learned|comments)\**\s*:\s*",
    re.IGNORECASE | re.MULTILINE,
)
_CONFIDENCE = re.compile(r"^\W*(high|medium|low)\b\W*(.*)$", re.IGNORECASE | re.DOTALL)


@dataclass(frozen=True)
class PRMVerdict:
    analysis: str
    score: int

    def __post_init__(self) -> None:
        if not 0 <= self.score <= 10:
            raise OutOfRangeScore(f"score {self.score} outside 0..10")


@dataclass(frozen=True)
class ListVerdict:
    index: int
    analysis: str


@dataclass(frozen=True)
class ReflectionNote:
    experience_summary: str
    confidence: str
    lessons_learned: str
    comments: str | None = None
    recommendation: str = ""

    def __post_init__(self) -> None:
        if self.confidence not in CONFIDENCE_LEVELS:
            raise MalformedVerdict(f"confidence must be High, Medium or Low, got {self.confidence!r}")

    def to_text(self) -> str:
        lines = [
            f"experience_summary: {self.experience_summary}",
            f"confidence_assessment: {self.confidence}"
            + (f" - {self.recommendation}" if self.recommendation else ""),
            f"lessons_learned: {self.lessons_learned}",
        ]
        if self.comments:
            lines.append(f"comments: {self.comments}")
        return "\n".join(lines)


def extract_json_object(text: str) -> dict[str, Any]:
    """First JSON object embedded anywhere in ``text`` (prose and code fences allowed)."""
    decoder = json.JSONDecoder()
    for m in re.finditer(r"\{", text):
        try:
            value, _ = decoder.raw_decode(text, m.start())
        except json.JSONDecodeError:
            continue
        if isinstance(value, dict):
            return value
    raise MalformedVerdict("no JSON object found in judge output")


def _strict_int(value: Any, name: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise MalformedVerdict(f"{name} must be an integer, got {value!r}")
    return value


def _text(value: Any, name: str) -> str:
    if not isinstance(value, str):
        raise MalformedVerdict(f"{name} must be a string, got {value!r}")
    return value


def parse_prm_score(text: str) -> PRMVerdict:
    obj = extract_json_object(text)
    if "analysis" not in obj or "score" not in obj:
        raise MalformedVerdict("expected keys 'analysis' and 'score'")
    analysis = _text(obj["analysis"], "analysis")
    score = _strict_int(obj["score"], "score")
    if not 0 <= score <= 10:
        raise OutOfRangeScore(f"score {score} outside 0..10")
    return PRMVerdict(analysis=analysis, score=score)


def parse_prm_list(text: str, n_candidates: int) -> ListVerdict:
    obj = extract_json_object(text)
    if "index" not in obj or "analysis" not in obj:
        raise MalformedVerdict("expected keys 'index' and 'analysis'")
    index = _strict_int(obj["index"], "index")
    analysis = _text(obj["analysis"], "analysis")
    if not 0 <= index < n_candidates:
        raise IndexOutOfRange(f"index {index} not in 0..{n_candidates - 1}")
    return ListVerdict(index=index, analysis=analysis)


def _reflection_fields(text: str) -> dict[str, str]:
    try:
        obj = extract_json_object(text)
    except MalformedVerdict:
        obj = None
    if obj is not None:
        return {k.lower(): v for k, v in obj.items() if isinstance(k, str)}
    fields: dict[str, str] = {}
    matches = list(_HEADING.finditer(text))
    for i, m in enumerate(matches):
        end = matches[i + 1].start() if i + 1 < len(matches) else len(text)
        fields.setdefault(m.group(1).lower(), text[m.end():end].strip())
    return fields


def parse_reflection(text: str) -> ReflectionNote:
    fields = _reflection_fields(text)
    if "confidence_assessment" not in fields and "confidence" in fields:
        fields["confidence_assessment"] = fields["confidence"]
    for name in _REFLECTION_FIELDS[:3]:
        if name not in fields:
            raise MalformedVerdict(f"reflection is missing {name}")
    summary = _text(fields["experience_summary"], "experience_summary").strip()
    lessons = _text(fields["lessons_learned"], "lessons_learned").strip()
    assessment = _text(fields["confidence_assessment"], "confidence_assessment")
    m = _CONFIDENCE.match(assessment)
    if not m:
        raise MalformedVerdict(f"unrecognised confidence {assessment!r}")
    comments = fields.get("comments")
    if comments is not None:
        comments = _text(comments, "comments").strip() or None
    return ReflectionNote(
        experience_summary=summary,
        confidence=m.group(1).capitalize(),
        lessons_learned=lessons,
        comments=comments,
        recommendation=m.group(2).strip(),
    )
