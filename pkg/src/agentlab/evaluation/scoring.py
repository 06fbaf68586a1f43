"""Answer normalization, exact match and the retry rule."""

from __future__ import annotations

import math
import re

_NUMBER = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_LIST_SEP = re.compile(r"[,;]")
RETRY_PHRASE = "unable to determine"


def normalize_text(text: str) -> str:
    """Trim, case-fold and collapse internal whitespace."""
    return " ".join(text.casefold().split())


def parse_number(text: str) -> float | None:
    """The value of ``text`` read as a number after removing commas, ``$`` and ``%``."""
    cleaned = re.sub(r"[,$%\s]", "", text)
    if not _NUMBER.fullmatch(cleaned):
        return None
    value = float(cleaned)
    return value if math.isfinite(value) else None


def _element_match(a: str, b: str) -> bool:
    x, y = parse_number(a), parse_number(b)
    if x is not None and y is not None:
        return x == y
    return normalize_text(a) == normalize_text(b)


def exact_match(answer: str, truth: str) -> bool:
    """Compare an answer with the ground truth.

    Rules, in order:
      1. both sides numeric (commas, $ and % ignored): numeric equality
      2. either side holds a comma or semicolon: element lists, order-sensitive
      3. otherwise: trimmed, case-folded, whitespace-collapsed equality
    Rule 2 looks at both sides so the relation stays symmetric.
    """
    x, y = parse_number(answer), parse_number(truth)
    if x is not None and y is not None:
        return x == y
    if _LIST_SEP.search(answer) or _LIST_SEP.search(truth):
        left = _LIST_SEP.split(answer)
        right = _LIST_SEP.split(truth)
        return len(left) == len(right) and all(_element_match(a, b) for a, b in zip(left, right))
    return normalize_text(answer) == normalize_text(truth)


def is_retryable(answer: str | None) -> bool:
    """Empty answers and explicit give-ups may be re-asked; wrong answers may not."""
    if answer is None or not answer.strip():
        return True
    return RETRY_PHRASE in answer.casefold()
