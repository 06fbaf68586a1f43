"""Source presets and temporal routing to the web archive."""

from __future__ import annotations

import datetime as dt
import re
from typing import Literal

from agentlab.search.models import SourceKind
from agentlab.search.query import QuerySpec

Preset = Literal["single", "k3", "k5"]

PRESETS: dict[str, tuple[SourceKind, ...]] = {
    "single": (SourceKind.GOOGLE,),
    "k3": (SourceKind.GOOGLE, SourceKind.WIKIPEDIA, SourceKind.DUCKDUCKGO),
    "k5": (
        SourceKind.GOOGLE,
        SourceKind.WIKIPEDIA,
        SourceKind.DUCKDUCKGO,
        SourceKind.BING,
        SourceKind.BAIDU,
    ),
}

_MONTHS = (
    "january february march april may june july august september october november december "
    "jan feb mar apr jun jul aug sep sept oct nov dec"
).split()
# words that, right before or after a year, make it a point in time
_BEFORE = frozenset(
    "as of in before after during since until till by from circa around early late mid "
    "year back on at".split()
) | frozenset(_MONTHS)
_AFTER = frozenset("version edition snapshot archive archived homepage website site page".split())
_ARCHIVE_CUE = re.compile(
    r"\b(wayback|archived|archive\.org|internet archive|archived (?:page|version|copy)|"
    r"historical (?:version|snapshot|page)|old version of (?:the )?(?:page|site|website))\b",
    re.IGNORECASE,
)
_WORD = re.compile(r"[A-Za-z]+|\d{4}")


def has_temporal_cue(text: str, current_year: int | None = None) -> bool:
    """True for an archived-page request or a past year next to a temporal word."""
    if _ARCHIVE_CUE.search(text):
        return True
    year_now = current_year if current_year is not None else dt.date.today().year
    tokens = [t.lower() for t in _WORD.findall(text)]
    for i, tok in enumerate(tokens):
        if not (tok.isdigit() and len(tok) == 4):
            continue
        year = int(tok)
        if not 1900 <= year <= year_now - 1:
            continue
        before = tokens[max(0, i - 2):i]
        after = tokens[i + 1:i + 2]
        if any(t in _BEFORE for t in before) or any(t in _AFTER for t in after):
            return True
    return False


def route_sources(spec: QuerySpec, preset: Preset = "single", current_year: int | None = None) -> list[SourceKind]:
    if preset not in PRESETS:
        raise ValueError(f"unknown preset {preset!r}; expected one of {sorted(PRESETS)}")
    sources = list(PRESETS[preset])
    texts = [spec.initial, spec.task_context, spec.optimized or ""]
    if any(has_temporal_cue(t, current_year) for t in texts if t):
        sources.append(SourceKind.WAYBACK)
    return sources
