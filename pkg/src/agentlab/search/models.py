"""Value types shared by the search tools."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Literal
from urllib.parse import urlsplit


class SourceKind(str, Enum):
    GOOGLE = "google"
    BING = "bing"
    DUCKDUCKGO = "duckduckgo"
    BAIDU = "baidu"
    WIKIPEDIA = "wikipedia"
    WAYBACK = "wayback"

    def __str__(self) -> str:
        return self.value


ReadMode = Literal["text", "markdown", "links"]
Extractor = Literal["raw", "jina_style_reader", "crawler"]
READ_MODES: tuple[str, ...] = ("text", "markdown", "links")
EXTRACTORS: tuple[str, ...] = ("raw", "jina_style_reader", "crawler")


def is_valid_url(url: str) -> bool:
    try:
        parts = urlsplit(url)
    except ValueError:
        return False
    return parts.scheme in ("http", "https") and bool(parts.netloc) and not any(c.isspace() for c in url)


@dataclass(frozen=True)
class SearchHit:
    title: str
    url: str
    snippet: str
    source: SourceKind
    rank: int

    def __post_init__(self) -> None:
        if not is_valid_url(self.url):
            raise ValueError(f"not a valid http(s) URL: {self.url!r}")
        if self.rank < 1:
            raise ValueError("rank must be >= 1")
        object.__setattr__(self, "source", SourceKind(self.source))

    def to_dict(self) -> dict:
        return {
            "title": self.title,
            "url": self.url,
            "snippet": self.snippet,
            "source": self.source.value,
            "rank": self.rank,
        }


class SearchResults(list):
    """A list of SearchHit that also carries per-source warnings."""

    def __init__(self, hits=(), warnings=()) -> None:
        super().__init__(hits)
        self.warnings: list[str] = list(warnings)


@dataclass(frozen=True)
class PageContent:
    url: str
    mode: ReadMode
    body: str
    fetched_via: Extractor
