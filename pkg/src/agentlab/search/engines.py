"""Request builders and response parsers for each search source."""

from __future__ import annotations

import os
import re
from collections.abc import Callable
from dataclasses import dataclass
from urllib.parse import parse_qs, quote, urljoin, urlsplit

from bs4 import BeautifulSoup

from agentlab.search.models import SourceKind, is_valid_url
from agentlab.search.transport import Response
from agentlab.search.wayback import ArchiveRequest, build_cdx_url, parse_cdx

RawHit = tuple[str, str, str]  # title, url, snippet

_URL_IN_TEXT = re.compile(r"(?:https?://)?(?:[\w-]+\.)+[a-z]{2,}(?:/[^\s\"'<>]*)?", re.IGNORECASE)
_YEAR = re.compile(r"\b(1[89]\d\d|20\d\d)\b")


@dataclass(frozen=True)
class EngineRequest:
    method: str
    url: str
    params: dict[str, str]
    headers: dict[str, str]


@dataclass(frozen=True)
class Engine:
    kind: SourceKind
    build: Callable[[str, int], EngineRequest | None]
    parse: Callable[[Response], list[RawHit]]


def _text(node) -> str:
    return " ".join(node.get_text(" ").split()) if node is not None else ""


def _build_google(query: str, n: int) -> EngineRequest:
    return EngineRequest(
        "GET",
        "https://www.googleapis.com/customsearch/v1",
        {
            "key": os.environ.get("GOOGLE_API_KEY", ""),
            "cx": os.environ.get("GOOGLE_CSE_ID", ""),
            "q": query,
            "num": str(min(n, 10)),
        },
        {},
    )


def _parse_google(resp: Response) -> list[RawHit]:
    items = resp.json().get("items", [])
    return [(i.get("title", ""), i.get("link", ""), i.get("snippet", "")) for i in items]


def _build_bing(query: str, n: int) -> EngineRequest:
    return EngineRequest(
        "GET",
        "https://api.bing.microsoft.com/v7.0/search",
        {"q": query, "count": str(n)},
        {"Ocp-Apim-Subscription-Key": os.environ.get("BING_API_KEY", "")},
    )


def _parse_bing(resp: Response) -> list[RawHit]:
    values = resp.json().get("webPages", {}).get("value", [])
    return [(v.get("name", ""), v.get("url", ""), v.get("snippet", "")) for v in values]


def _build_duckduckgo(query: str, n: int) -> EngineRequest:
    return EngineRequest("GET", "https://html.duckduckgo.com/html/", {"q": query}, {})


def _unwrap_ddg(href: str) -> str:
    # result links go through a redirect carrying the target in ``uddg``
    parts = urlsplit(urljoin("https://duckduckgo.com", href))
    if parts.path.startswith("/l/"):
        target = parse_qs(parts.query).get("uddg", [""])[0]
        if target:
            return target
    return urljoin("https://duckduckgo.com", href)


def _parse_duckduckgo(resp: Response) -> list[RawHit]:
    soup = BeautifulSoup(resp.text, "html.parser")
    hits = []
    for result in soup.select(".result"):
        link = result.select_one("a.result__a")
        if link is None or not link.get("href"):
            continue
        hits.append((_text(link), _unwrap_ddg(link["href"]), _text(result.select_one(".result__snippet"))))
    return hits


def _build_baidu(query: str, n: int) -> EngineRequest:
    return EngineRequest("GET", "https://www.baidu.com/s", {"wd": query, "rn": str(n)}, {})


def _parse_baidu(resp: Response) -> list[RawHit]:
    soup = BeautifulSoup(resp.text, "html.parser")
    hits = []
    for result in soup.select("div.result, div.c-container"):
        link = result.select_one("h3 a")
        if link is None or not link.get("href"):
            continue
        snippet = result.select_one(".c-abstract, .content-right_8Zs40, span.content-right")
        hits.append((_text(link), urljoin("https://www.baidu.com", link["href"]), _text(snippet)))
    return hits


def _build_wikipedia(query: str, n: int) -> EngineRequest:
    return EngineRequest(
        "GET",
        "https://en.wikipedia.org/w/api.php",
        {
            "action": "query",
            "list": "search",
            "srsearch": query,
            "srlimit": str(n),
            "format": "json",
        },
        {},
    )


def _parse_wikipedia(resp: Response) -> list[RawHit]:
    rows = resp.json().get("query", {}).get("search", [])
    hits = []
    for row in rows:
        title = row.get("title", "")
        url = "https://en.wikipedia.org/wiki/" + quote(title.replace(" ", "_"))
        snippet = _text(BeautifulSoup(row.get("snippet", ""), "html.parser"))
        hits.append((title, url, snippet))
    return hits


def archive_target(query: str) -> ArchiveRequest | None:
    """The (url, year) pair a query asks about, if it names both."""
    url = _URL_IN_TEXT.search(query)
    year = _YEAR.search(query)
    if not url or not year:
        return None
    return ArchiveRequest(url=url.group(0).rstrip(".,;:)"), timestamp=year.group(1))


def _build_wayback(query: str, n: int) -> EngineRequest | None:
    req = archive_target(query)
    if req is None:
        return None
    url = build_cdx_url(req)
    return EngineRequest("GET", url + f"&limit={n}", {}, {})


def _parse_wayback(resp: Response) -> list[RawHit]:
    hits = []
    for rec in parse_cdx(resp.text):
        original = rec.original if is_valid_url(rec.original) else "http://" + rec.original
        hits.append(
            (
                f"{rec.original} archived {rec.timestamp}",
                rec.snapshot_url if is_valid_url(rec.snapshot_url) else original,
                f"status {rec.statuscode}, {rec.mimetype}".strip(", "),
            )
        )
    return hits


ENGINES: dict[SourceKind, Engine] = {
    SourceKind.GOOGLE: Engine(SourceKind.GOOGLE, _build_google, _parse_google),
    SourceKind.BING: Engine(SourceKind.BING, _build_bing, _parse_bing),
    SourceKind.DUCKDUCKGO: Engine(SourceKind.DUCKDUCKGO, _build_duckduckgo, _parse_duckduckgo),
    SourceKind.BAIDU: Engine(SourceKind.BAIDU, _build_baidu, _parse_baidu),
    SourceKind.WIKIPEDIA: Engine(SourceKind.WIKIPEDIA, _build_wikipedia, _parse_wikipedia),
    SourceKind.WAYBACK: Engine(SourceKind.WAYBACK, _build_wayback, _parse_wayback),
}
