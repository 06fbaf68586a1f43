"""Concurrent multi-source search and result merging."""

from __future__ import annotations

from collections.abc import Sequence
from concurrent.futures import ThreadPoolExecutor
from urllib.parse import urlsplit, urlunsplit

from agentlab.errors import AllSourcesFailed, FetchFailed, TransportError
from agentlab.search.engines import ENGINES
from agentlab.search.models import SearchHit, SearchResults, SourceKind, is_valid_url
from agentlab.search.transport import DEFAULT_TIMEOUT, Transport

DEFAULT_PER_SOURCE = 10
DEFAULT_WORKERS = 5
DEFAULT_RETRIES = 1


def search_source(
    query: str,
    source: SourceKind,
    transport: Transport,
    per_source: int = DEFAULT_PER_SOURCE,
    timeout: float = DEFAULT_TIMEOUT,
) -> list[SearchHit]:
    engine = ENGINES[SourceKind(source)]
    req = engine.build(query, per_source)
    if req is None:
        return []
    resp = transport.request(req.method, req.url, params=req.params, headers=req.headers, timeout=timeout)
    if resp.status != 200:
        raise FetchFailed(resp.status, req.url)
    hits = []
    for title, url, snippet in engine.parse(resp):
        if not is_valid_url(url):
            continue
        hits.append(SearchHit(title=title, url=url, snippet=snippet, source=engine.kind, rank=len(hits) + 1))
        if len(hits) >= per_source:
            break
    return hits


def search(
    query: str,
    sources: Sequence[SourceKind],
    transport: Transport,
    per_source: int = DEFAULT_PER_SOURCE,
    timeout: float = DEFAULT_TIMEOUT,
    retries: int = DEFAULT_RETRIES,
    max_workers: int = DEFAULT_WORKERS,
) -> SearchResults:
    """Query every source concurrently; results come back in source order.

    A failing source is retried ``retries`` times and then skipped with a
    warning. AllSourcesFailed is raised only when no source succeeded.
    """
    if not query.strip():
        raise ValueError("query must be non-empty")
    sources = list(dict.fromkeys(SourceKind(s) for s in sources))
    if not sources:
        raise ValueError("at least one source is required")

    def attempt(source: SourceKind) -> list[SearchHit] | str:
        error = ""
        for _ in range(retries + 1):
            try:
                return search_source(query, source, transport, per_source, timeout)
            except (TransportError, FetchFailed, ValueError, KeyError) as exc:
                error = f"{source.value}: {type(exc).__name__}: {exc}"
        return error

    with ThreadPoolExecutor(max_workers=max(1, min(max_workers, len(sources)))) as pool:
        outcomes = list(pool.map(attempt, sources))

    results = SearchResults()
    for outcome in outcomes:
        if isinstance(outcome, str):
            results.warnings.append(outcome)
        else:
            results.extend(outcome)
    if len(results.warnings) == len(sources):
        raise AllSourcesFailed(results.warnings)
    return results


def normalize_url(url: str) -> str:
    """Lowercase scheme and host, drop the fragment and any trailing slash."""
    parts = urlsplit(url.strip())
    path = parts.path.rstrip("/")
    return urlunsplit((parts.scheme.lower(), parts.netloc.lower(), path, parts.query, ""))


def merge_hits(hits: Sequence[SearchHit], limit: int) -> list[SearchHit]:
    """Deduplicate by normalized URL, then interleave sources round-robin by rank.

    The first occurrence of a URL in ``hits`` wins. Sources take turns in
    the order they first appear.
    """
    if limit < 1:
        raise ValueError("limit must be >= 1")
    seen: set[str] = set()
    per_source: dict[SourceKind, list[SearchHit]] = {}
    for hit in hits:
        key = normalize_url(hit.url)
        if key in seen:
            continue
        seen.add(key)
        per_source.setdefault(hit.source, []).append(hit)
    queues = [sorted(group, key=lambda h: h.rank) for group in per_source.values()]
    merged: list[SearchHit] = []
    depth = 0
    while len(merged) < limit and any(depth < len(q) for q in queues):
        for queue in queues:
            if depth < len(queue) and len(merged) < limit:
                merged.append(queue[depth])
        depth += 1
    return merged


def format_hits(hits: Sequence[SearchHit]) -> str:
    if not hits:
        return "No results."
    blocks = []
    for i, hit in enumerate(hits, 1):
        blocks.append(f"{i}. [{hit.title}]({hit.url}) ({hit.source.value} #{hit.rank})\n{hit.snippet}".rstrip())
    return "\n\n".join(blocks)
