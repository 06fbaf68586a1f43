"""Multi-source web search, browsing, query optimization and archive lookup."""

from agentlab.search.browse import read, visit
from agentlab.search.models import PageContent, SearchHit, SearchResults, SourceKind
from agentlab.search.query import QuerySpec, expand_query, reflect_query
from agentlab.search.routing import PRESETS, route_sources
from agentlab.search.search import merge_hits, normalize_url, search
from agentlab.search.tools import SearchAgent
from agentlab.search.transport import CassetteTransport, HttpxTransport, Response, Transport
from agentlab.search.wayback import ArchiveRequest, build_cdx_url, cdx_lookup, fetch_snapshot

__all__ = [
    "PRESETS",
    "ArchiveRequest",
    "CassetteTransport",
    "HttpxTransport",
    "PageContent",
    "QuerySpec",
    "Response",
    "SearchAgent",
    "SearchHit",
    "SearchResults",
    "SourceKind",
    "Transport",
    "build_cdx_url",
    "cdx_lookup",
    "expand_query",
    "fetch_snapshot",
    "merge_hits",
    "normalize_url",
    "read",
    "reflect_query",
    "route_sources",
    "search",
    "visit",
]
