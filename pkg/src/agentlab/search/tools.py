"""The search agent's tools packaged for the run loop."""

from __future__ import annotations

from dataclasses import dataclass

from agentlab.core.clients import ModelClient
from agentlab.core.tools import Tool
from agentlab.core.types import ToolSpec
from agentlab.search.browse import DEFAULT_EXTRACTOR, page_from_response, read, visit
from agentlab.search.models import Extractor
from agentlab.search.query import DEFAULT_ROLL_OUT, QuerySpec, expand_query, reflect_query
from agentlab.search.routing import Preset, route_sources
from agentlab.search.search import format_hits, merge_hits, search
from agentlab.search.transport import DEFAULT_TIMEOUT, Transport
from agentlab.search.wayback import ArchiveRequest, cdx_lookup, fetch_snapshot


@dataclass
class SearchAgent:
    """Search, visit, read and archive lookup bound to one transport."""

    transport: Transport
    preset: Preset = "single"
    extractor: Extractor = DEFAULT_EXTRACTOR
    client: ModelClient | None = None
    optimize: bool = False
    roll_out: int = DEFAULT_ROLL_OUT
    limit: int = 10
    timeout: float = DEFAULT_TIMEOUT
    retries: int = 1
    task_context: str = ""

    def queries_for(self, query: str) -> tuple[QuerySpec, list[str]]:
        spec = QuerySpec(initial=query, task_context=self.task_context)
        queries = [query]
        if self.optimize and self.client is not None:
            spec = reflect_query(spec, self.client)
            queries = [spec.best]
            if self.roll_out > 1:
                for q in expand_query(spec.best, self.roll_out, self.client):
                    if q not in queries:
                        queries.append(q)
        return spec, queries

    def web_search(self, query: str) -> str:
        spec, queries = self.queries_for(query)
        sources = route_sources(spec, self.preset)
        hits, warnings = [], []
        for q in queries:
            results = search(q, sources, self.transport, timeout=self.timeout, retries=self.retries)
            hits.extend(results)
            warnings.extend(results.warnings)
        text = format_hits(merge_hits(hits, self.limit))
        if warnings:
            text += "\n\nWarnings:\n" + "\n".join(f"- {w}" for w in warnings)
        return text

    def visit_page(self, url: str) -> str:
        return visit(url, self.transport, self.extractor, self.timeout).body

    def read_page(self, url: str, mode: str = "text") -> str:
        return read(url, mode, self.transport, self.extractor, self.timeout).body  # type: ignore[arg-type]

    def archived_page(self, url: str, date: str) -> str:
        """Earliest archived copy of ``url`` at or after ``date`` (YYYY[MMDD[hhmmss]])."""
        req = ArchiveRequest(url=url, timestamp="".join(c for c in date if c.isdigit()))
        records = cdx_lookup(req, self.transport, self.timeout)
        if not records:
            return f"No archived copy of {url} from {req.timestamp} onwards."
        record = records[0]
        resp = fetch_snapshot(record, self.transport, self.timeout)
        page = page_from_response(resp, record.snapshot_url, "text", self.extractor)
        return f"Archived {record.original} at {record.timestamp}:\n{page.body}"

    def tools(self) -> list[Tool]:
        return [
            Tool(
                ToolSpec("web_search", "Find relevant web pages for a query.", (("query", "string"),)),
                self.web_search,
            ),
            Tool(
                ToolSpec("visit_page", "Open a web page and return its main text.", (("url", "string"),)),
                self.visit_page,
            ),
            Tool(
                ToolSpec(
                    "read_page",
                    "Extract a page as text, markdown, or a list of links.",
                    (("url", "string"), ("mode", "string")),
                ),
                self.read_page,
            ),
            Tool(
                ToolSpec(
                    "archived_page",
                    "Fetch a historical copy of a page from the web archive.",
                    (("url", "string"), ("date", "string")),
                ),
                self.archived_page,
            ),
        ]
