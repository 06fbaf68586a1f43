"""Internet Archive CDX index queries and snapshot retrieval."""

from __future__ import annotations

import json
from dataclasses import dataclass
from urllib.parse import quote

from agentlab.errors import BadTimestamp, FetchFailed
from agentlab.search.transport import Response, Transport

CDX_ENDPOINT = "http://web.archive.org/cdx/search/cdx"
SNAPSHOT_PREFIX = "http://web.archive.org/web/"
TIMESTAMP_LENGTHS = (4, 6, 8, 14)

# left unescaped in the url field; everything else is percent-encoded
_URL_SAFE = ":/.-_~@!$'()*,;"


@dataclass(frozen=True)
class ArchiveRequest:
    url: str
    timestamp: str

    def __post_init__(self) -> None:
        if not self.url or any(c.isspace() for c in self.url):
            raise ValueError(f"bad archive url {self.url!r}")
        ts = self.timestamp
        if not (ts.isascii() and ts.isdigit()) or len(ts) not in TIMESTAMP_LENGTHS:
            raise BadTimestamp(f"timestamp must be 4, 6, 8 or 14 digits, got {ts!r}")


@dataclass(frozen=True)
class CdxRecord:
    timestamp: str
    original: str
    mimetype: str = ""
    statuscode: str = ""
    digest: str = ""
    length: str = ""

    @property
    def snapshot_url(self) -> str:
        return snapshot_url(self.original, self.timestamp)


def build_cdx_url(req: ArchiveRequest) -> str:
    """The CDX index query for ``req``.

    Plain host/path URLs are inserted verbatim; ``&``, ``?``, ``#``, ``=``,
    ``+`` and ``%`` are percent-encoded so the query keeps exactly three
    fields and the url field decodes back to the input.
    """
    url = quote(req.url, safe=_URL_SAFE)
    return f"{CDX_ENDPOINT}?url={url}&output=json&from={req.timestamp}"


def snapshot_url(url: str, timestamp: str) -> str:
    """Raw archived body (the ``id_`` flag skips the archive's page chrome)."""
    return f"{SNAPSHOT_PREFIX}{timestamp}id_/{url}"


def parse_cdx(body: str) -> list[CdxRecord]:
    """Rows of a JSON CDX response; the first row is the field header."""
    if not body.strip():
        return []
    rows = json.loads(body)
    if not rows:
        return []
    header, data = rows[0], rows[1:]
    records = []
    for row in data:
        item = dict(zip(header, row))
        records.append(
            CdxRecord(
                timestamp=item.get("timestamp", ""),
                original=item.get("original", ""),
                mimetype=item.get("mimetype", ""),
                statuscode=item.get("statuscode", ""),
                digest=item.get("digest", ""),
                length=item.get("length", ""),
            )
        )
    return records


def _get(transport: Transport, url: str, timeout: float) -> Response:
    resp = transport.request("GET", url, timeout=timeout)
    if resp.status != 200:
        raise FetchFailed(resp.status, url)
    return resp


def cdx_lookup(req: ArchiveRequest, transport: Transport, timeout: float = 15.0) -> list[CdxRecord]:
    return parse_cdx(_get(transport, build_cdx_url(req), timeout).text)


def fetch_snapshot(record: CdxRecord, transport: Transport, timeout: float = 15.0) -> Response:
    return _get(transport, record.snapshot_url, timeout)
