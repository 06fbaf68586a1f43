"""HTTP transport interface with a live client and a record/replay cassette store."""

from __future__ import annotations

import base64
import hashlib
import json
import re
import threading
from collections.abc import Mapping
from dataclasses import dataclass, field
from pathlib import Path
from typing import Literal, Protocol, runtime_checkable
from urllib.parse import parse_qsl, urlencode, urlsplit, urlunsplit

import httpx

from agentlab.errors import CassetteMiss, TransportError

DEFAULT_TIMEOUT = 15.0
SECRET_PARAMS = frozenset({"key", "cx", "api_key", "apikey", "token", "access_token"})
REDACTED = "REDACTED"


@dataclass(frozen=True)
class Response:
    status: int
    headers: dict[str, str] = field(default_factory=dict)
    body: bytes = b""
    url: str = ""

    @property
    def text(self) -> str:
        return self.body.decode("utf-8", errors="replace")

    def json(self):
        return json.loads(self.body)

    @property
    def content_type(self) -> str:
        for name, value in self.headers.items():
            if name.lower() == "content-type":
                return value.split(";")[0].strip().lower()
        return ""


@runtime_checkable
class Transport(Protocol):
    def request(
        self,
        method: str,
        url: str,
        params: Mapping[str, str] | None = None,
        headers: Mapping[str, str] | None = None,
        body: bytes | None = None,
        timeout: float = DEFAULT_TIMEOUT,
    ) -> Response: ...


def full_url(url: str, params: Mapping[str, str] | None = None) -> str:
    """``url`` with ``params`` appended to its query string."""
    if not params:
        return url
    parts = urlsplit(url)
    query = parse_qsl(parts.query, keep_blank_values=True) + list(params.items())
    return urlunsplit(parts._replace(query=urlencode(query)))


def redact_url(url: str) -> str:
    parts = urlsplit(url)
    if not parts.query:
        return url
    query = [
        (k, REDACTED if k.lower() in SECRET_PARAMS else v)
        for k, v in parse_qsl(parts.query, keep_blank_values=True)
    ]
    return urlunsplit(parts._replace(query=urlencode(query)))


class HttpxTransport:
    """Live transport over a shared httpx client (thread-safe)."""

    def __init__(self, client: httpx.Client | None = None, user_agent: str = "agentlab/0.1") -> None:
        self._client = client or httpx.Client(follow_redirects=True, headers={"User-Agent": user_agent})

    def request(
        self,
        method: str,
        url: str,
        params: Mapping[str, str] | None = None,
        headers: Mapping[str, str] | None = None,
        body: bytes | None = None,
        timeout: float = DEFAULT_TIMEOUT,
    ) -> Response:
        target = full_url(url, params)
        try:
            resp = self._client.request(
                method, target, headers=dict(headers or {}), content=body, timeout=timeout
            )
        except httpx.TimeoutException as exc:
            raise TransportError(f"timeout after {timeout}s: {redact_url(target)}") from exc
        except httpx.HTTPError as exc:
            raise TransportError(f"{type(exc).__name__}: {redact_url(target)}") from exc
        return Response(
            status=resp.status_code,
            headers=dict(resp.headers),
            body=resp.content,
            url=str(resp.url),
        )


def cassette_name(method: str, url: str, body: bytes | None) -> str:
    """File name for one interaction: method, host and a digest of url and body."""
    body_hash = hashlib.sha256(body or b"").hexdigest()
    safe_url = redact_url(url)
    digest = hashlib.sha256(f"{method.upper()} {safe_url}\n{body_hash}".encode()).hexdigest()[:20]
    host = re.sub(r"[^A-Za-z0-9.-]", "_", urlsplit(url).hostname or "nohost")
    return f"{method.lower()}-{host}-{digest}.json"


class CassetteTransport:
    """Replays recorded interactions from a directory; can also record them.

    In ``replay`` mode an unrecorded request raises CassetteMiss. In
    ``record`` mode requests go to ``inner`` and each response (or error)
    is written to its own JSON file. A stored ``error`` entry replays as a
    TransportError, which is how timeouts are injected in tests.
    """

    def __init__(
        self,
        directory: str | Path,
        mode: Literal["replay", "record"] = "replay",
        inner: Transport | None = None,
    ) -> None:
        if mode == "record" and inner is None:
            raise ValueError("record mode needs an inner transport")
        self.directory = Path(directory)
        self.mode = mode
        self.inner = inner
        self._lock = threading.Lock()

    def path_for(self, method: str, url: str, body: bytes | None = None) -> Path:
        return self.directory / cassette_name(method, url, body)

    def request(
        self,
        method: str,
        url: str,
        params: Mapping[str, str] | None = None,
        headers: Mapping[str, str] | None = None,
        body: bytes | None = None,
        timeout: float = DEFAULT_TIMEOUT,
    ) -> Response:
        target = full_url(url, params)
        path = self.path_for(method, target, body)
        if self.mode == "replay":
            if not path.exists():
                raise CassetteMiss(f"no cassette for {method.upper()} {redact_url(target)} ({path.name})")
            return self._replay(path)
        assert self.inner is not None
        try:
            resp = self.inner.request(method, url, params, headers, body, timeout)
        except TransportError as exc:
            self.save(method, target, body, error=str(exc))
            raise
        self.save(method, target, body, response=resp)
        return resp

    def save(
        self,
        method: str,
        url: str,
        body: bytes | None = None,
        response: Response | None = None,
        error: str | None = None,
    ) -> Path:
        record: dict = {
            "request": {
                "method": method.upper(),
                "url": redact_url(url),
                "body_sha256": hashlib.sha256(body or b"").hexdigest(),
            }
        }
        if error is not None:
            record["error"] = error
        if response is not None:
            entry: dict = {"status": response.status, "headers": dict(sorted(response.headers.items()))}
            try:
                entry["body"] = response.body.decode("utf-8")
            except UnicodeDecodeError:
                entry["body_b64"] = base64.b64encode(response.body).decode("ascii")
            record["response"] = entry
        path = self.path_for(method, url, body)
        with self._lock:
            self.directory.mkdir(parents=True, exist_ok=True)
            path.write_text(json.dumps(record, indent=2, ensure_ascii=False) + "\n", encoding="utf-8")
        return path

    @staticmethod
    def _replay(path: Path) -> Response:
        record = json.loads(path.read_text(encoding="utf-8"))
        if "error" in record:
            raise TransportError(record["error"])
        entry = record["response"]
        if "body_b64" in entry:
            body = base64.b64decode(entry["body_b64"])
        else:
            body = entry.get("body", "").encode("utf-8")
        return Response(
            status=int(entry["status"]),
            headers=dict(entry.get("headers", {})),
            body=body,
            url=record["request"]["url"],
        )
