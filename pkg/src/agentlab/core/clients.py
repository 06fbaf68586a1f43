"""Model client interface plus offline test doubles and an HTTP chat client."""

from __future__ import annotations

import hashlib
import json
import os
import threading
from collections.abc import Callable, Sequence
from typing import Protocol, TypeVar, runtime_checkable

import httpx

from agentlab.core.types import GenParams
from agentlab.errors import IndexOutOfRange, MalformedVerdict, OutOfRangeScore

T = TypeVar("T")

Message = dict[str, str]  # {"role": ..., "content": ...}


@runtime_checkable
class ModelClient(Protocol):
    identifier: str

    def complete(self, messages: Sequence[Message], params: GenParams) -> str: ...


def last_user_text(messages: Sequence[Message]) -> str:
    for msg in reversed(messages):
        if msg.get("role") == "user":
            return msg.get("content", "")
    return ""


def prompt_text(messages: Sequence[Message]) -> str:
    return "\n\n".join(m.get("content", "") for m in messages)


class ScriptedClient:
    """Replays a fixed list of responses in order.

    Once the script is exhausted the last response repeats, unless
    ``strict`` is set, in which case an IndexError is raised. Every call is
    recorded in ``calls`` so tests can inspect the rendered prompts.
    """

    def __init__(
        self,
        responses: Sequence[str] | Callable[[Sequence[Message]], str],
        identifier: str = "scripted",
        strict: bool = False,
    ) -> None:
        self.identifier = identifier
        self._responses = responses
        self._strict = strict
        self._lock = threading.Lock()
        self.calls: list[list[Message]] = []

    def complete(self, messages: Sequence[Message], params: GenParams) -> str:
        with self._lock:
            index = len(self.calls)
            self.calls.append([dict(m) for m in messages])
        if callable(self._responses):
            return self._responses(messages)
        if not self._responses:
            raise IndexError("scripted client has no responses")
        if index >= len(self._responses):
            if self._strict:
                raise IndexError(f"script exhausted after {len(self._responses)} calls")
            index = len(self._responses) - 1
        return self._responses[index]

    @property
    def prompts(self) -> list[str]:
        return [prompt_text(c) for c in self.calls]


class EchoClient:
    """Returns the content of the last user message unchanged."""

    def __init__(self, identifier: str = "echo") -> None:
        self.identifier = identifier

    def complete(self, messages: Sequence[Message], params: GenParams) -> str:
        return last_user_text(messages)


class HashMockClient:
    """Deterministic pseudo-model: output is a digest of messages, params and seed."""

    def __init__(self, identifier: str = "hash-mock", vocabulary: Sequence[str] = ()) -> None:
        self.identifier = identifier
        self.vocabulary = list(vocabulary) or [
            "search", "read", "answer", "verify", "compute", "plan", "check", "done",
        ]

    def complete(self, messages: Sequence[Message], params: GenParams) -> str:
        payload = json.dumps(
            {
                "messages": list(messages),
                "temperature": params.temperature,
                "max_tokens": params.max_tokens,
                "seed": params.seed,
            },
            sort_keys=True,
        )
        digest = hashlib.sha256(payload.encode()).digest()
        words = [self.vocabulary[b % len(self.vocabulary)] for b in digest[:8]]
        return " ".join(words)


class OpenAIChatClient:
    """Client for any OpenAI-compatible ``/chat/completions`` endpoint."""

    def __init__(
        self,
        model: str,
        base_url: str = "https://api.openai.com/v1",
        api_key_env: str = "OPENAI_API_KEY",
        timeout: float = 120.0,
        identifier: str | None = None,
        http: httpx.Client | None = None,
    ) -> None:
        self.model = model
        self.identifier = identifier or model
        self.base_url = base_url.rstrip("/")
        self.api_key_env = api_key_env
        self._http = http or httpx.Client(timeout=timeout)

    def complete(self, messages: Sequence[Message], params: GenParams) -> str:
        key = os.environ.get(self.api_key_env, "")
        body: dict = {
            "model": self.model,
            "messages": list(messages),
            "temperature": params.temperature,
            "max_tokens": params.max_tokens,
        }
        if params.seed is not None:
            body["seed"] = params.seed
        resp = self._http.post(
            f"{self.base_url}/chat/completions",
            json=body,
            headers={"Authorization": f"Bearer {key}"} if key else {},
        )
        resp.raise_for_status()
        return resp.json()["choices"][0]["message"]["content"] or ""


REASK = (
    "Your previous reply could not be parsed. Reply again with only the "
    "requested output in the exact format described above."
)


def ask_with_reask(
    judge: ModelClient,
    prompt: str,
    parse: Callable[[str], T],
    params: GenParams = GenParams(),
) -> T:
    """Ask once; on a malformed reply ask exactly once more, then give up.

    Range errors are not malformed output and are raised immediately.
    """
    messages: list[Message] = [{"role": "user", "content": prompt}]
    raw = judge.complete(messages, params)
    try:
        return parse(raw)
    except (OutOfRangeScore, IndexOutOfRange):
        raise
    except MalformedVerdict:
        pass
    messages = messages + [
        {"role": "assistant", "content": raw},
        {"role": "user", "content": REASK},
    ]
    return parse(judge.complete(messages, params))
