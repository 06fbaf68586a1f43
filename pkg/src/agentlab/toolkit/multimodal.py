"""Media adapters and the multimodal answer composition."""

from __future__ import annotations

import hashlib
from collections.abc import Mapping
from typing import Protocol, runtime_checkable

from agentlab.core.clients import ModelClient
from agentlab.core.types import GenParams
from agentlab.errors import AdapterFailed


@runtime_checkable
class MediaAdapter(Protocol):
    def transcribe(self, audio: bytes) -> str: ...

    def describe_image(self, image: bytes, question: str) -> str: ...

    def describe_video(self, video: bytes, question: str) -> str: ...


class FixtureAdapter:
    """Answers from a table keyed by the sha256 of the media bytes.

    Unknown media fall back to a deterministic placeholder naming the
    digest and size, so tests never depend on a real model.
    """

    def __init__(self, responses: Mapping[str, str] | None = None) -> None:
        self.responses = dict(responses or {})

    @staticmethod
    def key(data: bytes) -> str:
        return hashlib.sha256(data).hexdigest()

    def _lookup(self, kind: str, data: bytes) -> str:
        digest = self.key(data)
        if digest in self.responses:
            return self.responses[digest]
        return f"[{kind} {digest[:12]}, {len(data)} bytes]"

    def transcribe(self, audio: bytes) -> str:
        return self._lookup("audio", audio)

    def describe_image(self, image: bytes, question: str) -> str:
        return self._lookup("image", image)

    def describe_video(self, video: bytes, question: str) -> str:
        return self._lookup("video", video)


def compose_prompt(
    question: str,
    image_text: str | None = None,
    video_text: str | None = None,
    audio_text: str | None = None,
) -> str:
    parts = [question]
    if image_text is not None:
        parts.append(f"Image description: {image_text}")
    if video_text is not None:
        parts.append(f"Video description: {video_text}")
    if audio_text is not None:
        parts.append(f"Audio transcript: {audio_text}")
    return "\n\n".join(parts)


def answer_multimodal(
    question: str,
    image: bytes | None,
    video: bytes | None,
    adapter: MediaAdapter,
    client: ModelClient,
    audio: bytes | None = None,
    params: GenParams = GenParams(),
) -> str:
    """Turn each medium into text with ``adapter``, then ask ``client`` once.

    With no media the question is sent unchanged.
    """
    try:
        image_text = adapter.describe_image(image, question) if image is not None else None
        video_text = adapter.describe_video(video, question) if video is not None else None
        audio_text = adapter.transcribe(audio) if audio is not None else None
    except Exception as exc:
        raise AdapterFailed(f"{type(exc).__name__}: {exc}") from exc
    prompt = compose_prompt(question, image_text, video_text, audio_text)
    return client.complete([{"role": "user", "content": prompt}], params)
