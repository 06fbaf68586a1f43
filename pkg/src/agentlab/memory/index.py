"""Embedding index over memory summaries with exact cosine retrieval."""

from __future__ import annotations

import hashlib
import json
import math
import re
import threading
from collections.abc import Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol, runtime_checkable

from agentlab.errors import DimensionMismatch, ZeroVector

Vector = tuple[float, ...]

_TOKEN = re.compile(r"\w+")


@dataclass(frozen=True)
class MemorySummary:
    step_range: tuple[int, int]
    text: str
    suggestions: str | None = None

    def __post_init__(self) -> None:
        start, end = self.step_range
        if start > end:
            raise ValueError(f"step_range start {start} > end {end}")
        if not self.text.strip():
            raise ValueError("summary text must be non-empty")

    def to_dict(self) -> dict:
        return {
            "step_range": list(self.step_range),
            "text": self.text,
            "suggestions": self.suggestions,
        }

    @classmethod
    def from_dict(cls, data: dict) -> MemorySummary:
        start, end = data["step_range"]
        return cls(step_range=(int(start), int(end)), text=data["text"], suggestions=data.get("suggestions"))


@runtime_checkable
class Embedder(Protocol):
    dim: int

    def encode(self, text: str) -> Vector: ...


class HashingEmbedder:
    """Signed hashed bag-of-words.

    Each token adds +1 or -1 to one of ``dim`` buckets chosen by its sha256
    digest. Components are small integers, so similarity ties between
    identical texts are exact.
    """

    def __init__(self, dim: int = 64) -> None:
        if dim < 1:
            raise ValueError("dim must be >= 1")
        self.dim = dim

    def encode(self, text: str) -> Vector:
        vec = [0.0] * self.dim
        for token in _TOKEN.findall(text.casefold()):
            digest = hashlib.sha256(token.encode("utf-8")).digest()
            bucket = int.from_bytes(digest[:4], "big") % self.dim
            vec[bucket] += 1.0 if digest[4] & 1 else -1.0
        return tuple(vec)


def cosine_sim(a: Sequence[float], b: Sequence[float]) -> float:
    if len(a) != len(b):
        raise DimensionMismatch(f"dimensions differ: {len(a)} vs {len(b)}")
    norm_a = math.sqrt(math.fsum(x * x for x in a))
    norm_b = math.sqrt(math.fsum(x * x for x in b))
    if norm_a == 0 or norm_b == 0:
        raise ZeroVector("cosine similarity is undefined for a zero vector")
    sim = math.fsum(x * y for x, y in zip(a, b)) / (norm_a * norm_b)
    return max(-1.0, min(1.0, sim))


@dataclass
class MemoryIndex:
    entries: list[tuple[Vector, MemorySummary]] = field(default_factory=list)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False, compare=False)

    def __post_init__(self) -> None:
        dims = {len(v) for v, _ in self.entries}
        if len(dims) > 1:
            raise DimensionMismatch(f"mixed vector dimensions {sorted(dims)}")
        self.entries = [(tuple(v), s) for v, s in self.entries]

    def __len__(self) -> int:
        return len(self.entries)

    @property
    def dim(self) -> int | None:
        return len(self.entries[0][0]) if self.entries else None

    def add(self, vector: Sequence[float], summary: MemorySummary) -> None:
        vec = tuple(float(x) for x in vector)
        with self._lock:
            if self.entries and len(vec) != len(self.entries[0][0]):
                raise DimensionMismatch(f"expected dimension {self.dim}, got {len(vec)}")
            self.entries.append((vec, summary))

    def add_summary(self, summary: MemorySummary, embedder: Embedder) -> None:
        self.add(embedder.encode(summary.text), summary)

    def snapshot(self) -> list[tuple[Vector, MemorySummary]]:
        with self._lock:
            return list(self.entries)

    def save(self, path: str | Path) -> None:
        """One line per entry: space-separated vector, a tab, the summary JSON."""
        lines = []
        for vec, summary in self.snapshot():
            numbers = " ".join(format(x, ".17g") for x in vec)
            lines.append(numbers + "\t" + json.dumps(summary.to_dict(), ensure_ascii=False))
        Path(path).write_text("".join(line + "\n" for line in lines), encoding="utf-8")

    @classmethod
    def load(cls, path: str | Path) -> MemoryIndex:
        entries = []
        for line in Path(path).read_text(encoding="utf-8").splitlines():
            if not line:
                continue
            numbers, _, payload = line.partition("\t")
            vec = tuple(float(x) for x in numbers.split())
            entries.append((vec, MemorySummary.from_dict(json.loads(payload))))
        return cls(entries=entries)


def rank(
    entries: Sequence[tuple[Vector, MemorySummary]], query_vector: Sequence[float]
) -> list[tuple[int, float]]:
    """(entry index, similarity) for every entry, best first, ties by index."""
    scored = [(i, cosine_sim(query_vector, vec)) for i, (vec, _) in enumerate(entries)]
    scored.sort(key=lambda pair: (-pair[1], pair[0]))
    return scored


def retrieve(
    index: MemoryIndex, query: str, embedder: Embedder, k: int = 3
) -> list[MemorySummary]:
    """The ``k`` summaries most similar to ``query``; ties go to older entries."""
    if k < 1:
        raise ValueError("k must be >= 1")
    if not len(index):
        raise ValueError("cannot retrieve from an empty index")
    entries = index.snapshot()
    ranked = rank(entries, embedder.encode(query))
    return [entries[i][1] for i, _ in ranked[:k]]
