"""Bounded short-term buffer of recent (state, action) pairs."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

DEFAULT_TAU = 10


@dataclass
class CurrentMemory:
    capacity_tau: int = DEFAULT_TAU
    window: deque[tuple[str, str]] = field(default_factory=deque)

    def __post_init__(self) -> None:
        if self.capacity_tau < 1:
            raise ValueError("capacity_tau must be >= 1")
        # rebuild so the bound holds even for a caller-provided window
        self.window = deque(self.window, maxlen=self.capacity_tau)

    def __len__(self) -> int:
        return len(self.window)

    def pairs(self) -> list[tuple[str, str]]:
        return list(self.window)

    def render(self) -> str:
        return "\n".join(f"state: {s}\naction: {a}" for s, a in self.window)


def append_current(mem: CurrentMemory, state: str, action: str) -> CurrentMemory:
    """Append a pair, evicting the oldest once the window is full."""
    mem.window.append((state, action))
    return mem
