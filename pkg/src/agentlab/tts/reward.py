"""Discounted aggregation of per-step rewards."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass

from agentlab.core.types import StepRecord


@dataclass(frozen=True)
class RewardTrace:
    rewards: tuple[float, ...] = ()
    gamma: float = 1.0

    def __post_init__(self) -> None:
        if not 0 < self.gamma <= 1:
            raise ValueError(f"gamma must be in (0, 1], got {self.gamma}")
        if not all(math.isfinite(r) for r in self.rewards):
            raise ValueError("rewards must be finite")


def aggregate_reward(trace: RewardTrace) -> float:
    """Sum of gamma**t * r_t with t counted from 1, so the first reward is discounted once."""
    return math.fsum(trace.gamma**t * r for t, r in enumerate(trace.rewards, 1))


def rewards_from_steps(steps: Sequence[StepRecord]) -> tuple[float, ...]:
    """Judge scores of the scored action steps, rescaled from 0..10 to 0..1."""
    return tuple(s.score / 10 for s in steps if s.kind == "action" and s.score is not None)
