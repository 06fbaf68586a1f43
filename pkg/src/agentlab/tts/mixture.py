"""Weighted mixture over model policies."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from fractions import Fraction

from agentlab.errors import AllZeroWeights


@dataclass(frozen=True)
class MixtureWeights:
    weights: tuple[tuple[str, float], ...]

    def __post_init__(self) -> None:
        ids = [cid for cid, _ in self.weights]
        if not ids:
            raise AllZeroWeights("a mixture needs at least one client")
        if len(ids) != len(set(ids)) or not all(ids):
            raise ValueError(f"client ids must be non-empty and unique, got {ids}")
        for cid, alpha in self.weights:
            if not math.isfinite(alpha) or alpha < 0:
                raise ValueError(f"weight for {cid!r} must be finite and >= 0, got {alpha}")
        if not any(alpha > 0 for _, alpha in self.weights):
            raise AllZeroWeights("every mixture weight is zero")

    @classmethod
    def uniform(cls, *client_ids: str) -> MixtureWeights:
        return cls(tuple((cid, 1.0) for cid in client_ids))

    @property
    def client_ids(self) -> list[str]:
        return [cid for cid, _ in self.weights]

    def normalized(self) -> list[tuple[str, float]]:
        total = math.fsum(alpha for _, alpha in self.weights)
        return [(cid, alpha / total) for cid, alpha in self.weights]


def sample_mixture(weights: MixtureWeights, rng_seed: int) -> str:
    """Draw one client id with probability proportional to its weight.

    The comparison is done on exact fractions, so scaling every weight by
    the same factor does not move any decision boundary.
    """
    u = Fraction(random.Random(rng_seed).random())
    total = sum(Fraction(alpha) for _, alpha in weights.weights)
    threshold = u * total
    cumulative = Fraction(0)
    chosen = None
    for cid, alpha in weights.weights:
        if alpha <= 0:
            continue
        chosen = cid
        cumulative += Fraction(alpha)
        if threshold < cumulative:
            return cid
    return chosen  # type: ignore[return-value]
