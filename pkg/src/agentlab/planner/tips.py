"""Plan tips: textual heuristics and the numeric tip-adjusted action policy."""

from __future__ import annotations

import math
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class HeuristicSet:
    tips: tuple[tuple[str, float], ...] = ()
    beta: float = 1.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.beta) or self.beta < 0:
            raise ValueError(f"beta must be finite and >= 0, got {self.beta}")
        for pattern, bonus in self.tips:
            if not math.isfinite(bonus):
                raise ValueError(f"tip {pattern!r} has non-finite bonus {bonus}")

    @property
    def texts(self) -> list[str]:
        return [pattern for pattern, _ in self.tips]


@dataclass(frozen=True)
class ActionScore:
    action_id: str
    base_q: float
    tip_bonus: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.base_q) and math.isfinite(self.tip_bonus)):
            raise ValueError(f"action {self.action_id!r} has a non-finite score")


def tip_bonus(action_description: str, heuristics: HeuristicSet) -> float:
    """Sum of bonuses whose pattern occurs in the description, case-insensitively."""
    haystack = action_description.casefold()
    return math.fsum(b for p, b in heuristics.tips if p.casefold() in haystack)


def score_actions(
    actions: Sequence[tuple[str, str, float]], heuristics: HeuristicSet
) -> list[ActionScore]:
    """Build ActionScores from ``(action_id, description, base_q)`` triples."""
    return [
        ActionScore(action_id=aid, base_q=q, tip_bonus=tip_bonus(desc, heuristics))
        for aid, desc, q in actions
    ]


def softmax(logits: Sequence[float]) -> list[float]:
    if not logits:
        raise ValueError("softmax of an empty vector")
    top = max(logits)
    exps = [math.exp(x - top) for x in logits]
    total = math.fsum(exps)
    return [e / total for e in exps]


def tip_policy(scores: Sequence[ActionScore], heuristics: HeuristicSet) -> list[float]:
    """Action probabilities: softmax of base Q plus beta times the tip bonus."""
    if not scores:
        raise ValueError("tip_policy needs at least one action")
    return softmax([s.base_q + heuristics.beta * s.tip_bonus for s in scores])


def argmax(values: Sequence[float]) -> int:
    """Index of the largest value; ties go to the lowest index."""
    best = 0
    for i, v in enumerate(values):
        if v > values[best]:
            best = i
    return best


def load_tips(path: str | Path, beta: float = 1.0) -> HeuristicSet:
    """Read a tips file.

    One tip per line as ``pattern<TAB>bonus``; a line without a tab is a
    text-only tip with bonus 0. Blank lines and ``#`` comments are skipped.
    """
    tips = []
    for raw in Path(path).read_text(encoding="utf-8").splitlines():
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "\t" in line:
            pattern, _, bonus = line.rpartition("\t")
            tips.append((pattern.strip(), float(bonus)))
        else:
            tips.append((line, 0.0))
    return HeuristicSet(tips=tuple(tips), beta=beta)
