"""Exception types shared across the framework."""

from __future__ import annotations


class AgentLabError(Exception):
    """Base class for every error raised by agentlab."""


# agent core

class MissingPlaceholder(AgentLabError, KeyError):
    def __init__(self, name: str) -> None:
        super().__init__(name)
        self.name = name

    def __str__(self) -> str:
        return f"no binding for placeholder {{{self.name}}}"


class NonMonotonicStep(AgentLabError, ValueError):
    pass


class MaxStepsExceeded(AgentLabError):
    def __init__(self, max_steps: int, trajectory=None) -> None:
        super().__init__(f"no final answer within {max_steps} steps")
        self.max_steps = max_steps
        self.trajectory = trajectory


class ToolFailure(AgentLabError):
    pass


# planner

class UnparseablePlan(AgentLabError, ValueError):
    pass


class CyclicDependencies(AgentLabError, ValueError):
    pass


class DecompositionError(AgentLabError, ValueError):
    """Subtask text references an undefined subtask or repeats an id."""


class ParallelListMismatch(UserWarning):
    """Declared PARALLEL-LIST differs from the computed root set."""


class JudgeUnparseable(AgentLabError, ValueError):
    pass


# memory

class DimensionMismatch(AgentLabError, ValueError):
    pass


class ZeroVector(AgentLabError, ValueError):
    pass


class EmptyModelOutput(AgentLabError, ValueError):
    pass


# tts and structured judge outputs

class VerdictError(AgentLabError, ValueError):
    """A judge response could not be turned into a verdict."""


class MalformedVerdict(VerdictError):
    pass


class OutOfRangeScore(VerdictError):
    pass


class IndexOutOfRange(VerdictError):
    pass


class AllZeroWeights(AgentLabError, ValueError):
    pass


# search agent

class WrongArity(AgentLabError, ValueError):
    pass


class MalformedList(AgentLabError, ValueError):
    pass


class TransportError(AgentLabError):
    pass


class CassetteMiss(TransportError):
    pass


class AllSourcesFailed(AgentLabError):
    def __init__(self, warnings: list[str]) -> None:
        super().__init__("every search source failed: " + "; ".join(warnings))
        self.warnings = warnings


class FetchFailed(AgentLabError):
    def __init__(self, status: int, url: str = "") -> None:
        super().__init__(f"HTTP {status} for {url}" if url else f"HTTP {status}")
        self.status = status
        self.url = url


class ExtractFailed(AgentLabError):
    pass


class BadTimestamp(AgentLabError, ValueError):
    pass


# toolkit

class UnsupportedKind(AgentLabError, ValueError):
    pass


class ParseFailed(AgentLabError):
    pass


class AdapterFailed(AgentLabError):
    pass


# evaluation

class SchemaError(AgentLabError, ValueError):
    def __init__(self, line: int, reason: str) -> None:
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


class InsufficientRuns(AgentLabError, ValueError):
    pass


class ConfigError(AgentLabError, ValueError):
    pass
