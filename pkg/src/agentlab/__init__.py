"""Agent orchestration framework with planning, memory, test-time scaling and search."""

__version__ = "0.1.0"
