"""Short-term buffer, summaries, embedding index and long-term memory."""

from agentlab.memory.buffer import CurrentMemory, append_current
from agentlab.memory.index import Embedder, HashingEmbedder, MemoryIndex, MemorySummary, cosine_sim, retrieve
from agentlab.memory.summarize import AgentMemory, LongTermMemory, summarize_segment, update_long_term

__all__ = [
    "AgentMemory",
    "CurrentMemory",
    "Embedder",
    "HashingEmbedder",
    "LongTermMemory",
    "MemoryIndex",
    "MemorySummary",
    "append_current",
    "cosine_sim",
    "retrieve",
    "summarize_segment",
    "update_long_term",
]
