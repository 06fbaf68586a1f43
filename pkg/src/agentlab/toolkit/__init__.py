"""Document parsing and multimodal adapter interfaces."""

from agentlab.toolkit.documents import DocumentKind, classify_document, parse_document, render_table, sanitize
from agentlab.toolkit.multimodal import FixtureAdapter, MediaAdapter, answer_multimodal, compose_prompt

__all__ = [
    "DocumentKind",
    "FixtureAdapter",
    "MediaAdapter",
    "answer_multimodal",
    "classify_document",
    "compose_prompt",
    "parse_document",
    "render_table",
    "sanitize",
]
