"""Trajectory model, model clients, prompt templates, tools and the run loop."""

from agentlab.core.clients import EchoClient, HashMockClient, ModelClient, OpenAIChatClient, ScriptedClient
from agentlab.core.prompts import PromptTemplate, load_template, render, render_prompt
from agentlab.core.tools import Tool, ToolResult, parse_action, truncate
from agentlab.core.types import GenParams, StepRecord, ToolSpec, Trajectory, append_step

__all__ = [
    "EchoClient",
    "GenParams",
    "HashMockClient",
    "ModelClient",
    "OpenAIChatClient",
    "PromptTemplate",
    "ScriptedClient",
    "StepRecord",
    "Tool",
    "ToolResult",
    "ToolSpec",
    "Trajectory",
    "append_step",
    "load_template",
    "parse_action",
    "render",
    "render_prompt",
    "truncate",
]
