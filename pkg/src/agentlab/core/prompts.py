"""Prompt templates with ``{name}`` placeholders."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path

from agentlab.errors import MissingPlaceholder

# Only bare identifiers count as placeholders, so JSON examples embedded in
# the templates (``{"score": ...}``) are left alone.
PLACEHOLDER = re.compile(r"\{([A-Za-z_][A-Za-z0-9_]*)\}")


@dataclass(frozen=True)
class PromptTemplate:
    name: str
    body: str
    required_placeholders: frozenset[str] = field(default=frozenset())

    def __post_init__(self) -> None:
        if not self.required_placeholders:
            found = frozenset(PLACEHOLDER.findall(self.body))
            object.__setattr__(self, "required_placeholders", found)

    @classmethod
    def from_file(cls, path: str | Path, name: str | None = None) -> PromptTemplate:
        path = Path(path)
        return cls(name=name or path.stem, body=path.read_text(encoding="utf-8"))

    def render(self, **bindings: str) -> str:
        return render_prompt(self, bindings)


def render_prompt(template: PromptTemplate, bindings: dict[str, str]) -> str:
    for name in sorted(template.required_placeholders):
        if name not in bindings:
            raise MissingPlaceholder(name)

    def substitute(match: re.Match[str]) -> str:
        name = match.group(1)
        if name in bindings:
            return str(bindings[name])
        return match.group(0)

    return PLACEHOLDER.sub(substitute, template.body)


_override_dir: Path | None = None


def set_template_dir(path: str | Path | None) -> None:
    """Look up templates in ``path`` before the bundled defaults."""
    global _override_dir
    _override_dir = Path(path) if path else None


def load_template(name: str) -> PromptTemplate:
    if _override_dir is not None:
        candidate = _override_dir / f"{name}.txt"
        if candidate.exists():
            return PromptTemplate.from_file(candidate, name)
    body = resources.files("agentlab.prompts").joinpath(f"{name}.txt").read_text(encoding="utf-8")
    return PromptTemplate(name=name, body=body)


def render(name: str, **bindings: str) -> str:
    return render_prompt(load_template(name), bindings)
