"""Harness configuration: an INI file naming the model, agent knobs and tools."""

from __future__ import annotations

import configparser
import hashlib
import json
from collections.abc import Callable
from dataclasses import dataclass, field
from pathlib import Path

from agentlab.core.clients import EchoClient, HashMockClient, ModelClient, OpenAIChatClient, ScriptedClient
from agentlab.core.loop import AgentConfig
from agentlab.errors import ConfigError

# section -> key -> (type, default); unknown keys are rejected to catch typos
SCHEMA: dict[str, dict[str, tuple[type, object]]] = {
    "model": {
        "provider": (str, "hash"),
        "script": (str, ""),
        "model": (str, ""),
        "base_url": (str, "https://api.openai.com/v1"),
        "api_key_env": (str, "OPENAI_API_KEY"),
        "timeout": (float, 120.0),
    },
    "agent": {
        "max_steps": (int, 20),
        "temperature": (float, 0.0),
        "max_tokens": (int, 2048),
        "seed": (int, 0),
        "planning": (bool, True),
        "revision_n": (int, 5),
        "facts": (str, ""),
    },
    "planner": {
        "tips_file": (str, ""),
        "beta": (float, 1.0),
    },
    "memory": {
        "enabled": (bool, False),
        "mode": (str, "with_suggestions"),
        "tau": (int, 10),
        "k": (int, 3),
        "long_term": (bool, True),
        "in_planning": (bool, True),
    },
    "tts": {
        "bon_n": (int, 1),
        "reflection": (bool, False),
        "gamma": (float, 1.0),
    },
    "search": {
        "enabled": (bool, False),
        "live": (bool, False),
        "cassettes": (str, ""),
        "preset": (str, "single"),
        "extractor": (str, "jina_style_reader"),
        "optimize": (bool, False),
        "roll_out": (int, 3),
        "timeout": (float, 15.0),
        "retries": (int, 1),
    },
    "eval": {
        "max_retries": (int, 2),
        "workers": (int, 4),
    },
}

PROVIDERS = ("script", "openai", "hash", "echo")
PATH_KEYS = {("model", "script"), ("planner", "tips_file"), ("search", "cassettes")}


def _convert(parser: configparser.ConfigParser, section: str, key: str, kind: type) -> object:
    try:
        if kind is bool:
            return parser.getboolean(section, key)
        if kind is int:
            return parser.getint(section, key)
        if kind is float:
            return parser.getfloat(section, key)
    except ValueError as exc:
        raise ConfigError(f"[{section}] {key}: {exc}") from None
    return parser.get(section, key)


@dataclass(frozen=True)
class HarnessConfig:
    """Typed view of the INI file; ``raw`` keeps the literal values for hashing."""

    values: dict[str, dict[str, object]]
    raw: dict[str, dict[str, str]] = field(default_factory=dict)
    base_dir: Path = Path(".")

    def __getitem__(self, section: str) -> dict[str, object]:
        return self.values[section]

    @classmethod
    def from_text(cls, text: str, base_dir: str | Path = ".") -> HarnessConfig:
        parser = configparser.ConfigParser(interpolation=None, inline_comment_prefixes=(";",))
        try:
            parser.read_string(text)
        except configparser.Error as exc:
            raise ConfigError(str(exc)) from None
        for section in parser.sections():
            if section not in SCHEMA:
                raise ConfigError(f"unknown section [{section}]")
            for key in parser[section]:
                if key not in SCHEMA[section]:
                    raise ConfigError(f"unknown key {key!r} in [{section}]")
        values: dict[str, dict[str, object]] = {}
        for section, keys in SCHEMA.items():
            values[section] = {}
            for key, (kind, default) in keys.items():
                if parser.has_option(section, key):
                    values[section][key] = _convert(parser, section, key, kind)
                else:
                    values[section][key] = default
        raw = {s: dict(parser[s]) for s in parser.sections()}
        config = cls(values=values, raw=raw, base_dir=Path(base_dir))
        config.validate()
        return config

    @classmethod
    def load(cls, path: str | Path) -> HarnessConfig:
        path = Path(path)
        try:
            text = path.read_text(encoding="utf-8")
        except OSError as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        return cls.from_text(text, base_dir=path.parent)

    @classmethod
    def default(cls) -> HarnessConfig:
        return cls.from_text("")

    def validate(self) -> None:
        provider = self["model"]["provider"]
        if provider not in PROVIDERS:
            raise ConfigError(f"provider must be one of {PROVIDERS}, got {provider!r}")
        if provider == "script" and not self["model"]["script"]:
            raise ConfigError("provider 'script' needs [model] script = <path>")
        if provider == "openai" and not self["model"]["model"]:
            raise ConfigError("provider 'openai' needs [model] model = <name>")
        if not 0 < self["tts"]["gamma"] <= 1:
            raise ConfigError("[tts] gamma must be in (0, 1]")
        if self["eval"]["max_retries"] < 0 or self["eval"]["workers"] < 1:
            raise ConfigError("[eval] max_retries must be >= 0 and workers >= 1")
        if self["memory"]["mode"] not in ("with_suggestions", "retrieval_only"):
            raise ConfigError("[memory] mode must be with_suggestions or retrieval_only")

    def path(self, section: str, key: str) -> Path | None:
        """A path-valued option resolved against the config file's directory."""
        if (section, key) not in PATH_KEYS:
            raise KeyError(f"{section}.{key} is not a path option")
        value = self[section][key]
        if not value:
            return None
        p = Path(str(value))
        return p if p.is_absolute() else self.base_dir / p

    @property
    def config_hash(self) -> str:
        canonical = json.dumps(self.raw, sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canonical.encode()).hexdigest()

    def agent_config(self) -> AgentConfig:
        a, tts, mem = self["agent"], self["tts"], self["memory"]
        tips: tuple[str, ...] = ()
        tips_path = self.path("planner", "tips_file")
        if tips_path is not None:
            from agentlab.planner.tips import load_tips

            tips = tuple(load_tips(tips_path, self["planner"]["beta"]).texts)
        try:
            return AgentConfig(
                max_steps=a["max_steps"],
                planning=a["planning"],
                revision_n=a["revision_n"],
                facts=a["facts"],
                temperature=a["temperature"],
                max_tokens=a["max_tokens"],
                seed=a["seed"],
                tips=tips,
                bon_n=tts["bon_n"],
                reflection=tts["reflection"],
                memory_in_planning=mem["in_planning"],
            )
        except ValueError as exc:
            raise ConfigError(str(exc)) from None


ClientFactory = Callable[[str, int, int], ModelClient]


def load_script(path: Path) -> dict:
    """Read a script file: ``{"tasks": {id: [[responses per attempt] per run]}, "default": [...]}``."""
    try:
        data = json.loads(path.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot load script {path}: {exc}") from None
    if not isinstance(data, dict):
        raise ConfigError("script must be a JSON object")
    return data


def client_factory(config: HarnessConfig) -> ClientFactory:
    """A function giving the model client for (task_id, run_index, attempt).

    Scripted clients are fresh per call so runs never share state; a missing
    run or attempt falls back to the last one listed, then to "default".
    """
    m = config["model"]
    provider = m["provider"]
    if provider == "echo":
        return lambda task_id, run, attempt: EchoClient()
    if provider == "hash":
        return lambda task_id, run, attempt: HashMockClient()
    if provider == "openai":
        shared = OpenAIChatClient(
            model=m["model"], base_url=m["base_url"], api_key_env=m["api_key_env"], timeout=m["timeout"]
        )
        return lambda task_id, run, attempt: shared
    script = load_script(config.path("model", "script"))
    tasks = script.get("tasks", {})
    default = script.get("default", ["FINAL ANSWER: Unable to determine"])

    def make(task_id: str, run: int, attempt: int) -> ModelClient:
        runs = tasks.get(task_id)
        responses = default
        if runs:
            attempts = runs[min(run, len(runs) - 1)]
            if attempts:
                responses = attempts[min(attempt, len(attempts) - 1)]
        return ScriptedClient(list(responses), identifier=f"script:{task_id}")

    return make
