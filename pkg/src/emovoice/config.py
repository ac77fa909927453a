"""Server/session configuration loading.

YAML (JSON-compatible) file, every key optional:

    port: 8750
    host: 127.0.0.1
    log_level: info
    static_dir: frontend/dist
    log_dir: logs
    seed: 0
    emotion_window_ms: 3000
    adapters:
      asr:     {impl: fake, fake_delay_ms: 200, fake_jitter_ms: 0, fake_script: []}
      chat:    {impl: http, http_endpoint: "http://...", timeout_ms: 10000}
      tts:     {impl: fake}
      emotion: {impl: fake, fake_timeline: [[0, neutral, 0.9]]}
    vad:
      frame_ms: 30
      hangover_ms: 500
      # ... any VadConfig field
    prompt:
      persona: "inline text"        # or persona_path: file
      instruction: "inline text"    # or instruction_path: file
      template_path: null           # placeholders {persona} {instruction} {history} {emotion_text} {user_text}
      max_chars: 6000
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import yaml

from .adapters import AdapterSpec
from .dialogue import load_template
from .pipeline import SessionConfig
from .vad import VadConfig

DEFAULT_PORT = 8750
DEFAULT_HOST = "127.0.0.1"


@dataclass
class ServerConfig:
    port: int = DEFAULT_PORT
    host: str = DEFAULT_HOST
    log_level: str = "info"
    static_dir: str | None = None
    session: SessionConfig = field(default_factory=SessionConfig)


def _adapter_spec(kind: str, raw: dict | None) -> AdapterSpec:
    raw = dict(raw or {})
    raw.pop("kind", None)
    if "fake_timeline" in raw and raw["fake_timeline"]:
        raw["fake_timeline"] = [tuple(entry) for entry in raw["fake_timeline"]]
    return AdapterSpec(kind=kind, **raw)


def _read_text(raw: dict, inline_key: str, path_key: str) -> str:
    if raw.get(inline_key):
        return str(raw[inline_key])
    if raw.get(path_key):
        return Path(raw[path_key]).read_text(encoding="utf-8").strip()
    return ""


def load_config(path: str | None = None, fake_backends: bool = False) -> ServerConfig:
    raw: dict = {}
    if path is not None:
        with open(path, encoding="utf-8") as fh:
            raw = yaml.safe_load(fh) or {}

    adapters_raw = raw.get("adapters", {})
    specs = {kind: _adapter_spec(kind, adapters_raw.get(kind)) for kind in ("asr", "chat", "tts", "emotion")}
    if fake_backends:
        for kind, spec in specs.items():
            if spec.impl != "fake":
                specs[kind] = _adapter_spec(kind, {"impl": "fake"})

    prompt_raw = raw.get("prompt", {})
    session = SessionConfig(
        asr=specs["asr"],
        chat=specs["chat"],
        tts=specs["tts"],
        emotion=specs["emotion"],
        vad=VadConfig(**raw.get("vad", {})),
        persona=_read_text(prompt_raw, "persona", "persona_path"),
        instruction=_read_text(prompt_raw, "instruction", "instruction_path"),
        template=load_template(prompt_raw.get("template_path")),
        max_prompt_chars=int(prompt_raw.get("max_chars", 6000)),
        emotion_window_ms=int(raw.get("emotion_window_ms", 3000)),
        seed=int(raw.get("seed", 0)),
        log_dir=raw.get("log_dir"),
    )
    return ServerConfig(
        port=int(raw.get("port", DEFAULT_PORT)),
        host=str(raw.get("host", DEFAULT_HOST)),
        log_level=str(raw.get("log_level", "info")),
        static_dir=raw.get("static_dir"),
        session=session,
    )
