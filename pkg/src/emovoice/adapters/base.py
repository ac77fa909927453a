"""Backend seams: one spec/result pair shared by all four adapter kinds.

Every neural model sits behind one of these seams so the whole pipeline
runs with deterministic fakes (tests, benchmarks) or real services over a
neutral JSON-over-HTTP contract (see http.py), interchangeably.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

VALID_KINDS = ("asr", "chat", "tts", "emotion")
VALID_IMPLS = ("fake", "http")


@dataclass
class AdapterSpec:
    kind: str
    impl: str = "fake"
    fake_delay_ms: float = 0.0
    fake_jitter_ms: float = 0.0
    fake_script: list[str] = field(default_factory=list)
    fake_echo_emotion: bool = False
    # emotion fake: list of [valid_from_ms, label, confidence]
    fake_timeline: list[tuple[float, str, float]] = field(default_factory=list)
    http_endpoint: str = ""
    timeout_ms: int = 10000
    auth_token: str = ""

    def __post_init__(self):
        if self.kind not in VALID_KINDS:
            raise ValueError(f"kind must be one of {VALID_KINDS}")
        if self.impl not in VALID_IMPLS:
            raise ValueError(f"impl must be one of {VALID_IMPLS}")
        if self.fake_delay_ms < 0:
            raise ValueError("fake_delay_ms must be >= 0")
        if self.fake_jitter_ms > self.fake_delay_ms:
            raise ValueError("fake_jitter_ms must be <= fake_delay_ms")
        if self.timeout_ms <= 0:
            raise ValueError("timeout_ms must be > 0")
        if self.impl == "http" and not self.http_endpoint:
            raise ValueError("http impl requires http_endpoint")


@dataclass
class AdapterResult:
    value: Any
    backend_latency_ms: float

    def __post_init__(self):
        if self.backend_latency_ms < 0:
            raise ValueError("backend_latency_ms must be >= 0")
