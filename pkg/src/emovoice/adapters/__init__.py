"""Pluggable ASR / chat / TTS / emotion backends: fakes and HTTP clients."""

from __future__ import annotations

import random

from .base import AdapterResult, AdapterSpec
from .fakes import (
    FakeAsrAdapter,
    FakeChatAdapter,
    FakeEmotionAdapter,
    FakeTtsAdapter,
    synthesize_tone_frames,
)
from .http import HttpAsrAdapter, HttpChatAdapter, HttpEmotionAdapter, HttpTtsAdapter
from .presets import ASR_PRESETS, CHAT_PRESETS, CellTarget, delays_for_cell, load_latency_grid

_FAKES = {
    "asr": FakeAsrAdapter,
    "chat": FakeChatAdapter,
    "tts": FakeTtsAdapter,
    "emotion": FakeEmotionAdapter,
}
_HTTP = {
    "asr": HttpAsrAdapter,
    "chat": HttpChatAdapter,
    "tts": HttpTtsAdapter,
    "emotion": HttpEmotionAdapter,
}


def build_adapter(spec: AdapterSpec, rng: random.Random | None = None, transport=None):
    """Instantiate the adapter for a spec (fakes draw jitter from the given RNG)."""
    if spec.impl == "fake":
        return _FAKES[spec.kind](spec, rng)
    return _HTTP[spec.kind](spec, transport=transport)


__all__ = [
    "AdapterSpec",
    "AdapterResult",
    "build_adapter",
    "FakeAsrAdapter",
    "FakeChatAdapter",
    "FakeTtsAdapter",
    "FakeEmotionAdapter",
    "HttpAsrAdapter",
    "HttpChatAdapter",
    "HttpTtsAdapter",
    "HttpEmotionAdapter",
    "synthesize_tone_frames",
    "CHAT_PRESETS",
    "ASR_PRESETS",
    "CellTarget",
    "load_latency_grid",
    "delays_for_cell",
]
