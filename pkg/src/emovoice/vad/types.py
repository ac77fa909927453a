"""Configuration and value types for the two-stage VAD pipeline."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

SAMPLE_RATE = 16000


@dataclass
class VadConfig:
    frame_ms: int = 30
    energy_floor_db: float = -60.0
    gate_margin_db: float = 9.0
    hangover_ms: int = 500
    preroll_ms: int = 300
    min_utterance_ms: int = 250
    max_utterance_ms: int = 15000
    verifier_threshold: float = 0.5
    band_low_hz: float = 300.0
    band_high_hz: float = 3400.0
    floor_time_constant_ms: float = 2000.0

    def __post_init__(self):
        if self.min_utterance_ms >= self.max_utterance_ms:
            raise ValueError("min_utterance_ms must be < max_utterance_ms")
        for name in ("frame_ms", "hangover_ms", "preroll_ms", "min_utterance_ms", "max_utterance_ms"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be > 0")
        if not 0.0 <= self.verifier_threshold <= 1.0:
            raise ValueError("verifier_threshold must be in [0, 1]")

    @property
    def frame_samples(self) -> int:
        return self.frame_ms * SAMPLE_RATE // 1000


@dataclass(frozen=True)
class FrameDecision:
    """Stage-1 output for one analysis frame."""

    frame_index: int
    is_speech: bool
    energy_db: float
    timestamp_ms: float


@dataclass
class UtteranceSegment:
    """One endpointed stretch of user speech at 16 kHz."""

    samples: np.ndarray  # int16
    start_ms: float
    end_ms: float
    verified: bool
    verifier_score: float

    @property
    def duration_ms(self) -> float:
        return self.end_ms - self.start_ms


class EndpointerState(Enum):
    IDLE = "idle"
    RISING = "rising"
    HANGOVER = "hangover"
