"""Stage 1: cheap, recall-oriented frame gate.

A frame is speech when its energy clears an adaptive noise floor by the
configured margin AND most of its energy sits in the speech band
(300-3400 Hz). The floor tracks non-speech frames exponentially so speech
can never drag it upward.
"""

from __future__ import annotations

import math

import numpy as np

from .. import _kernels
from .types import SAMPLE_RATE, FrameDecision, VadConfig

ENERGY_DB_FLOOR = -96.0  # clamp for silent frames (~16-bit noise floor)


def frame_energy_db(samples: np.ndarray) -> float:
    """Mean-square energy of a PCM16 frame in dBFS, clamped at -96."""
    x = np.asarray(samples, dtype=np.float64) / 32768.0
    ms = float(np.mean(x * x))
    if ms <= 0.0:
        return ENERGY_DB_FLOOR
    return max(ENERGY_DB_FLOOR, 10.0 * math.log10(ms))


def speech_band_fraction(samples: np.ndarray, config: VadConfig) -> float:
    """Fraction of frame energy inside the speech band, in [0, 1]."""
    x = np.asarray(samples, dtype=np.float64) / 32768.0
    n = x.size
    k_lo = math.ceil(config.band_low_hz * n / SAMPLE_RATE)
    k_hi = math.floor(config.band_high_hz * n / SAMPLE_RATE)
    k_lo = max(k_lo, 1)  # exclude DC
    k_hi = min(k_hi, n // 2 - 1)  # exclude Nyquist
    total, band = _kernels.band_power_pair(np.ascontiguousarray(x), k_lo, k_hi)
    if total <= 0.0:
        return 0.0
    return min(band / total, 1.0)


class Stage1Gate:
    """Adaptive-floor energy gate; one instance per audio stream."""

    def __init__(self, config: VadConfig):
        self.config = config
        self.floor_db = config.energy_floor_db
        # one-pole tracking coefficient for the configured time constant
        self._alpha = math.exp(-config.frame_ms / config.floor_time_constant_ms)

    def classify(self, samples: np.ndarray, frame_index: int, timestamp_ms: float) -> FrameDecision:
        """Classify one analysis frame (exactly frame_ms of 16 kHz PCM)."""
        if len(samples) != self.config.frame_samples:
            raise ValueError(
                f"expected {self.config.frame_samples} samples per frame, got {len(samples)}"
            )
        energy = frame_energy_db(samples)
        is_speech = energy > self.floor_db + self.config.gate_margin_db
        if is_speech:
            is_speech = speech_band_fraction(samples, self.config) > 0.5
        if not is_speech:
            self.floor_db = self._alpha * self.floor_db + (1.0 - self._alpha) * energy
        return FrameDecision(
            frame_index=frame_index,
            is_speech=is_speech,
            energy_db=energy,
            timestamp_ms=timestamp_ms,
        )
