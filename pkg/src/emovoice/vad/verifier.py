"""Stage 2: whole-segment verifier.

The default verifier is deterministic and purely spectral: the mean over
the segment's analysis frames of (speech-band energy fraction x energy-gate
indicator), gated against the *static* configured floor so the score is a
pure function of the samples. The Protocol seam lets a model-based verifier
(local or remote) replace it without touching the endpointer.
"""

from __future__ import annotations

from typing import Protocol

import numpy as np

from .gate import frame_energy_db, speech_band_fraction
from .types import VadConfig


class SegmentVerifier(Protocol):
    def score(self, samples: np.ndarray) -> float:
        """Speech likelihood of a whole candidate segment, in [0, 1]."""
        ...


class SpectralVerifier:
    def __init__(self, config: VadConfig):
        self.config = config

    def score(self, samples: np.ndarray) -> float:
        frame_len = self.config.frame_samples
        n_frames = len(samples) // frame_len
        if n_frames == 0:
            return 0.0
        gate_db = self.config.energy_floor_db + self.config.gate_margin_db
        total = 0.0
        for i in range(n_frames):
            frame = samples[i * frame_len : (i + 1) * frame_len]
            if frame_energy_db(frame) > gate_db:
                total += speech_band_fraction(frame, self.config)
        return total / n_frames
