"""Bundled synthetic VAD corpus: tones + noise + silence.

Speech stands in as speech-band tone bursts; distractors are short in-band
blips (below the minimum utterance length), broadband noise bursts and
high tones outside the speech band. Deterministic for a given seed so the
evaluation numbers are reproducible.
"""

from __future__ import annotations

import numpy as np

from .types import SAMPLE_RATE

Interval = tuple[float, float]

SPEECH_TONES_HZ = (500.0, 1000.0, 2000.0)
SPEECH_AMP = 0.25  # ~ -12 dBFS
BLIP_AMP = 0.2
NOISE_AMP = 0.02
BACKGROUND_AMP = 3e-4  # ~ -70 dBFS


def _tone(freq_hz: float, duration_ms: float, amp: float, rng: np.random.Generator) -> np.ndarray:
    n = int(duration_ms * SAMPLE_RATE / 1000)
    t = np.arange(n) / SAMPLE_RATE
    phase = rng.uniform(0, 2 * np.pi)
    return amp * np.sin(2 * np.pi * freq_hz * t + phase)


def build_clip(rng: np.random.Generator) -> tuple[np.ndarray, list[Interval]]:
    """One ~12 s clip: 3 utterances, one with an intra-utterance pause,
    plus 7 sub-minimum blips, a noise burst and an out-of-band tone."""
    duration_ms = 12_000
    n = duration_ms * SAMPLE_RATE // 1000
    audio = rng.normal(0.0, BACKGROUND_AMP, n)
    references: list[Interval] = []

    def place(start_ms: float, chunk: np.ndarray) -> None:
        i = int(start_ms * SAMPLE_RATE / 1000)
        audio[i : i + len(chunk)] += chunk

    # utterance 1: plain burst
    u1_start, u1_len = 900.0, float(rng.integers(700, 1000))
    place(u1_start, _tone(SPEECH_TONES_HZ[0], u1_len, SPEECH_AMP, rng))
    references.append((u1_start, u1_start + u1_len))

    # utterance 2: two bursts separated by a sub-hangover pause, one reference
    u2_start, part = 4200.0, 700.0
    pause = float(rng.integers(200, 380))
    place(u2_start, _tone(SPEECH_TONES_HZ[1], part, SPEECH_AMP, rng))
    place(u2_start + part + pause, _tone(SPEECH_TONES_HZ[1], part, SPEECH_AMP, rng))
    references.append((u2_start, u2_start + part + pause + part))

    # utterance 3: plain burst
    u3_start, u3_len = 8600.0, float(rng.integers(900, 1600))
    place(u3_start, _tone(SPEECH_TONES_HZ[2], u3_len, SPEECH_AMP, rng))
    references.append((u3_start, u3_start + u3_len))

    # distractors: in-band blips too short to be utterances; spaced further
    # apart than the hangover so they can never bridge into one another
    for start in (60.0, 2450.0, 3250.0, 6550.0, 7350.0, 10900.0, 11650.0):
        blip_len = float(rng.integers(150, 220))
        place(start, _tone(float(rng.choice(SPEECH_TONES_HZ)), blip_len, BLIP_AMP, rng))

    # broadband noise burst (band fraction < 0.5 -> stage 1 ignores it)
    noise_start, noise_len = 2000.0, 400
    i = int(noise_start * SAMPLE_RATE / 1000)
    audio[i : i + noise_len * SAMPLE_RATE // 1000] += rng.normal(0.0, NOISE_AMP, noise_len * SAMPLE_RATE // 1000)

    # out-of-band tone (above 3400 Hz)
    place(10_400.0, _tone(6000.0, 500.0, SPEECH_AMP, rng))

    pcm = np.clip(np.rint(audio * 32767), -32768, 32767).astype(np.int16)
    return pcm, references


def build_corpus(seed: int = 7, n_clips: int = 6) -> list[tuple[np.ndarray, list[Interval]]]:
    rng = np.random.default_rng(seed)
    return [build_clip(rng) for _ in range(n_clips)]
