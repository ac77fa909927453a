"""Deterministic fixed-delay fake backends.

Each fake sleeps its configured delay (mean +/- uniform jitter from the
seeded RNG it was constructed with) and produces scripted output, so tests
and the latency bench are reproducible down to the byte.
"""

from __future__ import annotations

import asyncio
import random
import re
import time

import numpy as np

from ..emotion import Emotion, EmotionLabel
from ..errors import InvalidInput
from ..transport.audio import AudioFrame, VideoFrame
from ..vad.types import SAMPLE_RATE, UtteranceSegment
from .base import AdapterResult, AdapterSpec

TTS_TONE_HZ = 220.0
TTS_AMPLITUDE = 0.4
TTS_MS_PER_WORD = 60
TTS_MIN_MS = 300
TTS_CHUNK_SAMPLES = 2048

_EMOTION_IN_PROMPT = re.compile(r"the user looks (happy|sad|angry|neutral)")


class _FakeBase:
    def __init__(self, spec: AdapterSpec, rng: random.Random | None = None):
        self.spec = spec
        self.rng = rng if rng is not None else random.Random(0)
        self._script_index = 0

    async def _sleep_delay(self) -> None:
        delay = self.spec.fake_delay_ms
        if self.spec.fake_jitter_ms:
            delay += self.rng.uniform(-self.spec.fake_jitter_ms, self.spec.fake_jitter_ms)
        if delay > 0:
            await asyncio.sleep(delay / 1000.0)

    def _next_script_line(self) -> str | None:
        if not self.spec.fake_script:
            return None
        line = self.spec.fake_script[self._script_index % len(self.spec.fake_script)]
        self._script_index += 1
        return line


class FakeAsrAdapter(_FakeBase):
    async def transcribe(self, segment: UtteranceSegment) -> AdapterResult:
        started = time.perf_counter()
        await self._sleep_delay()
        text = self._next_script_line()
        if text is None:
            duration_ms = round(segment.samples.size * 1000 / SAMPLE_RATE)
            text = f"utterance of {duration_ms} ms"
        return AdapterResult(text, (time.perf_counter() - started) * 1000.0)


class FakeChatAdapter(_FakeBase):
    async def complete(self, prompt: str) -> AdapterResult:
        if not prompt:
            raise InvalidInput("prompt must be non-empty")
        started = time.perf_counter()
        await self._sleep_delay()
        reply = None
        if self.spec.fake_echo_emotion:
            match = _EMOTION_IN_PROMPT.findall(prompt)
            if match:
                reply = f"I can tell the user looks {match[-1]}."
        if reply is None:
            reply = self._next_script_line() or "I see."
        return AdapterResult(reply, (time.perf_counter() - started) * 1000.0)


def synthesize_tone_frames(text: str) -> list[AudioFrame]:
    """Deterministic sine speech: 60 ms per word, floor 300 ms, 2048-sample
    frames at 16 kHz with relative timestamps (the pipeline re-stamps)."""
    words = len(text.split())
    duration_ms = max(TTS_MIN_MS, TTS_MS_PER_WORD * words)
    n = duration_ms * SAMPLE_RATE // 1000
    t = np.arange(n) / SAMPLE_RATE
    pcm = (TTS_AMPLITUDE * 32767 * np.sin(2 * np.pi * TTS_TONE_HZ * t)).astype(np.int16)
    frames = []
    for seq, start in enumerate(range(0, n, TTS_CHUNK_SAMPLES)):
        chunk = pcm[start : start + TTS_CHUNK_SAMPLES]
        frames.append(AudioFrame(
            samples=chunk,
            sample_rate_hz=SAMPLE_RATE,
            timestamp_ms=start * 1000 // SAMPLE_RATE,
            seq=seq,
        ))
    return frames


class FakeTtsAdapter(_FakeBase):
    async def synthesize(self, text: str) -> AdapterResult:
        if not text.strip():
            raise InvalidInput("text must be non-empty")
        started = time.perf_counter()
        await self._sleep_delay()
        return AdapterResult(synthesize_tone_frames(text), (time.perf_counter() - started) * 1000.0)


class FakeEmotionAdapter(_FakeBase):
    """Labels come from a scripted timeline of (valid_from_ms, label, conf)."""

    def __init__(self, spec: AdapterSpec, rng: random.Random | None = None):
        super().__init__(spec, rng)
        timeline = spec.fake_timeline or [(0.0, "neutral", 0.9)]
        self.timeline = sorted((float(t), Emotion(lab), float(conf)) for t, lab, conf in timeline)

    async def classify(self, frame: VideoFrame) -> AdapterResult:
        started = time.perf_counter()
        await self._sleep_delay()
        current = self.timeline[0]
        for entry in self.timeline:
            if entry[0] <= frame.timestamp_ms:
                current = entry
            else:
                break
        label = EmotionLabel(current[1], current[2], float(frame.timestamp_ms))
        return AdapterResult(label, (time.perf_counter() - started) * 1000.0)
