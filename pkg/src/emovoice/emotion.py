"""Facial-emotion tracking: per-frame classification into a sliding window
and a majority read-out used to condition the prompt.

The tracker samples newest-wins: frames arriving while a classification is
in flight are dropped and counted, since emotion is a slowly varying signal
and a stale frame is worthless by the time the backend answers.
"""

from __future__ import annotations

import bisect
import threading
from collections import deque
from dataclasses import dataclass
from enum import Enum
from typing import Awaitable, Callable

from .errors import AdapterError, AdapterUnavailable, NoFaceDetected, UndecodableFrame
from .transport.audio import JPEG_SOI, VideoFrame

DEFAULT_WINDOW_MS = 3000


class Emotion(str, Enum):
    HAPPY = "happy"
    SAD = "sad"
    ANGRY = "angry"
    NEUTRAL = "neutral"


@dataclass(frozen=True)
class EmotionLabel:
    label: Emotion
    confidence: float
    timestamp_ms: float

    def __post_init__(self):
        if not isinstance(self.label, Emotion):
            object.__setattr__(self, "label", Emotion(self.label))


def emotion_to_text(label: Emotion | EmotionLabel) -> str:
    """Exact prompt wording for an emotion, e.g. "the user looks happy"."""
    value = label.label.value if isinstance(label, EmotionLabel) else Emotion(label).value
    return f"the user looks {value}"


class EmotionWindow:
    """Time-bounded label window; one writer, linearizable concurrent reads."""

    def __init__(self, window_ms: int = DEFAULT_WINDOW_MS):
        self.window_ms = window_ms
        self._entries: deque[EmotionLabel] = deque()
        self._lock = threading.Lock()

    def add(self, label: EmotionLabel) -> None:
        with self._lock:
            if self._entries and label.timestamp_ms < self._entries[-1].timestamp_ms:
                # keep ordering for late arrivals
                items = list(self._entries)
                keys = [e.timestamp_ms for e in items]
                items.insert(bisect.bisect_right(keys, label.timestamp_ms), label)
                self._entries = deque(items)
            else:
                self._entries.append(label)
            newest = self._entries[-1].timestamp_ms
            while self._entries and self._entries[0].timestamp_ms < newest - self.window_ms:
                self._entries.popleft()

    def snapshot(self) -> list[EmotionLabel]:
        with self._lock:
            return list(self._entries)

    def __len__(self) -> int:
        with self._lock:
            return len(self._entries)


def current_emotion(window: EmotionWindow, now_ms: float | None = None) -> EmotionLabel:
    """Majority label over window entries; ties go to the most recent tied
    label; an empty window reads as neutral with zero confidence."""
    entries = window.snapshot()
    if now_ms is not None:
        entries = [e for e in entries if now_ms - window.window_ms <= e.timestamp_ms <= now_ms]
    else:
        now_ms = entries[-1].timestamp_ms if entries else 0.0
    if not entries:
        return EmotionLabel(Emotion.NEUTRAL, 0.0, now_ms)
    counts: dict[Emotion, int] = {}
    latest: dict[Emotion, float] = {}
    confidence_sums: dict[Emotion, float] = {}
    for entry in entries:
        counts[entry.label] = counts.get(entry.label, 0) + 1
        latest[entry.label] = entry.timestamp_ms
        confidence_sums[entry.label] = confidence_sums.get(entry.label, 0.0) + entry.confidence
    best = max(counts, key=lambda lab: (counts[lab], latest[lab]))
    return EmotionLabel(best, confidence_sums[best] / counts[best], now_ms)


class EmotionTracker:
    """Dispatches frames to the emotion adapter and maintains the window."""

    def __init__(self, adapter, window_ms: int = DEFAULT_WINDOW_MS,
                 on_update: Callable[[EmotionLabel], Awaitable[None] | None] | None = None):
        self.adapter = adapter
        self.window = EmotionWindow(window_ms)
        self.on_update = on_update
        self.dropped_in_flight = 0
        self.adapter_failures = 0
        self._in_flight = False

    async def ingest_video_frame(self, frame: VideoFrame) -> EmotionLabel | None:
        if not frame.jpeg_bytes.startswith(JPEG_SOI):
            raise UndecodableFrame("frame does not start with the JPEG SOI marker")
        if self._in_flight:
            self.dropped_in_flight += 1
            return None
        self._in_flight = True
        try:
            result = await self.adapter.classify(frame)
        except NoFaceDetected:
            return None
        except AdapterError as exc:
            self.adapter_failures += 1
            raise AdapterUnavailable(str(exc)) from exc
        finally:
            self._in_flight = False
        label: EmotionLabel = result.value
        self.window.add(label)
        if self.on_update is not None:
            maybe = self.on_update(label)
            if maybe is not None:
                await maybe
        return label

    def current(self, now_ms: float | None = None) -> EmotionLabel:
        return current_emotion(self.window, now_ms)
