"""Per-session bounded media buffers.

One writer (the ingestion context) and any number of readers; every method
takes the buffer lock so operations linearize. Overflow policy is
drop-oldest with a monotonic counter of dropped items.
"""

from __future__ import annotations

import threading
from collections import deque

from ..errors import SessionClosed
from .audio import AudioFrame, VideoFrame

AUDIO_CAPACITY_MS = 30_000
VIDEO_CAPACITY_FRAMES = 64


class SessionBuffers:
    def __init__(self, audio_capacity_ms: int = AUDIO_CAPACITY_MS,
                 video_capacity: int = VIDEO_CAPACITY_FRAMES):
        self.audio_capacity_ms = audio_capacity_ms
        self.video_capacity = video_capacity
        self._audio: deque[AudioFrame] = deque()
        self._video: deque[VideoFrame] = deque()
        self._audio_ms = 0.0
        self._lock = threading.Lock()
        self._closed = False
        self.audio_dropped = 0
        self.video_dropped = 0

    def push_audio(self, frame: AudioFrame) -> bool:
        """Append a frame; evict oldest entries past capacity.

        Returns True when an eviction occurred.
        """
        with self._lock:
            self._check_open()
            self._audio.append(frame)
            self._audio_ms += frame.duration_ms
            evicted = False
            while self._audio_ms > self.audio_capacity_ms and len(self._audio) > 1:
                old = self._audio.popleft()
                self._audio_ms -= old.duration_ms
                self.audio_dropped += 1
                evicted = True
            return evicted

    def push_video(self, frame: VideoFrame) -> bool:
        with self._lock:
            self._check_open()
            self._video.append(frame)
            evicted = False
            while len(self._video) > self.video_capacity:
                self._video.popleft()
                self.video_dropped += 1
                evicted = True
            return evicted

    def pop_audio(self) -> AudioFrame | None:
        """Oldest buffered audio frame, or None when empty."""
        with self._lock:
            if not self._audio:
                return None
            frame = self._audio.popleft()
            self._audio_ms -= frame.duration_ms
            return frame

    def take_latest_video(self) -> VideoFrame | None:
        """Newest buffered video frame; clears everything older (newest-wins)."""
        with self._lock:
            if not self._video:
                return None
            frame = self._video.pop()
            self.video_dropped += len(self._video)
            self._video.clear()
            return frame

    @property
    def buffered_audio_ms(self) -> float:
        with self._lock:
            return self._audio_ms

    @property
    def buffered_video_frames(self) -> int:
        with self._lock:
            return len(self._video)

    def close(self) -> None:
        with self._lock:
            self._closed = True

    def _check_open(self) -> None:
        if self._closed:
            raise SessionClosed("buffers are closed")
