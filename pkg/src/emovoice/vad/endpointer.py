"""Endpointing state machine: frame decisions in, utterance segments out.

Automaton (see types.EndpointerState):

    Idle --speech--> Rising --silence--> Hangover --speech--> Rising
                       |                    |
                       | max length         | hangover_ms of silence
                       v                    v
                  Idle (emit)          Idle (emit)

On Idle->Rising the segment is seeded with up to preroll_ms of buffered
audio so the onset is not clipped. Silence collected in Hangover is joined
to the segment only if speech resumes; an emitted segment always ends at
the last speech frame. Candidates whose speech span (onset to last speech
frame, preroll excluded) is shorter than min_utterance_ms, or whose
verifier score falls below verifier_threshold, are counted and discarded,
never surfaced. The max_utterance_ms bound applies to the whole segment
including preroll, and a segment that reaches it is emitted truncated to
exactly that length.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass

import numpy as np

from ..errors import OutOfOrderFrame
from .gate import Stage1Gate
from .types import SAMPLE_RATE, EndpointerState, FrameDecision, UtteranceSegment, VadConfig
from .verifier import SegmentVerifier, SpectralVerifier


@dataclass
class EndpointerCounters:
    emitted: int = 0
    rejected_short: int = 0
    rejected_verifier: int = 0
    suppressed_frames: int = 0


@dataclass
class _TimedFrame:
    timestamp_ms: float
    samples: np.ndarray

    @property
    def duration_ms(self) -> float:
        return len(self.samples) * 1000.0 / SAMPLE_RATE

    @property
    def end_ms(self) -> float:
        return self.timestamp_ms + self.duration_ms


class Endpointer:
    """One instance per session; step() is not safe for concurrent calls."""

    def __init__(self, config: VadConfig, verifier: SegmentVerifier | None = None):
        self.config = config
        self.verifier = verifier if verifier is not None else SpectralVerifier(config)
        self.state = EndpointerState.IDLE
        self.counters = EndpointerCounters()
        self.suppressed = False
        self._preroll: deque[_TimedFrame] = deque()
        self._segment: list[_TimedFrame] = []
        self._tentative: list[_TimedFrame] = []
        self._start_ms = 0.0
        self._onset_ms = 0.0
        self._last_speech_end_ms = 0.0
        self._hangover_accum_ms = 0.0
        self._last_ts: float | None = None

    def step(self, decision: FrameDecision, samples: np.ndarray) -> UtteranceSegment | None:
        """Advance the machine by one frame; returns a segment when one closes."""
        if self._last_ts is not None and decision.timestamp_ms <= self._last_ts:
            raise OutOfOrderFrame(
                f"frame at {decision.timestamp_ms} ms after frame at {self._last_ts} ms"
            )
        self._last_ts = decision.timestamp_ms
        frame = _TimedFrame(decision.timestamp_ms, np.asarray(samples, dtype=np.int16))
        is_speech = decision.is_speech

        if self.state is EndpointerState.IDLE:
            if is_speech and not self.suppressed:
                self._open_segment(frame)
                return self._emit_if_max_reached()
            if is_speech and self.suppressed:
                self.counters.suppressed_frames += 1
            self._push_preroll(frame)
            return None

        if self.state is EndpointerState.RISING:
            if is_speech:
                self._append_speech(frame)
                return self._emit_if_max_reached()
            self.state = EndpointerState.HANGOVER
            self._tentative = [frame]
            self._hangover_accum_ms = frame.duration_ms
            return self._close_if_hangover_elapsed()

        # HANGOVER
        if is_speech:
            self._segment.extend(self._tentative)
            self._tentative = []
            self._hangover_accum_ms = 0.0
            self.state = EndpointerState.RISING
            self._append_speech(frame)
            return self._emit_if_max_reached()
        self._tentative.append(frame)
        self._hangover_accum_ms += frame.duration_ms
        return self._close_if_hangover_elapsed()

    def flush(self) -> UtteranceSegment | None:
        """Close any in-flight segment at end of stream."""
        if self.state is EndpointerState.IDLE:
            return None
        segment = self._finalize(self._segment, self._start_ms, self._last_speech_end_ms)
        self._reset_to_idle(preroll_seed=self._tentative)
        return segment

    # -- internals ----------------------------------------------------------

    def _open_segment(self, frame: _TimedFrame) -> None:
        self.state = EndpointerState.RISING
        self._segment = list(self._preroll)
        self._preroll.clear()
        self._start_ms = self._segment[0].timestamp_ms if self._segment else frame.timestamp_ms
        self._onset_ms = frame.timestamp_ms
        self._segment.append(frame)
        self._last_speech_end_ms = frame.end_ms

    def _append_speech(self, frame: _TimedFrame) -> None:
        self._segment.append(frame)
        self._last_speech_end_ms = frame.end_ms

    def _emit_if_max_reached(self) -> UtteranceSegment | None:
        if self._last_speech_end_ms - self._start_ms < self.config.max_utterance_ms:
            return None
        # truncate to exactly max_utterance_ms; the remainder of the
        # straddling frame is dropped so segments cannot overlap
        end_ms = self._start_ms + self.config.max_utterance_ms
        keep = int(round(self.config.max_utterance_ms * SAMPLE_RATE / 1000.0))
        samples = np.concatenate([f.samples for f in self._segment])[:keep]
        segment = self._finalize_samples(samples, self._start_ms, end_ms)
        self._reset_to_idle(preroll_seed=[])
        return segment

    def _close_if_hangover_elapsed(self) -> UtteranceSegment | None:
        if self._hangover_accum_ms < self.config.hangover_ms:
            return None
        segment = self._finalize(self._segment, self._start_ms, self._last_speech_end_ms)
        self._reset_to_idle(preroll_seed=self._tentative)
        return segment

    def _finalize(self, frames: list[_TimedFrame], start_ms: float, end_ms: float) -> UtteranceSegment | None:
        samples = np.concatenate([f.samples for f in frames]) if frames else np.zeros(0, np.int16)
        return self._finalize_samples(samples, start_ms, end_ms)

    def _finalize_samples(self, samples: np.ndarray, start_ms: float, end_ms: float) -> UtteranceSegment | None:
        # min bound is on the speech span; the preroll must not rescue a blip
        if end_ms - self._onset_ms < self.config.min_utterance_ms:
            self.counters.rejected_short += 1
            return None
        score = self.verifier.score(samples)
        if score < self.config.verifier_threshold:
            self.counters.rejected_verifier += 1
            return None
        self.counters.emitted += 1
        return UtteranceSegment(
            samples=samples,
            start_ms=start_ms,
            end_ms=end_ms,
            verified=True,
            verifier_score=score,
        )

    def _reset_to_idle(self, preroll_seed: list[_TimedFrame]) -> None:
        self.state = EndpointerState.IDLE
        self._segment = []
        self._tentative = []
        self._hangover_accum_ms = 0.0
        self._preroll = deque(preroll_seed)
        self._trim_preroll()

    def _push_preroll(self, frame: _TimedFrame) -> None:
        self._preroll.append(frame)
        self._trim_preroll()

    def _trim_preroll(self) -> None:
        total = sum(f.duration_ms for f in self._preroll)
        while self._preroll and total - self._preroll[0].duration_ms >= self.config.preroll_ms:
            total -= self._preroll.popleft().duration_ms


class StreamEndpointer:
    """Drives Stage1Gate + Endpointer from arbitrary-sized 16 kHz frames.

    Incoming audio is treated as one contiguous sample clock anchored at the
    first frame's timestamp; analysis windows are carved at frame_ms
    boundaries regardless of how the transport chunked the stream.
    """

    def __init__(self, config: VadConfig, verifier: SegmentVerifier | None = None):
        self.config = config
        self.gate = Stage1Gate(config)
        self.endpointer = Endpointer(config, verifier)
        self._residual = np.zeros(0, dtype=np.int16)
        self._epoch_ms: float | None = None
        self._consumed_samples = 0
        self._frame_index = 0

    def set_suppressed(self, flag: bool) -> None:
        self.endpointer.suppressed = flag

    @property
    def suppressed(self) -> bool:
        return self.endpointer.suppressed

    def push(self, samples: np.ndarray, timestamp_ms: float | None = None) -> list[UtteranceSegment]:
        """Feed 16 kHz PCM; returns any segments that closed."""
        if self._epoch_ms is None:
            self._epoch_ms = float(timestamp_ms) if timestamp_ms is not None else 0.0
        self._residual = np.concatenate([self._residual, np.asarray(samples, dtype=np.int16)])
        frame_len = self.config.frame_samples
        out: list[UtteranceSegment] = []
        while self._residual.size >= frame_len:
            window = self._residual[:frame_len]
            self._residual = self._residual[frame_len:]
            ts = self._epoch_ms + self._consumed_samples * 1000.0 / SAMPLE_RATE
            decision = self.gate.classify(window, self._frame_index, ts)
            segment = self.endpointer.step(decision, window)
            if segment is not None:
                out.append(segment)
            self._consumed_samples += frame_len
            self._frame_index += 1
        return out

    def flush(self) -> UtteranceSegment | None:
        return self.endpointer.flush()
