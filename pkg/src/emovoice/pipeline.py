"""Per-session turn orchestration.

One Session ties the stream together: transport frames come in through
feed_audio/feed_video, three asyncio tasks (audio consumer, video consumer,
turn worker) drive endpointing, emotion tracking and the
recognize -> generate -> synthesize -> speak cycle, and results leave
through the injected event/audio sinks. The turn pipeline is strictly
serialized per session; at most one utterance waits in the pending slot
(newer utterances replace older ones, counted).

Latency accounting follows the utterance-to-response definition: the clock
starts when the endpointed segment enters the turn pipeline (the server's
observable "user finished speaking") and response_start is stamped when the
first server-audio chunk is enqueued.
"""

from __future__ import annotations

import asyncio
import json
import logging
import random
import statistics
import time
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path
from typing import Awaitable, Callable

from .adapters import AdapterSpec, build_adapter
from .dialogue import (
    DEFAULT_TEMPLATE,
    DialogHistory,
    DialogTurn,
    PromptBudget,
    PromptDocument,
    Speaker,
    load_default_instruction,
    load_default_persona,
    render_prompt,
)
from .emotion import EmotionTracker
from .errors import AdapterUnavailable, EmovoiceError, UndecodableFrame
from .transport import AudioFrame, SessionBuffers, VideoFrame, resample_to_16k
from .vad import StreamEndpointer, UtteranceSegment, VadConfig

logger = logging.getLogger(__name__)

ACCEPTABLE_MS = 1000.0
NOTICEABLE_MS = 2000.0

EventSink = Callable[[dict], Awaitable[None]]
AudioSink = Callable[[AudioFrame], Awaitable[None]]


class TurnState(Enum):
    LISTENING = "listening"
    RECOGNIZING = "recognizing"
    GENERATING = "generating"
    SYNTHESIZING = "synthesizing"
    SPEAKING = "speaking"


def acceptability(total_ms: float) -> str:
    if total_ms <= ACCEPTABLE_MS:
        return "acceptable"
    if total_ms > NOTICEABLE_MS:
        return "noticeable"
    return "tolerable"


@dataclass(frozen=True)
class LatencyRecord:
    turn_id: int
    speech_end_ms: float
    asr_ms: float
    chat_ms: float
    tts_first_chunk_ms: float
    response_start_ms: float
    total_ms: float
    acceptability: str

    def __post_init__(self):
        if min(self.asr_ms, self.chat_ms, self.tts_first_chunk_ms) < 0:
            raise ValueError("stage times must be >= 0")
        if self.total_ms < self.asr_ms:
            raise ValueError("total_ms must cover at least the ASR stage")

    def as_dict(self) -> dict:
        return {
            "turn_id": self.turn_id,
            "speech_end_ms": self.speech_end_ms,
            "asr_ms": self.asr_ms,
            "chat_ms": self.chat_ms,
            "tts_first_chunk_ms": self.tts_first_chunk_ms,
            "response_start_ms": self.response_start_ms,
            "total_ms": self.total_ms,
            "acceptability": self.acceptability,
        }


def aggregate_metrics(records: list[LatencyRecord]) -> dict:
    """Records plus mean/sample-std per stage; aggregates absent when empty."""
    payload: dict = {"records": [r.as_dict() for r in records]}
    if not records:
        return payload
    aggregates = {}
    for key in ("asr_ms", "chat_ms", "tts_first_chunk_ms", "total_ms"):
        values = [getattr(r, key) for r in records]
        aggregates[key] = {
            "mean": statistics.fmean(values),
            "std": statistics.stdev(values) if len(values) >= 2 else None,
        }
    payload["aggregates"] = aggregates
    return payload


@dataclass
class SessionConfig:
    asr: AdapterSpec = field(default_factory=lambda: AdapterSpec(kind="asr"))
    chat: AdapterSpec = field(default_factory=lambda: AdapterSpec(kind="chat"))
    tts: AdapterSpec = field(default_factory=lambda: AdapterSpec(kind="tts"))
    emotion: AdapterSpec = field(default_factory=lambda: AdapterSpec(kind="emotion"))
    vad: VadConfig = field(default_factory=VadConfig)
    persona: str = ""
    instruction: str = ""
    template: str = DEFAULT_TEMPLATE
    max_prompt_chars: int = 6000
    emotion_window_ms: int = 3000
    seed: int = 0
    log_dir: str | None = None

    def __post_init__(self):
        if not self.persona:
            self.persona = load_default_persona()
        if not self.instruction:
            self.instruction = load_default_instruction()

    def all_fake(self) -> bool:
        return all(spec.impl == "fake" for spec in (self.asr, self.chat, self.tts, self.emotion))


def _now_ms() -> float:
    return time.perf_counter() * 1000.0


class Session:
    """One user session; see module docstring for the task layout."""

    def __init__(self, config: SessionConfig, session_id: bytes,
                 send_event: EventSink, send_audio: AudioSink):
        self.config = config
        self.session_id = session_id
        self._send_event = send_event
        self._send_audio = send_audio
        rng = random.Random(config.seed)
        self.asr = build_adapter(config.asr, rng)
        self.chat = build_adapter(config.chat, rng)
        self.tts = build_adapter(config.tts, rng)
        self.tracker = EmotionTracker(
            build_adapter(config.emotion, rng),
            window_ms=config.emotion_window_ms,
            on_update=self._on_emotion_update,
        )
        self.buffers = SessionBuffers()
        self.endpoint = StreamEndpointer(config.vad)
        self.history = DialogHistory()
        self.state = TurnState.LISTENING
        self.records: list[LatencyRecord] = []
        self.dropped_pending = 0
        self._pending: UtteranceSegment | None = None
        self._audio_ready = asyncio.Event()
        self._video_ready = asyncio.Event()
        self._turn_ready = asyncio.Event()
        self._turn_complete = asyncio.Event()
        self._tasks: list[asyncio.Task] = []
        self._closed = False
        self._log_path: Path | None = None
        if config.log_dir:
            Path(config.log_dir).mkdir(parents=True, exist_ok=True)
            self._log_path = Path(config.log_dir) / f"session-{session_id.hex()}.jsonl"

    # -- lifecycle -----------------------------------------------------------

    async def start(self) -> None:
        self._tasks = [
            asyncio.create_task(self._audio_loop(), name="audio-consumer"),
            asyncio.create_task(self._video_loop(), name="video-consumer"),
            asyncio.create_task(self._turn_loop(), name="turn-worker"),
        ]

    async def close(self) -> None:
        self._closed = True
        self.buffers.close()
        for task in self._tasks:
            task.cancel()
        await asyncio.gather(*self._tasks, return_exceptions=True)
        self._tasks = []

    # -- ingestion (called by transport or bench) ------------------------------

    def feed_audio(self, frame: AudioFrame) -> None:
        self.buffers.push_audio(frame)
        self._audio_ready.set()

    def feed_video(self, frame: VideoFrame) -> None:
        self.buffers.push_video(frame)
        self._video_ready.set()

    # -- control surface -------------------------------------------------------

    async def edit_transcript(self, turn_id: int, new_text: str) -> None:
        """Apply a user transcript correction and re-echo the turn."""
        turn = self.history.edit_turn(turn_id, new_text)
        await self._emit({"type": "turn", "turn_id": turn.turn_id,
                          "speaker": turn.speaker.value, "text": turn.text})

    def metrics_payload(self) -> dict:
        return aggregate_metrics(self.records)

    def history_payload(self) -> dict:
        return {
            "turns": [
                {"turn_id": t.turn_id, "speaker": t.speaker.value, "text": t.text}
                for t in self.history.turns()
            ]
        }

    @property
    def suppressing(self) -> bool:
        return self.endpoint.suppressed

    async def wait_turn_complete(self, timeout_s: float = 60.0) -> None:
        await asyncio.wait_for(self._turn_complete.wait(), timeout_s)
        self._turn_complete.clear()

    # -- consumers --------------------------------------------------------------

    async def _audio_loop(self) -> None:
        while not self._closed:
            await self._audio_ready.wait()
            self._audio_ready.clear()
            while True:
                frame = self.buffers.pop_audio()
                if frame is None:
                    break
                normalized = resample_to_16k(frame)
                for segment in self.endpoint.push(normalized.samples, frame.timestamp_ms):
                    self._enqueue_segment(segment)
                    # yield so the turn worker can claim the pending slot
                    # before a faster-than-real-time feed emits the next one
                    await asyncio.sleep(0)

    def _enqueue_segment(self, segment: UtteranceSegment) -> None:
        if self._pending is not None:
            self.dropped_pending += 1  # queue depth 1: newest wins
        self._pending = segment
        self._turn_ready.set()

    async def _video_loop(self) -> None:
        while not self._closed:
            await self._video_ready.wait()
            self._video_ready.clear()
            frame = self.buffers.take_latest_video()
            if frame is None:
                continue
            try:
                await self.tracker.ingest_video_frame(frame)
            except (AdapterUnavailable, UndecodableFrame) as exc:
                logger.warning("emotion classification failed: %s", exc)

    async def _turn_loop(self) -> None:
        while not self._closed:
            await self._turn_ready.wait()
            segment = self._pending
            self._pending = None
            self._turn_ready.clear()
            if segment is None:
                continue
            await self.on_utterance(segment)
            if self._pending is not None:
                self._turn_ready.set()

    # -- the turn pipeline --------------------------------------------------------

    async def on_utterance(self, segment: UtteranceSegment) -> None:
        speech_end = _now_ms()
        stage = "asr"
        try:
            self.state = TurnState.RECOGNIZING
            mark = _now_ms()
            asr_result = await self.asr.transcribe(segment)
            asr_ms = _now_ms() - mark
            user_text = asr_result.value

            emotion = self.tracker.current()
            user_turn = DialogTurn(Speaker.USER, user_text, self.history.next_turn_id,
                                   _now_ms(), emotion)
            self.history.append_turn(user_turn)
            await self._emit({"type": "turn", "turn_id": user_turn.turn_id,
                              "speaker": "user", "text": user_text,
                              "emotion": emotion.label.value})

            stage = "prompt"
            self.state = TurnState.GENERATING
            prior = self.history.turns()[:-1]
            prompt = render_prompt(
                PromptDocument(self.config.persona, self.config.instruction,
                               prior, user_text, emotion.label),
                PromptBudget(self.config.max_prompt_chars),
                self.config.template,
            )

            stage = "chat"
            mark = _now_ms()
            chat_result = await self.chat.complete(prompt)
            chat_ms = _now_ms() - mark
            reply = chat_result.value

            system_turn = DialogTurn(Speaker.SYSTEM, reply, self.history.next_turn_id, _now_ms())
            self.history.append_turn(system_turn)
            await self._emit({"type": "turn", "turn_id": system_turn.turn_id,
                              "speaker": "system", "text": reply})

            stage = "tts"
            self.state = TurnState.SYNTHESIZING
            mark = _now_ms()
            tts_result = await self.tts.synthesize(reply)
            tts_first_chunk_ms = _now_ms() - mark
            chunks: list[AudioFrame] = tts_result.value

            stage = "stream"
            self.state = TurnState.SPEAKING
            self.endpoint.set_suppressed(True)
            await self._emit({"type": "speaking_start", "turn_id": system_turn.turn_id})
            response_start = None
            try:
                for index, chunk in enumerate(chunks):
                    await self._send_audio(chunk)
                    if index == 0:
                        response_start = _now_ms()
                    await asyncio.sleep(chunk.duration_ms / 1000.0)  # pace playback
            finally:
                self.endpoint.set_suppressed(False)
                await self._emit({"type": "speaking_end", "turn_id": system_turn.turn_id})

            record = LatencyRecord(
                turn_id=user_turn.turn_id,
                speech_end_ms=speech_end,
                asr_ms=asr_ms,
                chat_ms=chat_ms,
                tts_first_chunk_ms=tts_first_chunk_ms,
                response_start_ms=response_start,
                total_ms=response_start - speech_end,
                acceptability=acceptability(response_start - speech_end),
            )
            self.records.append(record)
            self._log_line({"event": "latency_record", **record.as_dict()})
        except EmovoiceError as exc:
            # silent reset: error is surfaced as an event and logged, no
            # apology turn is injected into the history
            logger.warning("turn failed at %s: %s", stage, exc)
            await self._emit({"type": "error", "stage": stage, "code": exc.code,
                              "message": str(exc)})
        finally:
            self.state = TurnState.LISTENING
            self._turn_complete.set()

    # -- plumbing ---------------------------------------------------------------

    async def _on_emotion_update(self, label) -> None:
        await self._emit({"type": "emotion_update", "label": label.label.value,
                          "confidence": label.confidence})

    async def _emit(self, event: dict) -> None:
        self._log_line({"event": "server_event", **event})
        await self._send_event(event)

    def _log_line(self, payload: dict) -> None:
        if self._log_path is None:
            return
        with self._log_path.open("a", encoding="utf-8") as fh:
            fh.write(json.dumps(payload, separators=(",", ":")) + "\n")
