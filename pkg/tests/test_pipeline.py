import asyncio
import statistics

import numpy as np
import pytest

from emovoice.adapters import AdapterSpec
from emovoice.pipeline import (
    LatencyRecord,
    Session,
    SessionConfig,
    TurnState,
    acceptability,
    aggregate_metrics,
)
from emovoice.transport import AudioFrame, VideoFrame
from emovoice.vad import SAMPLE_RATE

SID = bytes(range(16))
JPEG = b"\xff\xd8\xff\xe0" + b"\x00" * 8 + b"\xff\xd9"


class Harness:
    """Session plus captured outputs and a synthetic audio clock."""

    def __init__(self, **config_kwargs):
        self.events: list[dict] = []
        self.audio: list[AudioFrame] = []
        config_kwargs.setdefault("asr", AdapterSpec(kind="asr", fake_script=["hi there"]))
        config_kwargs.setdefault("chat", AdapterSpec(kind="chat", fake_script=["hello back"]))
        self.config = SessionConfig(**config_kwargs)
        self.session = Session(self.config, SID, self._event, self._frame)
        self._samples_fed = 0
        self._seq = 0

    async def _event(self, event):
        self.events.append(event)

    async def _frame(self, frame):
        self.audio.append(frame)

    def feed_utterance(self, speech_ms=1000, silence_ms=700):
        tone = (0.25 * 32767 * np.sin(
            2 * np.pi * 1000 * np.arange(speech_ms * 16) / SAMPLE_RATE)).astype(np.int16)
        pcm = np.concatenate([tone, np.zeros(silence_ms * 16, np.int16)])
        for start in range(0, pcm.size, 2048):
            chunk = pcm[start : start + 2048]
            self._seq += 1
            self.session.feed_audio(AudioFrame(chunk, SAMPLE_RATE, self._samples_fed // 16, self._seq))
            self._samples_fed += chunk.size

    def feed_silence(self, ms):
        pcm = np.zeros(ms * 16, np.int16)
        for start in range(0, pcm.size, 2048):
            chunk = pcm[start : start + 2048]
            self._seq += 1
            self.session.feed_audio(AudioFrame(chunk, SAMPLE_RATE, self._samples_fed // 16, self._seq))
            self._samples_fed += chunk.size

    def events_of(self, kind):
        return [e for e in self.events if e["type"] == kind]


def run(coro):
    return asyncio.run(coro)


async def run_turns(harness, n_turns=1, timeout=30.0):
    await harness.session.start()
    try:
        for _ in range(n_turns):
            harness.feed_utterance()
            await harness.session.wait_turn_complete(timeout)
    finally:
        await harness.session.close()


def test_single_turn_flow():
    harness = Harness()
    run(run_turns(harness))
    turns = harness.session.history.turns()
    assert [t.speaker.value for t in turns] == ["user", "system"]
    assert turns[0].text == "hi there"
    assert turns[1].text == "hello back"
    assert len(harness.session.records) == 1
    assert harness.events_of("speaking_start") and harness.events_of("speaking_end")
    assert len(harness.events_of("turn")) == 2
    assert len(harness.audio) >= 1
    assert harness.session.state is TurnState.LISTENING


def test_latency_record_decomposition():
    harness = Harness(
        asr=AdapterSpec(kind="asr", fake_delay_ms=50, fake_script=["q"]),
        chat=AdapterSpec(kind="chat", fake_delay_ms=120, fake_script=["a"]),
        tts=AdapterSpec(kind="tts", fake_delay_ms=30),
    )
    run(run_turns(harness))
    record = harness.session.records[0]
    stage_sum = record.asr_ms + record.chat_ms + record.tts_first_chunk_ms
    assert record.total_ms >= stage_sum
    assert record.total_ms - stage_sum <= 50.0  # orchestration overhead bound
    assert record.asr_ms >= 50 and record.chat_ms >= 120 and record.tts_first_chunk_ms >= 30


def test_chat_failure_resets_to_listening():
    harness = Harness(
        chat=AdapterSpec(kind="chat", impl="http", http_endpoint="http://127.0.0.1:9", timeout_ms=200),
    )
    run(run_turns(harness))
    turns = harness.session.history.turns()
    assert [t.speaker.value for t in turns] == ["user"]  # no system turn appended
    assert harness.session.state is TurnState.LISTENING
    errors = harness.events_of("error")
    assert errors and errors[0]["stage"] == "chat"
    assert not harness.events_of("speaking_start")
    assert harness.session.records == []


def test_suppression_during_speaking():
    harness = Harness(
        chat=AdapterSpec(kind="chat", fake_script=["a somewhat longer reply with many words to stretch audio"]),
    )

    async def scenario():
        await harness.session.start()
        try:
            harness.feed_utterance()
            # wait until the session starts speaking, then feed speech frames
            for _ in range(500):
                await asyncio.sleep(0.01)
                if harness.session.state is TurnState.SPEAKING:
                    break
            assert harness.session.state is TurnState.SPEAKING
            assert harness.session.suppressing
            emitted_before = harness.session.endpoint.endpointer.counters.emitted
            harness.feed_utterance(speech_ms=700, silence_ms=700)
            await harness.session.wait_turn_complete()
            assert harness.session.endpoint.endpointer.counters.emitted == emitted_before
            assert not harness.session.suppressing
        finally:
            await harness.session.close()

    run(scenario())


def test_back_to_back_segments_queue_depth_one():
    harness = Harness(chat=AdapterSpec(kind="chat", fake_delay_ms=400, fake_script=["ok"]))

    async def scenario():
        await harness.session.start()
        try:
            # three utterances pushed immediately; the first starts a turn,
            # the others compete for the single pending slot
            for _ in range(3):
                harness.feed_utterance(speech_ms=600, silence_ms=700)
            await harness.session.wait_turn_complete()
            await harness.session.wait_turn_complete()
        finally:
            await harness.session.close()

    run(scenario())
    assert len(harness.session.records) == 2
    assert harness.session.dropped_pending == 1


def test_emotion_attached_to_user_turn():
    harness = Harness(
        emotion=AdapterSpec(kind="emotion", fake_timeline=[(0, "happy", 0.95)]),
        chat=AdapterSpec(kind="chat", fake_echo_emotion=True),
    )

    async def scenario():
        await harness.session.start()
        try:
            harness.session.feed_video(VideoFrame(JPEG, 400, 300, 100, 1))
            await asyncio.sleep(0.05)
            harness.feed_utterance()
            await harness.session.wait_turn_complete()
        finally:
            await harness.session.close()

    run(scenario())
    assert harness.events_of("emotion_update")[0]["label"] == "happy"
    user_turn = harness.session.history.turns()[0]
    assert user_turn.emotion.label.value == "happy"
    reply = harness.session.history.turns()[1].text
    assert "happy" in reply  # echo-emotion fake saw the prompt's emotion line


def test_transcript_edit_re_echoes():
    harness = Harness()
    run(run_turns(harness))

    async def edit():
        await harness.session.edit_transcript(1, "corrected words")

    run(edit())
    echoed = [e for e in harness.events_of("turn") if e["turn_id"] == 1]
    assert echoed[-1]["text"] == "corrected words"
    assert harness.session.history.turns()[0].text == "corrected words"


def test_suppression_toggles_exactly_at_speaking_events():
    harness = Harness()
    trace = []
    original_emit = harness._event

    async def tracing_emit(event):
        trace.append((event["type"], harness.session.suppressing))
        await original_emit(event)

    harness.session._send_event = tracing_emit
    run(run_turns(harness))
    states = dict((kind, flag) for kind, flag in trace if kind.startswith("speaking"))
    assert states["speaking_start"] is True
    assert states["speaking_end"] is False
    # suppression active only inside the speaking window
    for kind, flag in trace:
        if kind == "turn":
            assert flag is False


def test_metrics_payload_aggregates():
    harness = Harness()
    run(run_turns(harness, n_turns=2))
    payload = harness.session.metrics_payload()
    assert len(payload["records"]) == 2
    assert "aggregates" in payload
    totals = [r["total_ms"] for r in payload["records"]]
    assert payload["aggregates"]["total_ms"]["mean"] == pytest.approx(statistics.fmean(totals))


def test_aggregate_metrics_mean_std():
    records = [
        LatencyRecord(1, 0.0, 100.0, 800.0, 50.0, 1000.0, 1000.0, "acceptable"),
        LatencyRecord(2, 0.0, 100.0, 900.0, 60.0, 1200.0, 1200.0, "tolerable"),
    ]
    payload = aggregate_metrics(records)
    assert payload["aggregates"]["total_ms"]["mean"] == pytest.approx(1100.0)
    assert payload["aggregates"]["total_ms"]["std"] == pytest.approx(141.42, abs=0.01)
    assert aggregate_metrics([]) == {"records": []}


def test_acceptability_tags():
    assert acceptability(900.0) == "acceptable"
    assert acceptability(1000.0) == "acceptable"
    assert acceptability(1500.0) == "tolerable"
    assert acceptability(2000.0) == "tolerable"
    assert acceptability(2100.0) == "noticeable"


def test_jsonl_event_log(tmp_path):
    harness = Harness(log_dir=str(tmp_path))
    run(run_turns(harness))
    log_file = tmp_path / f"session-{SID.hex()}.jsonl"
    assert log_file.exists()
    lines = log_file.read_text().splitlines()
    assert any('"latency_record"' in line for line in lines)
    assert any('"speaking_start"' in line for line in lines)
