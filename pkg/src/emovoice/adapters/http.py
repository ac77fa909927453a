"""Generic JSON-over-HTTP backends.

Request/response contracts (all POST to the configured endpoint):

    asr:     {"pcm16_b64": ..., "sample_rate": 16000}  ->  {"text": ...}
    chat:    {"prompt": ...}                           ->  {"text": ...}
    tts:     {"text": ...}                             ->  raw PCM16LE body @16 kHz
    emotion: raw JPEG body (image/jpeg)                ->  {"label": ..., "confidence": ...}
             a null label means no face was detected

An optional bearer token is passed through as-is. Non-2xx responses raise
BackendError(status, body); the configured timeout raises Timeout and the
caller is never blocked past it.
"""

from __future__ import annotations

import base64
import time

import httpx
import numpy as np

from ..emotion import Emotion, EmotionLabel
from ..errors import BackendError, InvalidInput, NoFaceDetected, Timeout
from ..transport.audio import AudioFrame, VideoFrame
from ..vad.types import SAMPLE_RATE, UtteranceSegment
from .base import AdapterResult, AdapterSpec
from .fakes import TTS_CHUNK_SAMPLES


class _HttpBase:
    def __init__(self, spec: AdapterSpec, transport: httpx.AsyncBaseTransport | None = None):
        self.spec = spec
        headers = {}
        if spec.auth_token:
            headers["Authorization"] = f"Bearer {spec.auth_token}"
        self._client = httpx.AsyncClient(
            timeout=spec.timeout_ms / 1000.0,
            headers=headers,
            transport=transport,
        )

    async def _post(self, *, json=None, content=None, headers=None) -> httpx.Response:
        try:
            response = await self._client.post(
                self.spec.http_endpoint, json=json, content=content, headers=headers
            )
        except httpx.TimeoutException as exc:
            raise Timeout(f"{self.spec.kind} backend timed out after {self.spec.timeout_ms} ms") from exc
        except httpx.HTTPError as exc:
            raise BackendError(0, str(exc)) from exc
        if response.status_code // 100 != 2:
            raise BackendError(response.status_code, response.text)
        return response

    async def aclose(self) -> None:
        await self._client.aclose()


class HttpAsrAdapter(_HttpBase):
    async def transcribe(self, segment: UtteranceSegment) -> AdapterResult:
        started = time.perf_counter()
        pcm = np.asarray(segment.samples, dtype="<i2").tobytes()
        response = await self._post(json={
            "pcm16_b64": base64.b64encode(pcm).decode("ascii"),
            "sample_rate": SAMPLE_RATE,
        })
        text = response.json().get("text")
        if not isinstance(text, str):
            raise BackendError(response.status_code, "missing 'text' in ASR response")
        return AdapterResult(text, (time.perf_counter() - started) * 1000.0)


class HttpChatAdapter(_HttpBase):
    async def complete(self, prompt: str) -> AdapterResult:
        if not prompt:
            raise InvalidInput("prompt must be non-empty")
        started = time.perf_counter()
        response = await self._post(json={"prompt": prompt})
        text = response.json().get("text")
        if not isinstance(text, str):
            raise BackendError(response.status_code, "missing 'text' in chat response")
        return AdapterResult(text, (time.perf_counter() - started) * 1000.0)


class HttpTtsAdapter(_HttpBase):
    async def synthesize(self, text: str) -> AdapterResult:
        if not text.strip():
            raise InvalidInput("text must be non-empty")
        started = time.perf_counter()
        response = await self._post(json={"text": text})
        body = response.content
        if len(body) < 2 or len(body) % 2 != 0:
            raise BackendError(response.status_code, "TTS body is not PCM16")
        pcm = np.frombuffer(body, dtype="<i2")
        frames = []
        for seq, start in enumerate(range(0, pcm.size, TTS_CHUNK_SAMPLES)):
            chunk = pcm[start : start + TTS_CHUNK_SAMPLES]
            frames.append(AudioFrame(chunk, SAMPLE_RATE, start * 1000 // SAMPLE_RATE, seq))
        return AdapterResult(frames, (time.perf_counter() - started) * 1000.0)


class HttpEmotionAdapter(_HttpBase):
    async def classify(self, frame: VideoFrame) -> AdapterResult:
        started = time.perf_counter()
        response = await self._post(content=frame.jpeg_bytes, headers={"Content-Type": "image/jpeg"})
        payload = response.json()
        label = payload.get("label")
        if label is None:
            raise NoFaceDetected("backend reported no face")
        try:
            emotion = Emotion(label)
        except ValueError:
            raise BackendError(response.status_code, f"label {label!r} outside the four-class set") from None
        confidence = float(payload.get("confidence", 0.0))
        result = EmotionLabel(emotion, confidence, float(frame.timestamp_ms))
        return AdapterResult(result, (time.perf_counter() - started) * 1000.0)
