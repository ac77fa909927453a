"""Websocket front door: one binary-framed socket per session.

Kinds 0 (audio), 1 (video) and 2 (control) flow client -> server; kinds 3
(server-audio) and 4 (server-event) flow server -> client. A protocol
violation closes the connection after a coded server-event. Sessions are
keyed by the 16-byte session_id and survive a reconnect: the sequence gate
persists, so a client resuming with the same id is deduplicated by seq.

Plain HTTP requests (no websocket upgrade) are answered with static files
from the configured directory, or with a built-in placeholder page.
"""

from __future__ import annotations

import asyncio
import http
import logging
import time
from importlib import resources
from pathlib import Path

from websockets.asyncio.server import serve
from websockets.datastructures import Headers
from websockets.http11 import Response

from .config import ServerConfig
from .errors import EmovoiceError, ProtocolError, SessionClosed
from .pipeline import Session
from .transport import (
    AudioFrame,
    Packet,
    PacketKind,
    SequenceGate,
    decode_packet,
    encode_audio_payload,
    encode_event,
    encode_packet,
    parse_audio_payload,
    parse_control,
    parse_video_payload,
)

logger = logging.getLogger(__name__)

CONTENT_TYPES = {
    ".html": "text/html; charset=utf-8",
    ".js": "text/javascript; charset=utf-8",
    ".css": "text/css; charset=utf-8",
    ".json": "application/json",
    ".map": "application/json",
    ".png": "image/png",
    ".ico": "image/x-icon",
    ".svg": "image/svg+xml",
}


class _SessionEntry:
    def __init__(self, session: Session):
        self.session = session
        self.gate = SequenceGate()
        self.outbound: asyncio.Queue[bytes] | None = None
        self.event_seq = 0
        self.audio_seq = 0
        self.dropped_outbound = 0


class VoiceServer:
    def __init__(self, config: ServerConfig):
        self.config = config
        self.sessions: dict[bytes, _SessionEntry] = {}
        self._server = None

    # -- lifecycle ------------------------------------------------------------

    async def start(self) -> None:
        self._server = await serve(
            self._handle,
            self.config.host,
            self.config.port,
            process_request=self._process_request,
            max_size=32 * 1024 * 1024,
        )

    @property
    def port(self) -> int:
        return next(iter(self._server.sockets)).getsockname()[1]

    async def stop(self) -> None:
        for entry in self.sessions.values():
            await entry.session.close()
        self.sessions.clear()
        if self._server is not None:
            self._server.close()
            await self._server.wait_closed()

    async def serve_forever(self) -> None:
        await self._server.serve_forever()

    # -- static assets ----------------------------------------------------------

    def _process_request(self, connection, request):
        if "Upgrade" in request.headers:
            return None  # continue with the websocket handshake
        return self._static_response(request.path)

    def _static_response(self, path: str) -> Response:
        name = path.split("?", 1)[0]
        if name in ("", "/"):
            name = "/index.html"
        if self.config.static_dir is None:
            if name == "/index.html":
                body = resources.files("emovoice.data").joinpath("placeholder.html").read_bytes()
                return self._http_response(200, body, "text/html; charset=utf-8")
            return self._http_response(404, b"not found", "text/plain")
        root = Path(self.config.static_dir).resolve()
        target = (root / name.lstrip("/")).resolve()
        if root not in target.parents and target != root:
            return self._http_response(403, b"forbidden", "text/plain")
        if not target.is_file():
            return self._http_response(404, b"not found", "text/plain")
        content_type = CONTENT_TYPES.get(target.suffix, "application/octet-stream")
        return self._http_response(200, target.read_bytes(), content_type)

    @staticmethod
    def _http_response(status: int, body: bytes, content_type: str) -> Response:
        phrase = http.HTTPStatus(status).phrase
        headers = Headers([
            ("Content-Type", content_type),
            ("Content-Length", str(len(body))),
        ])
        return Response(status, phrase, headers, body)

    # -- websocket handling --------------------------------------------------------

    async def _handle(self, connection) -> None:
        entry: _SessionEntry | None = None
        sender: asyncio.Task | None = None
        outbound: asyncio.Queue[bytes] = asyncio.Queue(maxsize=256)

        async def pump() -> None:
            while True:
                await connection.send(await outbound.get())

        sender = asyncio.create_task(pump())
        try:
            async for raw in connection:
                if isinstance(raw, str):
                    await self._reject(connection, None, "protocol_error", "text frames not allowed")
                    return
                try:
                    packet = decode_packet(raw)
                except ProtocolError as exc:
                    await self._reject(connection, entry, exc.code, str(exc))
                    return
                if entry is None:
                    entry = self._attach_session(packet.session_id, outbound)
                elif packet.session_id != entry.session.session_id:
                    await self._reject(connection, entry, "protocol_error", "session_id changed mid-connection")
                    return
                if not entry.gate.admit(packet):
                    continue  # stale seq: dropped and counted, never processed
                try:
                    await self._dispatch(entry, packet)
                except ProtocolError as exc:
                    await self._reject(connection, entry, exc.code, str(exc))
                    return
                except SessionClosed:
                    return
        finally:
            if sender is not None:
                sender.cancel()
            if entry is not None and entry.outbound is outbound:
                entry.outbound = None  # session stays alive for reconnects

    def _attach_session(self, session_id: bytes, outbound: asyncio.Queue[bytes]) -> _SessionEntry:
        entry = self.sessions.get(session_id)
        if entry is None:
            entry = _SessionEntry(self._build_session(session_id))
            self.sessions[session_id] = entry
            asyncio.get_running_loop().create_task(entry.session.start())
        entry.outbound = outbound
        return entry

    def _build_session(self, session_id: bytes) -> Session:
        async def send_event(event: dict) -> None:
            entry = self.sessions.get(session_id)
            if entry is None or entry.outbound is None:
                if entry is not None:
                    entry.dropped_outbound += 1
                return
            entry.event_seq += 1
            raw = encode_event(session_id, entry.event_seq, int(time.time() * 1000), event)
            await self._enqueue(entry, raw)

        async def send_audio(frame: AudioFrame) -> None:
            entry = self.sessions.get(session_id)
            if entry is None or entry.outbound is None:
                if entry is not None:
                    entry.dropped_outbound += 1
                return
            entry.audio_seq += 1
            raw = encode_packet(Packet(
                PacketKind.SERVER_AUDIO,
                session_id,
                entry.audio_seq,
                int(time.time() * 1000),
                encode_audio_payload(frame.samples, frame.sample_rate_hz),
            ))
            await self._enqueue(entry, raw)

        return Session(self.config.session, session_id, send_event, send_audio)

    @staticmethod
    async def _enqueue(entry: _SessionEntry, raw: bytes) -> None:
        queue = entry.outbound
        if queue is None:
            entry.dropped_outbound += 1
            return
        try:
            queue.put_nowait(raw)
        except asyncio.QueueFull:
            entry.dropped_outbound += 1

    async def _dispatch(self, entry: _SessionEntry, packet: Packet) -> None:
        session = entry.session
        if packet.kind is PacketKind.AUDIO:
            session.feed_audio(parse_audio_payload(packet.payload, packet))
        elif packet.kind is PacketKind.VIDEO:
            session.feed_video(parse_video_payload(packet.payload, packet))
        elif packet.kind is PacketKind.CONTROL:
            await self._handle_control(entry, parse_control(packet.payload))
        else:
            raise ProtocolError("clients must not send server packet kinds")

    async def _handle_control(self, entry: _SessionEntry, control: dict) -> None:
        session = entry.session
        kind = control["type"]
        try:
            if kind == "transcript_edit":
                await session.edit_transcript(int(control["turn_id"]), str(control["text"]))
            elif kind == "get_metrics":
                await self._send_control_reply(entry, {"type": "metrics", **session.metrics_payload()})
            elif kind == "get_history":
                await self._send_control_reply(entry, {"type": "history", **session.history_payload()})
            else:
                await self._send_control_reply(
                    entry, {"type": "error", "stage": "control", "code": "unknown_control",
                            "message": f"unknown control type {kind!r}"})
        except EmovoiceError as exc:
            await self._send_control_reply(
                entry, {"type": "error", "stage": "control", "code": exc.code, "message": str(exc)})

    async def _send_control_reply(self, entry: _SessionEntry, event: dict) -> None:
        entry.event_seq += 1
        raw = encode_event(entry.session.session_id, entry.event_seq, int(time.time() * 1000), event)
        await self._enqueue(entry, raw)

    async def _reject(self, connection, entry: _SessionEntry | None, code: str, message: str) -> None:
        sid = entry.session.session_id if entry is not None else bytes(16)
        seq = (entry.event_seq + 1) if entry is not None else 1
        if entry is not None:
            entry.event_seq = seq
        try:
            await connection.send(encode_event(sid, seq, int(time.time() * 1000),
                                               {"type": "error", "stage": "protocol",
                                                "code": code, "message": message}))
        except Exception:  # connection may already be gone
            pass
        await connection.close(code=1002, reason=code)


async def run_server(config: ServerConfig) -> None:
    server = VoiceServer(config)
    await server.start()
    logger.info("listening on %s:%d", config.host, server.port)
    try:
        await server.serve_forever()
    finally:
        await server.stop()
