"""Binary wire protocol between client and server.

Every message on the socket is one packet:

    ┌───────┬─────────┬──────┬────────────┬────────┬──────────────┬─────────────┬─────────┐
    │ magic │ version │ kind │ session_id │  seq   │ timestamp_ms │ payload_len │ payload │
    │ 2B FC │ u8 (=1) │  u8  │  16 bytes  │ u32 BE │    u64 BE    │   u32 BE    │  bytes  │
    └───────┴─────────┴──────┴────────────┴────────┴──────────────┴─────────────┴─────────┘

Fixed preamble is 36 bytes; payload_len must equal the remaining byte count
exactly (the transport is message-framed, so a mismatch is a protocol
violation, not a partial read).

Kinds: 0=audio, 1=video, 2=control, 3=server-audio, 4=server-event.
Control and server-event payloads are UTF-8 JSON objects with a required
"type" field.
"""

from __future__ import annotations

import json
import struct
from dataclasses import dataclass
from enum import IntEnum

from ..errors import (
    BadMagic,
    PayloadTooLarge,
    TruncatedPayload,
    UnknownKind,
    UnsupportedVersion,
)

MAGIC = b"FC"
VERSION = 1
HEADER_SIZE = 36
MAX_PAYLOAD = 16 * 1024 * 1024

_HEADER = struct.Struct(">2sBB16sIQI")


class PacketKind(IntEnum):
    AUDIO = 0
    VIDEO = 1
    CONTROL = 2
    SERVER_AUDIO = 3
    SERVER_EVENT = 4


@dataclass(frozen=True)
class Packet:
    kind: PacketKind
    session_id: bytes
    seq: int
    timestamp_ms: int
    payload: bytes
    version: int = VERSION

    def __post_init__(self):
        if len(self.session_id) != 16:
            raise ValueError("session_id must be exactly 16 bytes")
        if not 0 <= self.seq <= 0xFFFFFFFF:
            raise ValueError("seq out of u32 range")
        if not 0 <= self.timestamp_ms <= 0xFFFFFFFFFFFFFFFF:
            raise ValueError("timestamp_ms out of u64 range")


def encode_packet(packet: Packet) -> bytes:
    """Serialize a packet to its exact wire layout. Deterministic."""
    if len(packet.payload) > MAX_PAYLOAD:
        raise PayloadTooLarge(f"payload of {len(packet.payload)} bytes exceeds 16 MiB")
    header = _HEADER.pack(
        MAGIC,
        packet.version,
        int(packet.kind),
        packet.session_id,
        packet.seq,
        packet.timestamp_ms,
        len(packet.payload),
    )
    return header + packet.payload


def decode_packet(data: bytes) -> Packet:
    """Parse wire bytes into a Packet.

    Raises BadMagic, UnsupportedVersion, UnknownKind or TruncatedPayload;
    the server closes the offending connection with a coded server-event
    for any of these.
    """
    if len(data) < HEADER_SIZE:
        raise TruncatedPayload(f"packet of {len(data)} bytes is shorter than the {HEADER_SIZE}-byte header")
    magic, version, kind, session_id, seq, timestamp_ms, payload_len = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise BadMagic(f"bad magic {magic!r}")
    if version != VERSION:
        raise UnsupportedVersion(f"version {version} not supported")
    try:
        kind = PacketKind(kind)
    except ValueError:
        raise UnknownKind(f"unknown packet kind {kind}") from None
    remaining = len(data) - HEADER_SIZE
    if payload_len != remaining:
        raise TruncatedPayload(f"payload_len={payload_len} but {remaining} bytes follow the header")
    return Packet(
        kind=kind,
        session_id=session_id,
        seq=seq,
        timestamp_ms=timestamp_ms,
        payload=data[HEADER_SIZE:],
    )


def encode_event(session_id: bytes, seq: int, timestamp_ms: int, event: dict) -> bytes:
    """Build a server-event packet around a JSON object (requires "type")."""
    if "type" not in event:
        raise ValueError("server events require a 'type' field")
    payload = json.dumps(event, separators=(",", ":"), sort_keys=True).encode("utf-8")
    return encode_packet(
        Packet(PacketKind.SERVER_EVENT, session_id, seq, timestamp_ms, payload)
    )


def parse_control(payload: bytes) -> dict:
    """Parse a control payload: UTF-8 JSON object with a required "type"."""
    try:
        obj = json.loads(payload.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise TruncatedPayload(f"control payload is not valid JSON: {exc}") from None
    if not isinstance(obj, dict) or "type" not in obj:
        raise TruncatedPayload("control payload must be a JSON object with a 'type' field")
    return obj


class SequenceGate:
    """Per-(session, kind) monotonic sequence enforcement.

    A packet whose seq is <= the last accepted seq for its stream is stale:
    it is dropped and counted, never processed.
    """

    def __init__(self):
        self._last: dict[tuple[bytes, int], int] = {}
        self.dropped = 0

    def admit(self, packet: Packet) -> bool:
        key = (packet.session_id, int(packet.kind))
        last = self._last.get(key)
        if last is not None and packet.seq <= last:
            self.dropped += 1
            return False
        self._last[key] = packet.seq
        return True
