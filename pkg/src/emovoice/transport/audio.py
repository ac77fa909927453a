"""Media frame types and payload codecs.

Audio payload layout (kind=0 and kind=3):

    sample_rate_hz: u32 BE, then PCM16 little-endian mono samples.

Video payload layout (kind=1):

    width: u16 BE, height: u16 BE, then JPEG bytes (must start with the
    0xFF 0xD8 start-of-image marker).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from ..errors import OddSampleBytes, TruncatedPayload, UndecodableFrame, UnsupportedRate
from .wire import Packet

SUPPORTED_RATES = (16000, 44100)
JPEG_SOI = b"\xff\xd8"


@dataclass
class AudioFrame:
    """A timestamped block of mono PCM16 samples."""

    samples: np.ndarray  # int16, mono
    sample_rate_hz: int
    timestamp_ms: int
    seq: int
    session_id: bytes = b"\x00" * 16

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.int16)
        if self.samples.size == 0:
            raise ValueError("AudioFrame requires at least one sample")
        if self.sample_rate_hz not in SUPPORTED_RATES:
            raise UnsupportedRate(f"sample rate {self.sample_rate_hz} not in {SUPPORTED_RATES}")

    @property
    def duration_ms(self) -> float:
        return self.samples.size * 1000.0 / self.sample_rate_hz


@dataclass
class VideoFrame:
    """A single JPEG camera frame (nominal 400x300)."""

    jpeg_bytes: bytes
    width: int
    height: int
    timestamp_ms: int
    seq: int
    session_id: bytes = b"\x00" * 16

    def __post_init__(self):
        if not self.jpeg_bytes.startswith(JPEG_SOI):
            raise UndecodableFrame("frame does not start with the JPEG SOI marker")


def parse_audio_payload(payload: bytes, header: Packet) -> AudioFrame:
    """Decode an audio packet payload into an AudioFrame."""
    if len(payload) < 6:
        raise TruncatedPayload(f"audio payload of {len(payload)} bytes is shorter than rate prefix + one sample")
    if (len(payload) - 4) % 2 != 0:
        raise OddSampleBytes("PCM16 byte count is odd")
    (rate,) = struct.unpack_from(">I", payload)
    if rate not in SUPPORTED_RATES:
        raise UnsupportedRate(f"sample rate {rate} not in {SUPPORTED_RATES}")
    samples = np.frombuffer(payload, dtype="<i2", offset=4)
    return AudioFrame(
        samples=samples,
        sample_rate_hz=rate,
        timestamp_ms=header.timestamp_ms,
        seq=header.seq,
        session_id=header.session_id,
    )


def encode_audio_payload(samples: np.ndarray, sample_rate_hz: int) -> bytes:
    """Inverse of parse_audio_payload (rate prefix + PCM16LE)."""
    if sample_rate_hz not in SUPPORTED_RATES:
        raise UnsupportedRate(f"sample rate {sample_rate_hz} not in {SUPPORTED_RATES}")
    pcm = np.asarray(samples, dtype=np.int16).astype("<i2").tobytes()
    return struct.pack(">I", sample_rate_hz) + pcm


def parse_video_payload(payload: bytes, header: Packet) -> VideoFrame:
    """Decode a video packet payload into a VideoFrame."""
    if len(payload) < 6:
        raise TruncatedPayload(f"video payload of {len(payload)} bytes is shorter than dims + SOI")
    width, height = struct.unpack_from(">HH", payload)
    jpeg = payload[4:]
    if not jpeg.startswith(JPEG_SOI):
        raise UndecodableFrame("video payload does not start with the JPEG SOI marker")
    return VideoFrame(
        jpeg_bytes=jpeg,
        width=width,
        height=height,
        timestamp_ms=header.timestamp_ms,
        seq=header.seq,
        session_id=header.session_id,
    )


def encode_video_payload(jpeg_bytes: bytes, width: int, height: int) -> bytes:
    """Inverse of parse_video_payload (u16 dims + JPEG)."""
    if not jpeg_bytes.startswith(JPEG_SOI):
        raise UndecodableFrame("jpeg_bytes does not start with the JPEG SOI marker")
    return struct.pack(">HH", width, height) + jpeg_bytes
