"""Wire protocol, media frames, resampling and per-session buffers."""

from .audio import (
    AudioFrame,
    VideoFrame,
    encode_audio_payload,
    encode_video_payload,
    parse_audio_payload,
    parse_video_payload,
)
from .buffers import SessionBuffers
from .resample import Resampler44to16, resample_to_16k
from .wire import (
    HEADER_SIZE,
    MAGIC,
    VERSION,
    Packet,
    PacketKind,
    SequenceGate,
    decode_packet,
    encode_event,
    encode_packet,
    parse_control,
)

__all__ = [
    "AudioFrame",
    "VideoFrame",
    "Packet",
    "PacketKind",
    "SequenceGate",
    "SessionBuffers",
    "Resampler44to16",
    "HEADER_SIZE",
    "MAGIC",
    "VERSION",
    "decode_packet",
    "encode_packet",
    "encode_event",
    "parse_control",
    "parse_audio_payload",
    "parse_video_payload",
    "encode_audio_payload",
    "encode_video_payload",
    "resample_to_16k",
]
