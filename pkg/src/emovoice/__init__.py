"""emovoice: real-time emotion-aware face-to-face voice dialogue server.

Subpackages follow the pipeline: transport (wire protocol, buffers,
resampling) -> vad (two-stage endpointing) -> emotion (label window tracking)
-> dialogue (history + prompt assembly) -> adapters (ASR/chat/TTS/emotion
backends) -> pipeline (per-session turn orchestration) -> bench (latency
harness) -> server (websocket front door).
"""

__version__ = "0.1.0"
