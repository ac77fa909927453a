"""Two-stage voice-activity detection and utterance endpointing."""

from .corpus import build_corpus
from .endpointer import Endpointer, EndpointerCounters, StreamEndpointer
from .evaluate import PrecisionRecall, evaluate_vad, intervals_to_frame_labels, precision_recall
from .gate import Stage1Gate, frame_energy_db, speech_band_fraction
from .types import SAMPLE_RATE, EndpointerState, FrameDecision, UtteranceSegment, VadConfig
from .verifier import SegmentVerifier, SpectralVerifier

__all__ = [
    "SAMPLE_RATE",
    "VadConfig",
    "FrameDecision",
    "UtteranceSegment",
    "EndpointerState",
    "Stage1Gate",
    "SegmentVerifier",
    "SpectralVerifier",
    "Endpointer",
    "EndpointerCounters",
    "StreamEndpointer",
    "PrecisionRecall",
    "evaluate_vad",
    "precision_recall",
    "intervals_to_frame_labels",
    "build_corpus",
    "frame_energy_db",
    "speech_band_fraction",
]
