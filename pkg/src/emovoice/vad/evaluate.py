"""Frame-level precision/recall for the VAD pipelines.

Three prediction modes share one counting routine:
  - combined: the full gate -> endpointer -> verifier pipeline (segments),
  - stage-1 only: raw gate labels per frame,
  - stage-2 fixed windows: the verifier scored over a fixed-size grid.

Convention: with no predicted speech at all, precision is reported as 1.0.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import EmptyCorpus
from .endpointer import StreamEndpointer
from .gate import Stage1Gate
from .types import SAMPLE_RATE, VadConfig
from .verifier import SpectralVerifier

Interval = tuple[float, float]
Clip = tuple[np.ndarray, list[Interval]]

STAGE2_WINDOW_MS = 240


@dataclass(frozen=True)
class PrecisionRecall:
    precision: float
    recall: float
    true_positive_frames: int
    predicted_frames: int
    reference_frames: int


def intervals_to_frame_labels(intervals: list[Interval], n_frames: int, frame_ms: int) -> np.ndarray:
    """Quantize [start_ms, end_ms) intervals onto the analysis-frame grid.

    A frame counts as speech when at least half of it is covered.
    """
    labels = np.zeros(n_frames, dtype=bool)
    for start, end in intervals:
        for i in range(n_frames):
            frame_start = i * frame_ms
            frame_end = frame_start + frame_ms
            overlap = min(end, frame_end) - max(start, frame_start)
            if overlap >= frame_ms / 2:
                labels[i] = True
    return labels


def precision_recall(predicted: np.ndarray, reference: np.ndarray) -> PrecisionRecall:
    tp = int(np.sum(predicted & reference))
    n_pred = int(np.sum(predicted))
    n_ref = int(np.sum(reference))
    precision = tp / n_pred if n_pred else 1.0
    recall = tp / n_ref if n_ref else 1.0
    return PrecisionRecall(precision, recall, tp, n_pred, n_ref)


def _check_references(intervals: list[Interval]) -> None:
    for (s1, e1), (s2, e2) in zip(intervals, intervals[1:]):
        if s2 < e1:
            raise ValueError("reference intervals must be non-overlapping and sorted")


def _combined_labels(pcm: np.ndarray, config: VadConfig, n_frames: int) -> np.ndarray:
    ep = StreamEndpointer(config)
    segments = ep.push(pcm, timestamp_ms=0.0)
    tail = ep.flush()
    if tail is not None:
        segments.append(tail)
    return intervals_to_frame_labels([(s.start_ms, s.end_ms) for s in segments], n_frames, config.frame_ms)


def _stage1_labels(pcm: np.ndarray, config: VadConfig, n_frames: int) -> np.ndarray:
    gate = Stage1Gate(config)
    frame_len = config.frame_samples
    labels = np.zeros(n_frames, dtype=bool)
    for i in range(n_frames):
        window = pcm[i * frame_len : (i + 1) * frame_len]
        labels[i] = gate.classify(window, i, i * config.frame_ms).is_speech
    return labels


def _stage2_fixed_window_labels(pcm: np.ndarray, config: VadConfig, n_frames: int) -> np.ndarray:
    verifier = SpectralVerifier(config)
    window_len = STAGE2_WINDOW_MS * SAMPLE_RATE // 1000
    frames_per_window = STAGE2_WINDOW_MS // config.frame_ms
    labels = np.zeros(n_frames, dtype=bool)
    n_windows = len(pcm) // window_len
    for w in range(n_windows):
        chunk = pcm[w * window_len : (w + 1) * window_len]
        if verifier.score(chunk) >= config.verifier_threshold:
            lo = w * frames_per_window
            labels[lo : min(lo + frames_per_window, n_frames)] = True
    return labels


_MODES = {
    "combined": _combined_labels,
    "stage1": _stage1_labels,
    "stage2_fixed": _stage2_fixed_window_labels,
}


def evaluate_vad(corpus: list[Clip], config: VadConfig | None = None, mode: str = "combined") -> PrecisionRecall:
    """Frame-level precision/recall of one pipeline mode over a corpus."""
    if not corpus:
        raise EmptyCorpus("evaluation corpus is empty")
    config = config or VadConfig()
    label_fn = _MODES[mode]
    predicted_all: list[np.ndarray] = []
    reference_all: list[np.ndarray] = []
    for pcm, references in corpus:
        _check_references(references)
        n_frames = len(pcm) // config.frame_samples
        predicted_all.append(label_fn(pcm, config, n_frames))
        reference_all.append(intervals_to_frame_labels(references, n_frames, config.frame_ms))
    return precision_recall(np.concatenate(predicted_all), np.concatenate(reference_all))
