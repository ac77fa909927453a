"""Model-size presets for the benchmark grid.

Each (chat, asr) preset pair maps to fake-adapter delay means taken from
the shipped latency grid file. The per-cell target is split between the
ASR and chat fakes (the chat side dominates, mirroring where the latency
actually comes from); the optional overhead allowance is subtracted from
the target before splitting so the assumption stays visible and editable
rather than baked in.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

CHAT_PRESETS = ("davinci", "curie", "babbage", "ada")
ASR_PRESETS = ("tiny", "base", "small", "medium", "large")

ASR_SHARE = 0.25  # fraction of the cell target assigned to the ASR fake


@dataclass(frozen=True)
class CellTarget:
    mean_s: float
    std_s: float


def load_latency_grid(path: str | None = None) -> dict[str, dict[str, CellTarget]]:
    """Load the cell-target table; defaults to the shipped transcription."""
    if path is None:
        raw = json.loads(resources.files("emovoice.data").joinpath("latency_grid.json").read_text())
    else:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    grid: dict[str, dict[str, CellTarget]] = {}
    for chat, row in raw["cells"].items():
        grid[chat] = {asr: CellTarget(cell["mean_s"], cell["std_s"]) for asr, cell in row.items()}
    return grid


def delays_for_cell(target: CellTarget, overhead_allowance_ms: float = 0.0) -> tuple[float, float]:
    """(asr_delay_ms, chat_delay_ms) for one grid cell."""
    budget_ms = max(target.mean_s * 1000.0 - overhead_allowance_ms, 0.0)
    asr_ms = budget_ms * ASR_SHARE
    return asr_ms, budget_ms - asr_ms
