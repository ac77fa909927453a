"""Headless latency benchmark.

Drives the full pipeline (synthetic one-second utterance + trailing
silence per trial) with delay-configured fake adapters over the chat x asr
preset grid, measuring utterance-to-response time exactly as the live
pipeline does. The absolute numbers in the shipped grid file are targets
for the harness, not reproductions of any external service's performance:
the bench proves configured delay in => measured delay out, plus the
table's ordinal structure.

Monotonicity is checked against the *configured* delay ordering (the grid
itself is not monotone), so a cell whose injected delay is tampered with
trips its flag while a faithful run passes.
"""

from __future__ import annotations

import asyncio
import csv
import io
import statistics
from dataclasses import dataclass, field

import numpy as np

from .adapters import AdapterSpec, CellTarget, delays_for_cell, load_latency_grid
from .errors import BackendNotFake, IncompleteGrid
from .pipeline import Session, SessionConfig, acceptability
from .transport import AudioFrame
from .vad import SAMPLE_RATE

UTTERANCE_MS = 1000
TRAILING_SILENCE_MS = 700
FEED_CHUNK = 2048
MONOTONICITY_TOL_MS = 25.0
DEFAULT_TRIALS = 20
DEFAULT_OVERHEAD_BUDGET_MS = 50.0

Cell = tuple[str, str]  # (chat_preset, asr_preset)


@dataclass
class BenchGrid:
    chat_presets: list[str]
    asr_presets: list[str]
    targets: dict[Cell, CellTarget]
    trials_per_cell: int = DEFAULT_TRIALS
    overhead_allowance_ms: float = 0.0
    overhead_budget_ms: float = DEFAULT_OVERHEAD_BUDGET_MS

    def __post_init__(self):
        if self.trials_per_cell < 2:
            raise ValueError("trials_per_cell must be >= 2 so std is defined")
        for cell, target in self.targets.items():
            if target.mean_s * 1000.0 < self.overhead_allowance_ms:
                raise ValueError(f"cell {cell} target below the overhead allowance")

    @classmethod
    def from_file(cls, path: str | None = None, trials: int = DEFAULT_TRIALS,
                  overhead_allowance_ms: float = 0.0) -> "BenchGrid":
        grid = load_latency_grid(path)
        chat_presets = list(grid.keys())
        asr_presets = list(next(iter(grid.values())).keys())
        targets = {(c, a): grid[c][a] for c in chat_presets for a in asr_presets}
        return cls(chat_presets, asr_presets, targets, trials, overhead_allowance_ms)

    def configured_delays(self, cell: Cell) -> tuple[float, float]:
        return delays_for_cell(self.targets[cell], self.overhead_allowance_ms)


@dataclass
class CellResult:
    chat: str
    asr: str
    target_mean_s: float
    configured_ms: float  # asr + chat injected delay
    mean_s: float
    std_s: float
    overhead_ms: float  # measured - configured
    tag: str
    totals_ms: list[float] = field(default_factory=list)


@dataclass
class MonotonicityFlag:
    axis: str  # "row" | "column" | "max_row"
    description: str
    ok: bool


@dataclass
class BenchReport:
    grid: BenchGrid
    cells: dict[Cell, CellResult]
    seed: int
    flags: list[MonotonicityFlag] = field(default_factory=list)

    @property
    def all_ok(self) -> bool:
        return all(flag.ok for flag in self.flags)


def _utterance_pcm() -> np.ndarray:
    t = np.arange(UTTERANCE_MS * SAMPLE_RATE // 1000) / SAMPLE_RATE
    tone = (0.25 * 32767 * np.sin(2 * np.pi * 1000.0 * t)).astype(np.int16)
    silence = np.zeros(TRAILING_SILENCE_MS * SAMPLE_RATE // 1000, np.int16)
    return np.concatenate([tone, silence])


async def _run_cell(cell: Cell, grid: BenchGrid, seed: int,
                    delay_override: dict[Cell, tuple[float, float]] | None = None,
                    session_config: SessionConfig | None = None,
                    allow_real: bool = False) -> CellResult:
    asr_ms, chat_ms = grid.configured_delays(cell)
    injected_asr, injected_chat = (delay_override or {}).get(cell, (asr_ms, chat_ms))
    if session_config is None:
        config = SessionConfig(
            asr=AdapterSpec(kind="asr", fake_delay_ms=injected_asr, fake_script=["bench utterance"]),
            chat=AdapterSpec(kind="chat", fake_delay_ms=injected_chat, fake_script=["Noted."]),
            tts=AdapterSpec(kind="tts"),
            emotion=AdapterSpec(kind="emotion"),
            seed=seed,
        )
    else:
        config = session_config
    if not config.all_fake() and not allow_real:
        raise BackendNotFake("benchmark refuses non-fake backends by default (--allow-real)")

    session = Session(config, session_id=bytes(16), send_event=_sink_event, send_audio=_sink_audio)
    await session.start()
    pcm = _utterance_pcm()
    sample_clock = 0
    seq = 0
    try:
        for _ in range(grid.trials_per_cell):
            for start in range(0, pcm.size, FEED_CHUNK):
                chunk = pcm[start : start + FEED_CHUNK]
                seq += 1
                session.feed_audio(AudioFrame(
                    samples=chunk,
                    sample_rate_hz=SAMPLE_RATE,
                    timestamp_ms=sample_clock * 1000 // SAMPLE_RATE,
                    seq=seq,
                ))
                sample_clock += chunk.size
                await asyncio.sleep(0)  # let the consumer keep up
            await session.wait_turn_complete(timeout_s=120.0)
    finally:
        await session.close()

    totals = [record.total_ms for record in session.records]
    if len(totals) != grid.trials_per_cell:
        raise IncompleteGrid(f"cell {cell}: {len(totals)} of {grid.trials_per_cell} trials completed")
    mean_ms = statistics.fmean(totals)
    configured = injected_asr + injected_chat
    return CellResult(
        chat=cell[0],
        asr=cell[1],
        target_mean_s=grid.targets[cell].mean_s,
        configured_ms=configured,
        mean_s=mean_ms / 1000.0,
        std_s=statistics.stdev(totals) / 1000.0,
        overhead_ms=mean_ms - configured,
        tag=acceptability(mean_ms),
        totals_ms=totals,
    )


async def _sink_event(event: dict) -> None:
    pass


async def _sink_audio(frame: AudioFrame) -> None:
    pass


async def run_bench_async(grid: BenchGrid, seed: int = 0, parallel_sessions: bool = False,
                          delay_override: dict[Cell, tuple[float, float]] | None = None,
                          session_config: SessionConfig | None = None,
                          allow_real: bool = False) -> BenchReport:
    cells = [(c, a) for c in grid.chat_presets for a in grid.asr_presets]
    if parallel_sessions:
        results = await asyncio.gather(
            *(_run_cell(cell, grid, seed, delay_override, session_config, allow_real) for cell in cells))
    else:
        results = [await _run_cell(cell, grid, seed, delay_override, session_config, allow_real)
                   for cell in cells]
    report = BenchReport(grid=grid, cells=dict(zip(cells, results)), seed=seed)
    report.flags = check_monotonicity(report)
    return report


def run_bench(grid: BenchGrid, seed: int = 0, parallel_sessions: bool = False,
              delay_override: dict[Cell, tuple[float, float]] | None = None,
              session_config: SessionConfig | None = None,
              allow_real: bool = False) -> BenchReport:
    return asyncio.run(run_bench_async(grid, seed, parallel_sessions, delay_override,
                                       session_config, allow_real))


def check_monotonicity(report: BenchReport, tol_ms: float = MONOTONICITY_TOL_MS) -> list[MonotonicityFlag]:
    """Measured means must order the same way the configured delays do."""
    grid = report.grid
    for c in grid.chat_presets:
        for a in grid.asr_presets:
            if (c, a) not in report.cells:
                raise IncompleteGrid(f"missing cell {(c, a)}")
    flags: list[MonotonicityFlag] = []

    def consistent(cell_a: Cell, cell_b: Cell) -> bool:
        configured_delta = sum(grid.configured_delays(cell_b)) - sum(grid.configured_delays(cell_a))
        measured_delta = (report.cells[cell_b].mean_s - report.cells[cell_a].mean_s) * 1000.0
        if configured_delta > 0:
            return measured_delta >= -tol_ms
        if configured_delta < 0:
            return measured_delta <= tol_ms
        return abs(measured_delta) <= tol_ms

    for c in grid.chat_presets:
        for a1, a2 in zip(grid.asr_presets, grid.asr_presets[1:]):
            flags.append(MonotonicityFlag(
                "row", f"{c}: {a1} -> {a2}", consistent((c, a1), (c, a2))))
    for a in grid.asr_presets:
        for c1, c2 in zip(grid.chat_presets, grid.chat_presets[1:]):
            flags.append(MonotonicityFlag(
                "column", f"{a}: {c1} -> {c2}", consistent((c1, a), (c2, a))))
    # the row with the largest configured delay must measure largest per column
    for a in grid.asr_presets:
        top = max(grid.chat_presets, key=lambda c: sum(grid.configured_delays((c, a))))
        top_mean = report.cells[(top, a)].mean_s
        ok = all(report.cells[(c, a)].mean_s <= top_mean + tol_ms / 1000.0 for c in grid.chat_presets)
        flags.append(MonotonicityFlag("max_row", f"{a}: {top} maximal", ok))
    return flags


def render_table(report: BenchReport, fmt: str = "text") -> str:
    """Deterministic "mean ± std" table (seconds, 2 decimals)."""
    grid = report.grid
    if fmt == "csv":
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(["chat", "asr", "mean_s", "std_s", "overhead_ms", "tag"])
        for c in grid.chat_presets:
            for a in grid.asr_presets:
                cell = report.cells[(c, a)]
                writer.writerow([c, a, f"{cell.mean_s:.2f}", f"{cell.std_s:.2f}",
                                 f"{cell.overhead_ms:.1f}", cell.tag])
        return out.getvalue()

    def fmt_cell(cell: CellResult) -> str:
        return f"{cell.mean_s:.2f} ± {cell.std_s:.2f}"

    header = ["chat \\ asr"] + list(grid.asr_presets)
    rows = [[c] + [fmt_cell(report.cells[(c, a)]) for a in grid.asr_presets]
            for c in grid.chat_presets]
    if fmt == "markdown":
        lines = ["| " + " | ".join(header) + " |",
                 "|" + "|".join(["---"] * len(header)) + "|"]
        lines += ["| " + " | ".join(row) + " |" for row in rows]
        return "\n".join(lines) + "\n"
    if fmt == "text":
        widths = [max(len(str(row[i])) for row in [header] + rows) for i in range(len(header))]
        lines = ["  ".join(str(cell).ljust(w) for cell, w in zip(row, widths))
                 for row in [header] + rows]
        return "\n".join(lines) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


def zero_delay_overhead(trials: int = 20, seed: int = 0) -> float:
    """Mean measured total with zero-delay fakes: pure orchestration overhead."""
    grid = BenchGrid(
        chat_presets=["zero"],
        asr_presets=["zero"],
        targets={("zero", "zero"): CellTarget(0.0, 0.0)},
        trials_per_cell=trials,
    )
    report = run_bench(grid, seed=seed)
    return report.cells[("zero", "zero")].mean_s * 1000.0
