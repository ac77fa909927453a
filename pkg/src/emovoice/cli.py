"""Command line entry points: serve, endpoint, bench."""

from __future__ import annotations

import asyncio
import json
import logging
import sys
import wave

import click
import numpy as np

from .bench import BenchGrid, render_table, run_bench
from .config import load_config
from .errors import BackendNotFake, UnsupportedRate
from .transport import AudioFrame, resample_to_16k
from .vad import StreamEndpointer, VadConfig


@click.group()
def main() -> None:
    """Real-time emotion-aware voice dialogue server and tools."""


@main.command()
@click.option("--port", type=int, default=None, help="Listen port (overrides config).")
@click.option("--host", default=None, help="Bind address (overrides config).")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--fake-backends", is_flag=True, help="Force all adapters to deterministic fakes.")
@click.option("--log-level", default=None, help="debug / info / warning / error.")
@click.option("--static-dir", default=None, help="Serve this directory at / (the browser client build).")
def serve(port, host, config_path, fake_backends, log_level, static_dir) -> None:
    """Run the websocket server."""
    config = load_config(config_path, fake_backends=fake_backends)
    if port is not None:
        config.port = port
    if host is not None:
        config.host = host
    if log_level is not None:
        config.log_level = log_level
    if static_dir is not None:
        config.static_dir = static_dir
    logging.basicConfig(level=config.log_level.upper(),
                        format="%(asctime)s %(levelname)s %(name)s: %(message)s")
    from .server import run_server

    try:
        asyncio.run(run_server(config))
    except KeyboardInterrupt:
        pass


def _load_wav(path: str) -> AudioFrame:
    with wave.open(path, "rb") as wav:
        if wav.getsampwidth() != 2:
            raise click.ClickException("only 16-bit PCM WAV files are supported")
        rate = wav.getframerate()
        channels = wav.getnchannels()
        pcm = np.frombuffer(wav.readframes(wav.getnframes()), dtype="<i2")
    if channels > 1:
        pcm = pcm.reshape(-1, channels)[:, 0].copy()
    try:
        return AudioFrame(pcm, rate, 0, 1)
    except UnsupportedRate:
        raise click.ClickException(f"sample rate {rate} not supported (16000 or 44100)") from None


@main.command()
@click.option("--wav", "wav_path", type=click.Path(exists=True), required=True)
@click.option("--config", "config_path", type=click.Path(exists=True), default=None)
@click.option("--emit-json", is_flag=True, help="Print one JSON object per emitted segment.")
def endpoint(wav_path, config_path, emit_json) -> None:
    """Run the offline endpointer over a WAV file."""
    vad_config = VadConfig()
    if config_path is not None:
        vad_config = load_config(config_path).session.vad
    frame = resample_to_16k(_load_wav(wav_path))
    stream = StreamEndpointer(vad_config)
    segments = stream.push(frame.samples, timestamp_ms=0.0)
    tail = stream.flush()
    if tail is not None:
        segments.append(tail)
    if emit_json:
        for segment in segments:
            click.echo(json.dumps({
                "start_ms": segment.start_ms,
                "end_ms": segment.end_ms,
                "verifier_score": round(segment.verifier_score, 4),
            }))
    else:
        click.echo(f"{len(segments)} segment(s)")
        for segment in segments:
            click.echo(f"  {segment.start_ms:9.1f} .. {segment.end_ms:9.1f} ms"
                       f"  score={segment.verifier_score:.3f}")


@main.command()
@click.option("--grid", "grid_path", type=click.Path(exists=True), default=None,
              help="Latency grid JSON; defaults to the shipped transcription.")
@click.option("--trials", type=int, default=20, show_default=True)
@click.option("--format", "fmt", type=click.Choice(["text", "csv", "markdown", "md"]), default="text")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--out", "out_path", type=click.Path(), default=None, help="Also write the table here.")
@click.option("--overhead-allowance", type=float, default=0.0, show_default=True,
              help="Milliseconds subtracted from each cell target before configuring delays.")
@click.option("--parallel-sessions", is_flag=True,
              help="Run cells concurrently (isolation exercise; not for headline numbers).")
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="Benchmark the adapters from this config instead of presets (needs --allow-real).")
@click.option("--allow-real", is_flag=True,
              help="Permit non-fake backends; results are NOT reproducible.")
def bench(grid_path, trials, fmt, seed, out_path, overhead_allowance, parallel_sessions,
          config_path, allow_real) -> None:
    """Run the latency benchmark grid; exits nonzero on monotonicity failure."""
    if fmt == "md":
        fmt = "markdown"
    grid = BenchGrid.from_file(grid_path, trials=trials, overhead_allowance_ms=overhead_allowance)
    session_config = load_config(config_path).session if config_path else None
    try:
        report = run_bench(grid, seed=seed, parallel_sessions=parallel_sessions,
                           session_config=session_config, allow_real=allow_real)
    except BackendNotFake as exc:
        raise click.ClickException(str(exc)) from None
    if session_config is not None and not session_config.all_fake():
        click.echo("# WARNING: real backends in play; numbers are not reproducible")
    table = render_table(report, fmt)
    click.echo(table, nl=False)
    failures = [flag for flag in report.flags if not flag.ok]
    summary = f"# {len(report.flags)} monotonicity flags, {len(failures)} failed"
    click.echo(summary)
    for flag in failures:
        click.echo(f"#   FAIL {flag.axis}: {flag.description}")
    if out_path is not None:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(table)
    if failures:
        sys.exit(1)


if __name__ == "__main__":
    main()
