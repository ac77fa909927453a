import json
import wave

import numpy as np
import pytest
from click.testing import CliRunner

from emovoice.cli import main
from emovoice.config import load_config


@pytest.fixture
def runner():
    return CliRunner()


def write_wav(path, rate=16000, speech_ms=900, silence_ms=700):
    tone = (0.25 * 32767 * np.sin(2 * np.pi * 1000 * np.arange(speech_ms * rate // 1000) / rate))
    pcm = np.concatenate([tone, np.zeros(silence_ms * rate // 1000)]).astype("<i2")
    with wave.open(str(path), "wb") as wav:
        wav.setnchannels(1)
        wav.setsampwidth(2)
        wav.setframerate(rate)
        wav.writeframes(pcm.tobytes())


def test_endpoint_emit_json(tmp_path, runner):
    wav_path = tmp_path / "utterance.wav"
    write_wav(wav_path)
    result = runner.invoke(main, ["endpoint", "--wav", str(wav_path), "--emit-json"])
    assert result.exit_code == 0, result.output
    lines = [json.loads(line) for line in result.output.strip().splitlines()]
    assert len(lines) == 1
    assert set(lines[0]) == {"start_ms", "end_ms", "verifier_score"}
    assert lines[0]["end_ms"] - lines[0]["start_ms"] >= 250


def test_endpoint_44k_wav(tmp_path, runner):
    wav_path = tmp_path / "utterance44.wav"
    write_wav(wav_path, rate=44100)
    result = runner.invoke(main, ["endpoint", "--wav", str(wav_path), "--emit-json"])
    assert result.exit_code == 0, result.output
    assert len(result.output.strip().splitlines()) == 1


def test_endpoint_rejects_unsupported_rate(tmp_path, runner):
    wav_path = tmp_path / "bad.wav"
    write_wav(wav_path, rate=8000)
    result = runner.invoke(main, ["endpoint", "--wav", str(wav_path)])
    assert result.exit_code != 0
    assert "8000" in result.output


def test_bench_cli_small_grid(tmp_path, runner):
    grid_path = tmp_path / "grid.json"
    grid_path.write_text(json.dumps({
        "cells": {
            "small": {"x": {"mean_s": 0.03, "std_s": 0.0}, "y": {"mean_s": 0.05, "std_s": 0.0}},
            "large": {"x": {"mean_s": 0.08, "std_s": 0.0}, "y": {"mean_s": 0.12, "std_s": 0.0}},
        }
    }))
    out_path = tmp_path / "table.md"
    result = runner.invoke(main, [
        "bench", "--grid", str(grid_path), "--trials", "2", "--format", "md",
        "--seed", "3", "--out", str(out_path),
    ])
    assert result.exit_code == 0, result.output
    assert "0 failed" in result.output
    table = out_path.read_text()
    assert table.startswith("| chat \\ asr |")
    assert "±" in table


def test_bench_cli_refuses_real_backends(tmp_path, runner):
    config_path = tmp_path / "real.yaml"
    config_path.write_text(
        "adapters:\n  chat: {impl: http, http_endpoint: 'http://backend.test'}\n")
    result = runner.invoke(main, ["bench", "--config", str(config_path), "--trials", "2"])
    assert result.exit_code != 0
    assert "refuses non-fake" in result.output


def test_load_config_roundtrip(tmp_path):
    config_path = tmp_path / "server.yaml"
    config_path.write_text("""
port: 9100
log_level: debug
adapters:
  asr: {impl: fake, fake_delay_ms: 150, fake_script: [hi]}
  chat: {impl: http, http_endpoint: "http://chat.test", timeout_ms: 2000}
vad:
  hangover_ms: 400
  preroll_ms: 240
prompt:
  persona: "Test persona."
  max_chars: 4000
emotion_window_ms: 2500
seed: 42
""")
    config = load_config(str(config_path))
    assert config.port == 9100
    assert config.session.asr.fake_delay_ms == 150
    assert config.session.chat.impl == "http"
    assert config.session.vad.hangover_ms == 400
    assert config.session.persona == "Test persona."
    assert config.session.instruction  # default loaded
    assert config.session.max_prompt_chars == 4000
    assert config.session.emotion_window_ms == 2500

    forced = load_config(str(config_path), fake_backends=True)
    assert forced.session.chat.impl == "fake"
    assert forced.session.all_fake()


def test_serve_help_flags(runner):
    result = runner.invoke(main, ["serve", "--help"])
    assert result.exit_code == 0
    for flag in ("--port", "--config", "--fake-backends", "--log-level"):
        assert flag in result.output
