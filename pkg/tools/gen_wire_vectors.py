#!/usr/bin/env python3
"""Regenerate the shared wire-conformance vector file.

Vectors are hand-packed here (independently of the production codec) and
shipped in the package data so both the server tests and the browser client
tests validate against the same bytes:

    python3 tools/gen_wire_vectors.py
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

OUT = Path(__file__).resolve().parent.parent / "src" / "emovoice" / "data" / "wire_vectors.json"


def pack(kind: int, session_id: bytes, seq: int, ts: int, payload: bytes,
         magic: bytes = b"FC", version: int = 1) -> bytes:
    return (magic + struct.pack(">BB", version, kind) + session_id
            + struct.pack(">I", seq) + struct.pack(">Q", ts)
            + struct.pack(">I", len(payload)) + payload)


def main() -> None:
    rng = np.random.default_rng(20240)
    valid = []
    for i in range(56):
        kind = int(rng.choice([0, 1, 2, 3, 4]))
        session_id = rng.integers(0, 256, 16, dtype=np.uint8).tobytes()
        seq = int(rng.integers(0, 2**32))
        ts = int(rng.integers(0, 2**63))
        size = int(rng.choice([0, 1, 4, 6, 32, 500, 4100]))
        payload = rng.integers(0, 256, size, dtype=np.uint8).tobytes()
        raw = pack(kind, session_id, seq, ts, payload)
        valid.append({
            "hex": raw.hex(),
            "kind": kind,
            "session_id_hex": session_id.hex(),
            "seq": seq,
            "timestamp_ms": str(ts),
            "payload_hex": payload.hex(),
        })

    base_sid = bytes(range(16))
    good = pack(0, base_sid, 1, 1000, b"\x00\x00\x3e\x80" + b"\x01\x02")
    invalid = []

    def bad(raw: bytes, error: str) -> None:
        invalid.append({"hex": raw.hex(), "error": error})

    # truncated: shorter than the fixed 36-byte header
    for cut in (0, 1, 8, 20, 35):
        bad(good[:cut], "truncated_payload")
    # payload_len disagrees with the actual remaining bytes
    bad(good + b"\xff", "truncated_payload")
    bad(good[:-1], "truncated_payload")
    bad(good[:-6], "truncated_payload")
    # bad magic
    for magic in (b"XX", b"fc", b"CF", b"\x00\x00"):
        bad(pack(0, base_sid, 1, 1000, b"", magic=magic), "bad_magic")
    # unsupported version
    for version in (0, 2, 7, 255):
        bad(pack(2, base_sid, 1, 1000, b"", version=version), "unsupported_version")
    # unknown kind
    for kind in (5, 6, 100, 254, 255):
        bad(pack(kind, base_sid, 1, 1000, b""), "unknown_kind")

    OUT.parent.mkdir(parents=True, exist_ok=True)
    OUT.write_text(json.dumps({"valid": valid, "invalid": invalid}, indent=1) + "\n")
    print(f"wrote {len(valid)} valid / {len(invalid)} invalid vectors to {OUT}")


if __name__ == "__main__":
    main()
