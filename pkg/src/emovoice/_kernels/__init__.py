"""Kernel selection: compiled Cython core when available, numpy fallback
otherwise. EMOVOICE_PURE=1 forces the fallback (used by tests and the
kernel benchmark).

Selection is per kernel: the compiled polyphase inner product beats the
numpy gather by ~30x, but numpy's vectorized rfft beats the compiled
Goertzel bank for band energy (see benchmarks/kernel_bench.py), so
band_power_pair always uses the numpy implementation and the Goertzel
version stays in the extension for comparison only.
"""

from __future__ import annotations

import os

from ._fallback import band_power_pair

if os.environ.get("EMOVOICE_PURE"):
    from ._fallback import poly_resample

    IMPLEMENTATION = "fallback"
else:
    try:
        from ._core import poly_resample  # type: ignore[no-redef]

        IMPLEMENTATION = "compiled"
    except ImportError:
        from ._fallback import poly_resample  # type: ignore[no-redef]

        IMPLEMENTATION = "fallback"

__all__ = ["poly_resample", "band_power_pair", "IMPLEMENTATION"]
