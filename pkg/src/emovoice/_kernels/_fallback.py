"""Pure-numpy implementations of the hot kernels.

Selected at import time when the compiled extension is unavailable or when
EMOVOICE_PURE=1 is set. Must stay numerically equivalent to _core.pyx
(same formulas; summation order may differ in the last ulps).
"""

from __future__ import annotations

import numpy as np


def poly_resample(xpad: np.ndarray, phases: np.ndarray, down: int, center: int, n_out: int) -> np.ndarray:
    """Polyphase FIR evaluation for rational-rate resampling.

    xpad is the input padded with n_taps zeros on the left (so xpad[k + n_taps]
    is input sample k) and enough zeros on the right. phases is the (L, T)
    per-phase coefficient table; output m draws phase (m*down + center) % L at
    input offset (m*down + center) // L.
    """
    n_phases, n_taps = phases.shape
    m = np.arange(n_out, dtype=np.int64)
    q = m * down + center
    k0 = q // n_phases
    r = q - k0 * n_phases
    base = k0 + n_taps
    # gather the reversed tap window for every output sample: (n_out, T)
    idx = base[:, None] - np.arange(n_taps, dtype=np.int64)[None, :]
    return np.einsum("ij,ij->i", xpad[idx], phases[r])


def band_power_pair(x: np.ndarray, k_lo: int, k_hi: int) -> tuple[float, float]:
    """Total time-domain energy and in-band energy of one analysis frame.

    Band energy is computed over DFT bins k_lo..k_hi (inclusive, neither DC
    nor Nyquist) and converted to time-domain units via Parseval, so the
    band/total ratio lies in [0, 1].
    """
    n = x.size
    total = float(np.dot(x, x))
    if total == 0.0 or k_hi < k_lo:
        return total, 0.0
    spectrum = np.fft.rfft(x)
    bins = spectrum[k_lo : k_hi + 1]
    band = 2.0 * float(np.sum(bins.real**2 + bins.imag**2)) / n
    return total, band
