import subprocess
import sys

import numpy as np
import pytest

from emovoice import _kernels
from emovoice._kernels import _fallback

try:
    from emovoice._kernels import _core
except ImportError:
    _core = None

needs_compiled = pytest.mark.skipif(_core is None, reason="compiled kernel not built")


def poly_inputs(seed=0, n=2048):
    rng = np.random.default_rng(seed)
    from emovoice.transport.resample import Resampler44to16

    resampler = Resampler44to16()
    x = rng.normal(0, 8000, n)
    xpad = np.zeros(n + 2 * resampler._n_taps + 64)
    xpad[resampler._n_taps : resampler._n_taps + n] = x
    n_out = int(round(n * 160 / 441))
    return xpad, resampler._phases, 441, resampler._center, n_out


@needs_compiled
def test_poly_resample_parity():
    args = poly_inputs()
    compiled = _core.poly_resample(*args)
    fallback = _fallback.poly_resample(*args)
    np.testing.assert_allclose(compiled, fallback, atol=1e-9)


@needs_compiled
def test_band_power_parity():
    rng = np.random.default_rng(1)
    for _ in range(20):
        x = np.ascontiguousarray(rng.normal(0, 0.3, 480))
        total_c, band_c = _core.band_power_pair(x, 9, 102)
        total_f, band_f = _fallback.band_power_pair(x, 9, 102)
        assert total_c == pytest.approx(total_f, rel=1e-12)
        assert band_c == pytest.approx(band_f, rel=1e-9)


def test_band_power_zero_frame():
    x = np.zeros(480)
    assert _fallback.band_power_pair(x, 9, 102) == (0.0, 0.0)
    if _core is not None:
        assert _core.band_power_pair(x, 9, 102) == (0.0, 0.0)


def test_selection_env_forces_fallback():
    code = (
        "import emovoice._kernels as k; print(k.IMPLEMENTATION)"
    )
    forced = subprocess.run(
        [sys.executable, "-c", code],
        capture_output=True, text=True, env={"EMOVOICE_PURE": "1", "PATH": "/usr/bin:/bin"},
    )
    assert forced.stdout.strip() == "fallback"


def test_active_implementation_exposed():
    assert _kernels.IMPLEMENTATION in ("compiled", "fallback")
    assert callable(_kernels.poly_resample)
    assert callable(_kernels.band_power_pair)
