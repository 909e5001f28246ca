import subprocess
import sys

import numpy as np
import pytest

from swarmcast import _kernels


def test_active_backend_selected():
    assert _kernels.ACTIVE in _kernels.BACKENDS


@pytest.mark.skipif(
    "numba" not in _kernels.BACKENDS, reason="numba backend not available"
)
def test_backends_agree(rng):
    py = _kernels.BACKENDS["numpy"]
    nb = _kernels.BACKENDS["numba"]
    for _ in range(10):
        n = int(rng.integers(2, 10))
        a = rng.normal(size=(n, n))
        m = np.ascontiguousarray(a + a.T)
        w1, v1 = py["jacobi_eigh"](m, 1e-14)
        w2, v2 = nb["jacobi_eigh"](m, 1e-14)
        assert np.abs(np.sort(w1) - np.sort(w2)).max() < 1e-12

        L = np.ascontiguousarray(np.diag(np.abs(a).sum(1)) - np.abs(a))
        b = (rng.random(n) < 0.5).astype(float)
        x0 = rng.normal(size=n)
        y0 = rng.normal(size=n)
        x1, y1 = py["rk4_advance"](L, b, 1.0, -0.5, x0, y0, 1e-2, 200)
        x2, y2 = nb["rk4_advance"](L, b, 1.0, -0.5, x0, y0, 1e-2, 200)
        assert np.abs(x1 - x2).max() < 1e-12
        assert np.abs(y1 - y2).max() < 1e-12

        d1 = py["pairwise_dist2"](x0, y0)
        d2 = nb["pairwise_dist2"](x0, y0)
        assert np.abs(d1 - d2).max() == 0.0


def test_env_flag_forces_numpy_backend():
    code = (
        "import swarmcast._kernels as k; print(k.ACTIVE); "
        "print('numba' in k.BACKENDS)"
    )
    out = subprocess.run(
        [sys.executable, "-c", code],
        capture_output=True,
        text=True,
        env={"PATH": "/usr/bin:/bin", "SWARMCAST_BACKEND": "numpy"},
    )
    assert out.returncode == 0, out.stderr
    lines = out.stdout.split()
    assert lines[0] == "numpy"
    assert lines[1] == "False"


def test_bad_env_flag_rejected():
    code = "import swarmcast._kernels"
    out = subprocess.run(
        [sys.executable, "-c", code],
        capture_output=True,
        text=True,
        env={"PATH": "/usr/bin:/bin", "SWARMCAST_BACKEND": "quantum"},
    )
    assert out.returncode != 0
    assert "SWARMCAST_BACKEND" in out.stderr
