import os
import subprocess
import sys

import numpy as np
import pytest

from secrelay import _kernels


@pytest.fixture(scope="module")
def raw_block():
    rng = np.random.default_rng(7)
    return rng.standard_normal((257, 4, 64, 2))


def direct_gains(z, rho):
    h = (z[..., 0] + 1j * z[..., 1]) / np.sqrt(2)
    out = []
    for t in range(z.shape[0]):
        h_sr, h_hat, e, h_re = h[t]
        v = h_hat / np.linalg.norm(h_hat)
        h_rd = np.sqrt(rho) * h_hat + np.sqrt(1 - rho) * e
        out.append((np.vdot(h_sr, h_sr).real, abs(np.vdot(h_rd, v)) ** 2,
                    abs(np.vdot(h_re, v)) ** 2))
    return np.array(out).T


@pytest.mark.parametrize("rho", [0.0, 0.5, 0.9, 1.0])
def test_numpy_backend_matches_direct(raw_block, rho):
    np.testing.assert_allclose(_kernels.projection_gains_numpy(raw_block, rho),
                               direct_gains(raw_block, rho), rtol=1e-12)


@pytest.mark.skipif(not _kernels.NUMBA_AVAILABLE, reason="numba not installed")
@pytest.mark.parametrize("rho", [0.0, 0.3, 0.9, 1.0])
def test_backends_agree(raw_block, rho):
    np.testing.assert_allclose(_kernels.projection_gains_numba(raw_block, rho),
                               _kernels.projection_gains_numpy(raw_block, rho), rtol=1e-12)


def test_backend_selected_by_env():
    code = "from secrelay import _kernels; print(_kernels.BACKEND)"
    env = dict(os.environ, SECRELAY_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True)
    assert out.stdout.strip() == "numpy"
    env.pop("SECRELAY_DISABLE_NUMBA")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True,
                         check=True)
    assert out.stdout.strip() == ("numba" if _kernels.NUMBA_AVAILABLE else "numpy")
