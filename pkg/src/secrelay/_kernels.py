"""Per-trial channel reductions, numba-compiled with a pure numpy fallback.

Both backends take a block of raw standard normals of shape
``(n_trials, 4, n_r, 2)``: the four vectors are ``h_sr``, ``h_rd_hat``,
``e`` and ``h_re`` with the last axis holding real and imaginary parts.
The complex entries are ``(z[..., 0] + 1j*z[..., 1]) / sqrt(2)`` so that
each has unit total variance.

They return the three scalar gains each trial needs:

* ``g_sr = ||h_sr||^2``
* ``g_rd = |h_rd^H v|^2`` with ``h_rd = sqrt(rho) h_rd_hat + sqrt(1-rho) e``
* ``g_re = |h_re^H v|^2``

where ``v = h_rd_hat / ||h_rd_hat||``.

Set ``SECRELAY_DISABLE_NUMBA=1`` to force the numpy path.
"""

import math
import os

import numpy as np

__all__ = ["BACKEND", "NUMBA_AVAILABLE", "projection_gains",
           "projection_gains_numpy", "projection_gains_numba"]


def projection_gains_numpy(z, rho):
    z = np.asarray(z, dtype=np.float64)
    h = (z[..., 0] + 1j * z[..., 1]) * math.sqrt(0.5)
    h_sr, h_hat, err, h_re = h[:, 0], h[:, 1], h[:, 2], h[:, 3]
    g_sr = np.einsum("ij,ij->i", h_sr.real, h_sr.real) + np.einsum("ij,ij->i", h_sr.imag, h_sr.imag)
    hat_norm2 = np.einsum("ij,ij->i", h_hat.real, h_hat.real) + np.einsum("ij,ij->i", h_hat.imag, h_hat.imag)
    h_rd = math.sqrt(rho) * h_hat + math.sqrt(1.0 - rho) * err
    ip_rd = np.einsum("ij,ij->i", h_rd.conj(), h_hat)
    ip_re = np.einsum("ij,ij->i", h_re.conj(), h_hat)
    g_rd = (ip_rd.real**2 + ip_rd.imag**2) / hat_norm2
    g_re = (ip_re.real**2 + ip_re.imag**2) / hat_norm2
    return g_sr, g_rd, g_re


try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover
    NUMBA_AVAILABLE = False


if NUMBA_AVAILABLE:

    @njit(cache=True, nogil=True)
    def projection_gains_numba(z, rho):
        n, _, n_r, _ = z.shape
        s = math.sqrt(0.5)
        a = math.sqrt(rho)
        b = math.sqrt(1.0 - rho)
        g_sr = np.empty(n)
        g_rd = np.empty(n)
        g_re = np.empty(n)
        for t in range(n):
            acc_sr = 0.0
            norm2 = 0.0
            rd_re = 0.0
            rd_im = 0.0
            re_re = 0.0
            re_im = 0.0
            for k in range(n_r):
                sr_x = z[t, 0, k, 0] * s
                sr_y = z[t, 0, k, 1] * s
                hx = z[t, 1, k, 0] * s
                hy = z[t, 1, k, 1] * s
                ex = z[t, 2, k, 0] * s
                ey = z[t, 2, k, 1] * s
                qx = z[t, 3, k, 0] * s
                qy = z[t, 3, k, 1] * s
                acc_sr += sr_x * sr_x + sr_y * sr_y
                norm2 += hx * hx + hy * hy
                dx = a * hx + b * ex
                dy = a * hy + b * ey
                # conj(d) * h
                rd_re += dx * hx + dy * hy
                rd_im += dx * hy - dy * hx
                re_re += qx * hx + qy * hy
                re_im += qx * hy - qy * hx
            g_sr[t] = acc_sr
            g_rd[t] = (rd_re * rd_re + rd_im * rd_im) / norm2
            g_re[t] = (re_re * re_re + re_im * re_im) / norm2
        return g_sr, g_rd, g_re

else:  # pragma: no cover
    projection_gains_numba = None


_DISABLED = os.environ.get("SECRELAY_DISABLE_NUMBA", "").strip().lower() in {"1", "true", "yes", "on"}

if NUMBA_AVAILABLE and not _DISABLED:
    BACKEND = "numba"

    def projection_gains(z, rho):
        return projection_gains_numba(np.ascontiguousarray(z, dtype=np.float64), float(rho))

else:
    BACKEND = "numpy"
    projection_gains = projection_gains_numpy
