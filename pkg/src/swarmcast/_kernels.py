"""Hot numeric kernels.

Each kernel is written in the numba-compatible subset of numpy (explicit
loops, float64 arrays) so the exact same source runs either JIT-compiled
or as plain Python. The active backend is chosen once at import time from
the ``SWARMCAST_BACKEND`` environment variable:

    auto   (default) -- use numba when importable, else pure numpy
    numba            -- require numba, fail loudly if missing
    numpy            -- force the pure-numpy path

``BACKENDS`` keeps both variants importable side by side so the benchmark
suite can compare them in one process.
"""

from __future__ import annotations

import os

import numpy as np

_CHOICE = os.environ.get("SWARMCAST_BACKEND", "auto").strip().lower() or "auto"
if _CHOICE not in ("auto", "numba", "numpy"):
    raise RuntimeError(
        f"SWARMCAST_BACKEND must be one of auto|numba|numpy, got {_CHOICE!r}"
    )

NUMBA_ENABLED = False
if _CHOICE in ("auto", "numba"):
    try:
        from numba import njit

        NUMBA_ENABLED = True
    except ImportError:
        if _CHOICE == "numba":
            raise


def _jacobi_eigh(A, rel_tol):
    """Cyclic Jacobi eigendecomposition of a symmetric matrix.

    Mutates a copy of ``A``; sweeps until the off-diagonal Frobenius mass
    drops below ``rel_tol`` times the Frobenius norm of the input.
    Returns (eigenvalues, eigenvector columns), unsorted.
    """
    n = A.shape[0]
    M = A.copy()
    V = np.eye(n)
    norm_a = 0.0
    for i in range(n):
        for j in range(n):
            norm_a += M[i, j] * M[i, j]
    norm_a = np.sqrt(norm_a)
    if norm_a == 0.0:
        return np.zeros(n), V
    thresh = rel_tol * norm_a
    for _sweep in range(200):
        off = 0.0
        for i in range(n - 1):
            for j in range(i + 1, n):
                off += 2.0 * M[i, j] * M[i, j]
        if np.sqrt(off) < thresh:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = M[p, q]
                if abs(apq) <= 1e-300:
                    M[p, q] = 0.0
                    M[q, p] = 0.0
                    continue
                tau = (M[q, q] - M[p, p]) / (2.0 * apq)
                if tau >= 0.0:
                    t = 1.0 / (tau + np.sqrt(1.0 + tau * tau))
                else:
                    t = -1.0 / (-tau + np.sqrt(1.0 + tau * tau))
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                app = M[p, p]
                aqq = M[q, q]
                M[p, p] = app - t * apq
                M[q, q] = aqq + t * apq
                M[p, q] = 0.0
                M[q, p] = 0.0
                for k in range(n):
                    if k != p and k != q:
                        akp = M[k, p]
                        akq = M[k, q]
                        M[k, p] = c * akp - s * akq
                        M[p, k] = M[k, p]
                        M[k, q] = s * akp + c * akq
                        M[q, k] = M[k, q]
                for k in range(n):
                    vkp = V[k, p]
                    vkq = V[k, q]
                    V[k, p] = c * vkp - s * vkq
                    V[k, q] = s * vkp + c * vkq
    w = np.empty(n)
    for i in range(n):
        w[i] = M[i, i]
    return w, V


def _rk4_advance(L, b, ux, uy, x0, y0, dt, nsteps):
    """Advance ``xdot = -L x + b*ux`` (and y likewise) by ``nsteps`` RK4 steps."""
    x = x0.copy()
    y = y0.copy()
    for _ in range(nsteps):
        k1x = b * ux - np.dot(L, x)
        k1y = b * uy - np.dot(L, y)
        x2 = x + 0.5 * dt * k1x
        y2 = y + 0.5 * dt * k1y
        k2x = b * ux - np.dot(L, x2)
        k2y = b * uy - np.dot(L, y2)
        x3 = x + 0.5 * dt * k2x
        y3 = y + 0.5 * dt * k2y
        k3x = b * ux - np.dot(L, x3)
        k3y = b * uy - np.dot(L, y3)
        x4 = x + dt * k3x
        y4 = y + dt * k3y
        k4x = b * ux - np.dot(L, x4)
        k4y = b * uy - np.dot(L, y4)
        x = x + (dt / 6.0) * (k1x + 2.0 * k2x + 2.0 * k3x + k4x)
        y = y + (dt / 6.0) * (k1y + 2.0 * k2y + 2.0 * k3y + k4y)
    return x, y


def _pairwise_dist2(x, y):
    """Full symmetric matrix of squared inter-agent distances."""
    n = x.shape[0]
    out = np.zeros((n, n))
    for i in range(n - 1):
        for j in range(i + 1, n):
            dx = x[i] - x[j]
            dy = y[i] - y[j]
            d2 = dx * dx + dy * dy
            out[i, j] = d2
            out[j, i] = d2
    return out


BACKENDS = {"numpy": {
    "jacobi_eigh": _jacobi_eigh,
    "rk4_advance": _rk4_advance,
    "pairwise_dist2": _pairwise_dist2,
}}

if NUMBA_ENABLED:
    BACKENDS["numba"] = {
        "jacobi_eigh": njit(cache=True)(_jacobi_eigh),
        "rk4_advance": njit(cache=True)(_rk4_advance),
        "pairwise_dist2": njit(cache=True)(_pairwise_dist2),
    }

ACTIVE = "numba" if NUMBA_ENABLED else "numpy"
jacobi_eigh = BACKENDS[ACTIVE]["jacobi_eigh"]
rk4_advance = BACKENDS[ACTIVE]["rk4_advance"]
pairwise_dist2 = BACKENDS[ACTIVE]["pairwise_dist2"]


def warmup():
    """Trigger JIT compilation on tiny inputs so later timings are steady."""
    m = np.array([[2.0, -1.0], [-1.0, 2.0]])
    jacobi_eigh(m, 1e-14)
    rk4_advance(m, np.ones(2), 1.0, 0.0, np.zeros(2), np.zeros(2), 1e-3, 2)
    pairwise_dist2(np.zeros(2), np.ones(2))
