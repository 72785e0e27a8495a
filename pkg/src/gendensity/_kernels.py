"""Hot numeric kernels with an optional numba-compiled fast path.

The softmax-blend map (the ``memorizer`` builtin and its closed-form
Jacobian) dominates runtime when profiles evaluate thousands of latent
points, so those two kernels are JIT-compiled when numba is importable.
Set ``GENDENSITY_NO_NUMBA=1`` to force the pure-numpy implementations;
``backend_name()`` reports which path is active.  Both paths compute the
same quantities in float64; ``benchmarks/bench_kernels.py`` compares them.
"""
from __future__ import annotations

import os

import numpy as np

_FORCE_NUMPY = os.environ.get("GENDENSITY_NO_NUMBA", "") not in ("", "0")

try:  # pragma: no cover - exercised indirectly via backend_name()
    if _FORCE_NUMPY:
        raise ImportError
    from numba import njit

    _HAVE_NUMBA = True
except ImportError:
    _HAVE_NUMBA = False


def backend_name() -> str:
    return "numba" if _HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------------------
# pure-numpy reference implementations

def _blend_eval_np(zs: np.ndarray, anchors: np.ndarray, centers: np.ndarray,
                   sharpness: float) -> np.ndarray:
    # zs: (B, m) -> (B, n); weights softmax(-sharpness * ||z - a_j||^2)
    d2 = ((zs[:, None, :] - anchors[None, :, :]) ** 2).sum(axis=2)  # (B, k)
    g = -sharpness * d2
    g -= g.max(axis=1, keepdims=True)
    w = np.exp(g)
    w /= w.sum(axis=1, keepdims=True)
    return w @ centers


def _blend_jacobian_np(z: np.ndarray, anchors: np.ndarray, centers: np.ndarray,
                       sharpness: float) -> np.ndarray:
    d2 = ((z[None, :] - anchors) ** 2).sum(axis=1)  # (k,)
    g = -sharpness * d2
    g -= g.max()
    w = np.exp(g)
    w /= w.sum()
    dg = -2.0 * sharpness * (z[None, :] - anchors)  # (k, m)
    gbar = w @ dg  # (m,)
    # J = sum_j w_j c_j (dg_j - gbar)^T
    return (centers * w[:, None]).T @ (dg - gbar[None, :])


# ---------------------------------------------------------------------------
# numba fast path (loop form; fastmath stays off so results are stable)

if _HAVE_NUMBA:

    @njit(cache=True)
    def _blend_eval_nb(zs, anchors, centers, sharpness):  # pragma: no cover
        B, m = zs.shape
        k, n = centers.shape
        out = np.zeros((B, n))
        g = np.empty(k)
        for b in range(B):
            gmax = -np.inf
            for j in range(k):
                acc = 0.0
                for q in range(m):
                    d = zs[b, q] - anchors[j, q]
                    acc += d * d
                g[j] = -sharpness * acc
                if g[j] > gmax:
                    gmax = g[j]
            wsum = 0.0
            for j in range(k):
                g[j] = np.exp(g[j] - gmax)
                wsum += g[j]
            for j in range(k):
                wj = g[j] / wsum
                for q in range(n):
                    out[b, q] += wj * centers[j, q]
        return out

    @njit(cache=True)
    def _blend_jacobian_nb(z, anchors, centers, sharpness):  # pragma: no cover
        k, m = anchors.shape
        n = centers.shape[1]
        g = np.empty(k)
        gmax = -np.inf
        for j in range(k):
            acc = 0.0
            for q in range(m):
                d = z[q] - anchors[j, q]
                acc += d * d
            g[j] = -sharpness * acc
            if g[j] > gmax:
                gmax = g[j]
        wsum = 0.0
        for j in range(k):
            g[j] = np.exp(g[j] - gmax)
            wsum += g[j]
        w = g / wsum
        dg = np.empty((k, m))
        for j in range(k):
            for q in range(m):
                dg[j, q] = -2.0 * sharpness * (z[q] - anchors[j, q])
        gbar = np.zeros(m)
        for j in range(k):
            for q in range(m):
                gbar[q] += w[j] * dg[j, q]
        J = np.zeros((n, m))
        for j in range(k):
            for r in range(n):
                cw = w[j] * centers[j, r]
                for q in range(m):
                    J[r, q] += cw * (dg[j, q] - gbar[q])
        return J

    blend_eval = _blend_eval_nb
    blend_jacobian = _blend_jacobian_nb
else:
    blend_eval = _blend_eval_np
    blend_jacobian = _blend_jacobian_np

# numpy references stay importable for the benchmark and for tests that pin
# the two paths against each other.
blend_eval_numpy = _blend_eval_np
blend_jacobian_numpy = _blend_jacobian_np
