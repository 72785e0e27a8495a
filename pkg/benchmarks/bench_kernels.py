"""Benchmark the JIT-compiled blend kernels against the pure-numpy path.

Run:  python benchmarks/bench_kernels.py

The blend map is the hot spot when profiles evaluate many latent points
(every Jacobian costs 2m evaluations per sample).  This times both
implementations on batch evaluation and on per-point closed-form
Jacobians, and checks they agree.  Set GENDENSITY_NO_NUMBA=1 to confirm
the package itself falls back to the numpy path.
"""
import time

import numpy as np

from gendensity import _kernels
from gendensity._kernels import (
    blend_eval_numpy,
    blend_jacobian_numpy,
)

ANCHOR_X = np.array([0.0, 0.6, 1.25, 1.95])
ANCHORS = np.stack([ANCHOR_X, np.zeros(4)], axis=1)
CENTERS = np.stack([2.0 + 2.0 * ANCHOR_X, np.zeros(4)], axis=1)
SHARPNESS = 50.0


def timeit(fn, repeats=7):
    best = np.inf
    for _ in range(repeats):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def main():
    rng = np.random.default_rng(0)
    batch = rng.standard_normal((200_000, 2))
    points = rng.standard_normal((2_000, 2))

    active = _kernels.backend_name()
    print(f"active backend: {active}")
    if active == "numpy":
        print("numba unavailable or disabled; timing the numpy path against itself")

    # warm-up (includes JIT compilation when numba is active)
    _kernels.blend_eval(batch[:16], ANCHORS, CENTERS, SHARPNESS)
    _kernels.blend_jacobian(points[0], ANCHORS, CENTERS, SHARPNESS)

    fast_eval = timeit(lambda: _kernels.blend_eval(batch, ANCHORS, CENTERS, SHARPNESS))
    ref_eval = timeit(lambda: blend_eval_numpy(batch, ANCHORS, CENTERS, SHARPNESS))

    def fast_jacs():
        for z in points:
            _kernels.blend_jacobian(z, ANCHORS, CENTERS, SHARPNESS)

    def ref_jacs():
        for z in points:
            blend_jacobian_numpy(z, ANCHORS, CENTERS, SHARPNESS)

    fast_j = timeit(fast_jacs)
    ref_j = timeit(ref_jacs)

    a = _kernels.blend_eval(batch, ANCHORS, CENTERS, SHARPNESS)
    b = blend_eval_numpy(batch, ANCHORS, CENTERS, SHARPNESS)
    max_dev = float(np.max(np.abs(a - b)))

    print()
    print(f"{'kernel':<28}{active:>12}{'numpy':>12}{'speedup':>10}")
    print(f"{'eval, batch 200k':<28}{fast_eval:>11.4f}s{ref_eval:>11.4f}s{ref_eval / fast_eval:>9.1f}x")
    print(f"{'jacobian, 2k points':<28}{fast_j:>11.4f}s{ref_j:>11.4f}s{ref_j / fast_j:>9.1f}x")
    print()
    print(f"max |{active} - numpy| on the eval batch: {max_dev:.3e}")


if __name__ == "__main__":
    main()
