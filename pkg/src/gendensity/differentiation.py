"""Central-difference Jacobians of a generator, column by column.

The generator stays a black box: no autodiff, just 2m evaluations per
point.  Each column divides by the step that was actually realized in
floating point (``(z + eps) - (z - eps)``), which keeps affine maps exact
instead of leaking the rounding of ``z + eps`` into the result.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InputDimensionError, NumericalError
from .generator import GeneratorHandle, _as_vector

DEFAULT_EPSILON = 1e-5  # balances O(eps^2) truncation vs O(u/eps) roundoff


@dataclass(frozen=True)
class FdConfig:
    """Central-difference step configuration (latent-space units)."""

    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        if not (0.0 < self.epsilon < 1.0):
            raise InputDimensionError(
                f"epsilon must lie in (0, 1), got {self.epsilon}"
            )


@dataclass(frozen=True)
class JacobianMatrix:
    entries: np.ndarray  # (output_dim, latent_dim)
    base_point: np.ndarray
    epsilon_used: float


def jacobian(g: GeneratorHandle, z, cfg: FdConfig = FdConfig()) -> JacobianMatrix:
    """Estimate J_f at z: column j is (f(z + eps e_j) - f(z - eps e_j)) / step.

    Costs exactly 2m generator evaluations, issued as one batch.  Columns
    are independent, so the result does not depend on evaluation order.
    """
    z = _as_vector(z, g.latent_dim, "z")
    m = g.latent_dim
    eps = cfg.epsilon

    plus = np.repeat(z[None, :], m, axis=0)
    minus = plus.copy()
    plus[np.arange(m), np.arange(m)] += eps
    minus[np.arange(m), np.arange(m)] -= eps
    steps = plus[np.arange(m), np.arange(m)] - minus[np.arange(m), np.arange(m)]

    outputs = g.evaluate_batch(np.vstack([plus, minus]))
    fp, fm = outputs[:m], outputs[m:]

    bad = ~np.isfinite(fp).all(axis=1) | ~np.isfinite(fm).all(axis=1)
    if bad.any():
        col = int(np.nonzero(bad)[0][0])
        raise NumericalError(
            f"generator returned non-finite output while differencing column {col}"
        )

    entries = ((fp - fm) / steps[:, None]).T
    return JacobianMatrix(entries=entries, base_point=z.copy(), epsilon_used=eps)
