"""SVD of the Jacobian: effective rank, tangent bases, volume factor.

The rank threshold is relative to the largest singular value so the policy
survives rescaling of the generator; values sitting exactly on the
threshold count as nonzero.  Rank is meant to be recomputed at every query
point rather than fixed globally (local effective dimension varies), with
``fixed_rank`` available for sensitivity studies.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .differentiation import JacobianMatrix
from .errors import DegeneratePointError, InputDimensionError, NumericalError

DEFAULT_RELATIVE_THRESHOLD = 1e-6


@dataclass(frozen=True)
class RankPolicy:
    """How many singular values count as nonzero."""

    relative_threshold: float = DEFAULT_RELATIVE_THRESHOLD
    fixed_rank: Optional[int] = None

    def __post_init__(self):
        if not (0.0 < self.relative_threshold < 1.0):
            raise InputDimensionError(
                f"relative_threshold must lie in (0, 1), got {self.relative_threshold}"
            )
        if self.fixed_rank is not None and self.fixed_rank < 0:
            raise InputDimensionError("fixed_rank must be non-negative")


@dataclass(frozen=True)
class SpectrumResult:
    singular_values: np.ndarray  # non-increasing, length min(m, n)
    left_vectors: np.ndarray  # (n, min(m, n)); tangent basis of the output manifold
    right_vectors: np.ndarray  # (m, min(m, n)); tangent basis of the latent manifold
    rank: int
    threshold_used: float


def _entries(j: Union[JacobianMatrix, np.ndarray]) -> np.ndarray:
    if isinstance(j, JacobianMatrix):
        return j.entries
    return np.asarray(j, dtype=np.float64)


def svd_spectrum(j: Union[JacobianMatrix, np.ndarray],
                 policy: RankPolicy = RankPolicy()) -> SpectrumResult:
    """Decompose J = U diag(s) V^T and count the values surviving the policy."""
    a = _entries(j)
    if a.ndim != 2:
        raise InputDimensionError("jacobian must be a 2-D matrix")
    if not np.isfinite(a).all():
        raise NumericalError("jacobian contains non-finite entries")
    try:
        u, s, vt = np.linalg.svd(a, full_matrices=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD did not converge: {exc}") from exc

    if policy.fixed_rank is not None:
        rank = min(policy.fixed_rank, s.size)
    elif s.size == 0 or s[0] == 0.0:
        rank = 0
    else:
        # >= keeps boundary ties nonzero
        rank = int(np.sum(s >= policy.relative_threshold * s[0]))
    return SpectrumResult(
        singular_values=s,
        left_vectors=u,
        right_vectors=vt.T,
        rank=rank,
        threshold_used=policy.relative_threshold,
    )


def volume_factor(spec: SpectrumResult) -> float:
    """Product of the singular values surviving the rank policy.

    This is the local scale factor between latent and output volumes; at a
    rank-zero point the map is locally constant and no factor exists.
    """
    if spec.rank < 1:
        raise DegeneratePointError(
            "rank is zero at this point; the induced density is undefined here"
        )
    return float(np.prod(spec.singular_values[: spec.rank]))


def log_volume_factor(spec: SpectrumResult) -> float:
    """Sum of log singular values surviving the policy (log-space twin)."""
    if spec.rank < 1:
        raise DegeneratePointError(
            "rank is zero at this point; the induced density is undefined here"
        )
    return float(np.sum(np.log(spec.singular_values[: spec.rank])))


def nondegenerate_directions(spec: SpectrumResult) -> list[np.ndarray]:
    """Right singular vectors that survive the policy, in decreasing-sigma order."""
    return [spec.right_vectors[:, i].copy() for i in range(spec.rank)]
