"""Intrinsic-dimension diagnostics: mean Jacobian spectra and point-cloud SVD."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .differentiation import FdConfig, jacobian
from .errors import InputDimensionError, NumericalError
from .generator import GeneratorHandle
from .spectrum import DEFAULT_RELATIVE_THRESHOLD, RankPolicy, svd_spectrum

DEFAULT_TOP_K = 20


@dataclass
class SpectrumSummary:
    mean_singular_values: np.ndarray  # index-wise mean of sorted sigmas, first K
    suggested_dimension: int  # heuristic: count of mean sigmas above threshold
    per_point_spectra: Optional[np.ndarray] = None  # (n_points, K)
    n_skipped: int = 0


def mean_spectrum(
    g: GeneratorHandle,
    sample_points,
    k: Optional[int] = None,
    fd_cfg: FdConfig = FdConfig(),
    relative_threshold: float = DEFAULT_RELATIVE_THRESHOLD,
    keep_per_point: bool = False,
) -> SpectrumSummary:
    """Index-wise mean of the top-k singular values over sample points.

    ``k`` defaults to 20 (capped at min(m, n)).  Points whose Jacobian
    comes back non-finite are skipped and counted.  The suggested dimension
    applies the rank threshold to the mean curve; it is a heuristic
    readout, not a certified rank.
    """
    sample_points = np.atleast_2d(np.asarray(sample_points, dtype=np.float64))
    top = min(g.latent_dim, g.output_dim)
    if k is None:
        k = min(DEFAULT_TOP_K, top)
    if k > top:
        raise InputDimensionError(f"k={k} exceeds min(m, n)={top}")
    policy = RankPolicy(relative_threshold=relative_threshold)
    spectra = []
    skipped = 0
    for z in sample_points:
        try:
            spec = svd_spectrum(jacobian(g, z, fd_cfg), policy)
        except NumericalError:
            skipped += 1
            continue
        spectra.append(spec.singular_values[:k])
    if not spectra:
        raise NumericalError("no sample point produced a finite Jacobian")
    per_point = np.vstack(spectra)
    mean = per_point.mean(axis=0)
    if mean[0] > 0:
        suggested = int(np.sum(mean >= relative_threshold * mean[0]))
    else:
        suggested = 0
    return SpectrumSummary(
        mean_singular_values=mean,
        suggested_dimension=suggested,
        per_point_spectra=per_point if keep_per_point else None,
        n_skipped=skipped,
    )


def pointcloud_svd(latents) -> np.ndarray:
    """Singular values of the mean-centered data matrix of a latent cloud."""
    latents = np.atleast_2d(np.asarray(latents, dtype=np.float64))
    if latents.shape[0] < 2:
        raise InputDimensionError("need at least 2 points")
    centered = latents - latents.mean(axis=0, keepdims=True)
    return np.linalg.svd(centered, compute_uv=False)
