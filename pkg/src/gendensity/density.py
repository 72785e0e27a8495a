"""Latent priors and the induced log-density on the output manifold.

The induced density divides the latent prior by the product of the
surviving singular values of the Jacobian.  Everything is kept in log
space - products of dozens of singular values under- or overflow raw
densities, so no raw-density code path exists.  Note the result is a
density on the rank-dimensional image manifold, not on the ambient output
space; integrating it over the ambient space is meaningless.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .differentiation import FdConfig, jacobian
from .errors import InputDimensionError
from .generator import GeneratorHandle, _as_vector
from .spectrum import RankPolicy, log_volume_factor, svd_spectrum

_LOG_2PI = math.log(2.0 * math.pi)


@dataclass(frozen=True)
class LatentPrior:
    """Evaluable log-density on R^m: standard normal or a uniform box."""

    kind: str  # "standard_normal" | "uniform_box"
    dimension: int
    low: float = 0.0
    high: float = 0.0

    @staticmethod
    def standard_normal(m: int) -> "LatentPrior":
        if m < 1:
            raise InputDimensionError("prior dimension must be positive")
        return LatentPrior("standard_normal", m)

    @staticmethod
    def uniform_box(m: int, low: float, high: float) -> "LatentPrior":
        if m < 1:
            raise InputDimensionError("prior dimension must be positive")
        if not high > low:
            raise InputDimensionError("uniform box needs high > low")
        return LatentPrior("uniform_box", m, float(low), float(high))


@dataclass(frozen=True)
class LogDensityValue:
    """log p-tilde = log prior - log volume factor, with its pieces."""

    log_p_tilde: float
    log_prior: float
    log_volume_factor: float
    rank_used: int


def prior_log_density(prior: LatentPrior, z) -> float:
    """Exact log of the prior density at z (-inf outside a uniform box)."""
    z = _as_vector(z, prior.dimension, "z")
    if prior.kind == "standard_normal":
        return float(-0.5 * (z @ z) - 0.5 * prior.dimension * _LOG_2PI)
    inside = np.all((z >= prior.low) & (z <= prior.high))
    if not inside:
        return float("-inf")
    return float(-prior.dimension * math.log(prior.high - prior.low))


def induced_log_density(
    g: GeneratorHandle,
    z,
    prior: LatentPrior,
    fd_cfg: FdConfig = FdConfig(),
    rank_policy: RankPolicy = RankPolicy(),
) -> LogDensityValue:
    """Induced log-density of the generator's output at f(z).

    Composes the finite-difference Jacobian, its SVD, and the change of
    variables restricted to the nondegenerate directions.  Raises
    :class:`DegeneratePointError` where the rank is zero (the map is
    locally constant and carries no density there).
    """
    if prior.dimension != g.latent_dim:
        raise InputDimensionError(
            f"prior dimension {prior.dimension} != generator latent_dim {g.latent_dim}"
        )
    spec = svd_spectrum(jacobian(g, z, fd_cfg), rank_policy)
    log_vol = log_volume_factor(spec)  # raises at rank 0
    log_prior = prior_log_density(prior, z)
    return LogDensityValue(
        log_p_tilde=log_prior - log_vol,
        log_prior=log_prior,
        log_volume_factor=log_vol,
        rank_used=spec.rank,
    )
