"""Density profiles along latent paths, parametrized by output-space arclength.

Two shapes of path: a segment joining two latent points (density-between-
samples view) and a symmetric ray through a point along a chosen singular
direction (local decay view).  Arclength is the cumulative L2 chord length
of the mapped path; distances live in output space because that is where
point masses must be detected - latent distances hide exactly the
collapsing behavior being measured.

Per-sample failures do not abort a profile: rank-zero samples are flagged
``degenerate`` and non-finite ones ``overflow``, both retained in the
emitted data (so plateaus plot honestly) but excluded from score
arithmetic downstream.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .density import LatentPrior, LogDensityValue, induced_log_density
from .differentiation import FdConfig, jacobian
from .errors import (
    DegenerateDirectionError,
    DegeneratePointError,
    EmptyProfileError,
    InputDimensionError,
    NumericalError,
)
from .generator import GeneratorHandle, _as_vector
from .spectrum import RankPolicy, svd_spectrum

FLAG_OK = "ok"
FLAG_DEGENERATE = "degenerate"
FLAG_OVERFLOW = "overflow"

DEFAULT_SEGMENT_SAMPLES = 101
DEFAULT_RAY_SAMPLES_PER_SIDE = 51
DEFAULT_RAY_T_MAX = 3.0  # three prior sigmas for a standard normal latent


@dataclass(frozen=True)
class LatentPath:
    """A sampled straight path in latent space."""

    kind: str  # "segment" | "ray"
    times: np.ndarray
    z1: Optional[np.ndarray] = None
    z2: Optional[np.ndarray] = None
    z0: Optional[np.ndarray] = None
    direction: Optional[np.ndarray] = None

    @staticmethod
    def segment(z1, z2, n_samples: int = DEFAULT_SEGMENT_SAMPLES) -> "LatentPath":
        """gamma(t) = (1 - t) z1 + t z2 sampled uniformly on [0, 1]."""
        z1 = np.asarray(z1, dtype=np.float64)
        z2 = np.asarray(z2, dtype=np.float64)
        if z1.shape != z2.shape or z1.ndim != 1:
            raise InputDimensionError("segment endpoints must be vectors of equal length")
        if n_samples < 3:
            raise InputDimensionError("a segment needs at least 3 samples")
        return LatentPath("segment", np.linspace(0.0, 1.0, n_samples), z1=z1, z2=z2)

    @staticmethod
    def ray(z0, direction, t_max: float = DEFAULT_RAY_T_MAX,
            n_per_side: int = DEFAULT_RAY_SAMPLES_PER_SIDE) -> "LatentPath":
        """gamma(t) = z0 + t v on [-t_max, t_max]; times symmetric, t=0 included."""
        z0 = np.asarray(z0, dtype=np.float64)
        direction = np.asarray(direction, dtype=np.float64)
        if z0.shape != direction.shape or z0.ndim != 1:
            raise InputDimensionError("ray point and direction must be vectors of equal length")
        if not t_max > 0:
            raise InputDimensionError("t_max must be positive")
        if n_per_side < 1:
            raise InputDimensionError("a ray needs at least 1 sample per side")
        half = np.linspace(0.0, t_max, n_per_side + 1)[1:]
        times = np.concatenate([-half[::-1], [0.0], half])
        return LatentPath("ray", times, z0=z0, direction=direction)

    def points(self) -> np.ndarray:
        t = self.times[:, None]
        if self.kind == "segment":
            return (1.0 - t) * self.z1[None, :] + t * self.z2[None, :]
        return self.z0[None, :] + t * self.direction[None, :]

    @property
    def anchor_index(self) -> int:
        """Index of the sample where arclength is pinned to zero."""
        if self.kind == "segment":
            return 0
        return int(np.argmin(np.abs(self.times)))


@dataclass
class DensityProfile:
    """A discrete curve (s_k, log p-tilde_k) with per-sample flags."""

    times: np.ndarray
    arclengths: np.ndarray
    log_densities: np.ndarray  # NaN where flagged
    flags: list[str]
    meta: dict = field(default_factory=dict)

    def valid_mask(self) -> np.ndarray:
        return np.array([f == FLAG_OK for f in self.flags])

    def n_valid(self) -> int:
        return int(self.valid_mask().sum())

    def to_rows(self) -> list[tuple]:
        return [
            (float(t), float(s), float(lp), f)
            for t, s, lp, f in zip(self.times, self.arclengths, self.log_densities, self.flags)
        ]

    def to_csv(self) -> str:
        lines = ["t,s,log_density,flag"]
        for t, s, lp, f in self.to_rows():
            lines.append(f"{t!r},{s!r},{lp!r},{f}")
        return "\n".join(lines) + "\n"

    def to_dict(self) -> dict:
        return {
            "meta": self.meta,
            "samples": [
                {"t": t, "s": s, "log_density": lp, "flag": f}
                for t, s, lp, f in self.to_rows()
            ],
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def _chord_lengths(points: np.ndarray) -> np.ndarray:
    # A non-finite sample would poison every arclength after it; treat its
    # chords as zero-length so the profile stays plottable and let the flag
    # carry the bad news.
    with np.errstate(invalid="ignore"):
        diffs = np.diff(points, axis=0)
        chords = np.sqrt((diffs * diffs).sum(axis=1))
    return np.where(np.isfinite(chords), chords, 0.0)


def arclength_reparametrize(times, points, log_densities, flags=None,
                            anchor_index: int = 0, meta: Optional[dict] = None) -> DensityProfile:
    """Cumulative-chord arclength for raw (t_k, x_k, log p_k) samples.

    ``anchor_index`` pins s = 0 (segment profiles anchor at the first
    sample; rays anchor at t = 0 so arclength is signed).
    """
    times = np.asarray(times, dtype=np.float64)
    points = np.asarray(points, dtype=np.float64)
    log_densities = np.asarray(log_densities, dtype=np.float64)
    if len(times) < 2:
        raise InputDimensionError("need at least 2 samples to reparametrize")
    chords = _chord_lengths(points)
    s = np.concatenate([[0.0], np.cumsum(chords)])
    s = s - s[anchor_index]
    if flags is None:
        flags = [FLAG_OK] * len(times)
    return DensityProfile(times.copy(), s, log_densities, list(flags), dict(meta or {}))


def _sample_log_densities(g, zs, prior, fd_cfg, rank_policy):
    logs = np.full(zs.shape[0], np.nan)
    flags = []
    for i, z in enumerate(zs):
        try:
            val: LogDensityValue = induced_log_density(g, z, prior, fd_cfg, rank_policy)
        except DegeneratePointError:
            flags.append(FLAG_DEGENERATE)
            continue
        except NumericalError:
            flags.append(FLAG_OVERFLOW)
            continue
        if np.isfinite(val.log_p_tilde):
            logs[i] = val.log_p_tilde
            flags.append(FLAG_OK)
        else:
            logs[i] = val.log_p_tilde
            flags.append(FLAG_OVERFLOW)
    return logs, flags


def path_density(
    g: GeneratorHandle,
    path: LatentPath,
    prior: LatentPrior,
    fd_cfg: FdConfig = FdConfig(),
    rank_policy: RankPolicy = RankPolicy(),
) -> DensityProfile:
    """Induced log-density along a latent segment, against output arclength."""
    if path.kind != "segment":
        raise InputDimensionError("path_density expects a segment path")
    zs = path.points()
    if zs.shape[1] != g.latent_dim:
        raise InputDimensionError("path endpoints do not match the generator latent_dim")
    xs = g.evaluate_batch(zs)
    logs, flags = _sample_log_densities(g, zs, prior, fd_cfg, rank_policy)
    if not any(f == FLAG_OK for f in flags):
        raise EmptyProfileError("every sample along the segment is degenerate")
    meta = {
        "kind": "segment",
        "epsilon": fd_cfg.epsilon,
        "sv_threshold": rank_policy.relative_threshold,
        "n_samples": int(len(path.times)),
    }
    return arclength_reparametrize(path.times, xs, logs, flags, path.anchor_index, meta)


def decay_profile(
    g: GeneratorHandle,
    z0,
    direction_index: int,
    prior: LatentPrior,
    fd_cfg: FdConfig = FdConfig(),
    rank_policy: RankPolicy = RankPolicy(),
    t_max: float = DEFAULT_RAY_T_MAX,
    n_per_side: int = DEFAULT_RAY_SAMPLES_PER_SIDE,
    allow_degenerate: bool = False,
) -> DensityProfile:
    """Profile along the ray through z0 in its direction_index-th singular direction.

    Directions are the right singular vectors at z0 in decreasing-sigma
    order.  Indices at or beyond the local rank are refused unless
    ``allow_degenerate`` is set (deliberately reproducing how profiles
    along near-constant directions collapse to nothing).
    """
    z0 = _as_vector(z0, g.latent_dim, "z0")
    spec = svd_spectrum(jacobian(g, z0, fd_cfg), rank_policy)
    n_dirs = spec.right_vectors.shape[1]
    if direction_index < 0 or direction_index >= n_dirs:
        raise InputDimensionError(
            f"direction_index {direction_index} out of range (have {n_dirs} singular directions)"
        )
    if direction_index >= spec.rank and not allow_degenerate:
        raise DegenerateDirectionError(
            f"direction {direction_index} has singular value below the rank threshold "
            f"(rank {spec.rank} at this point); pass allow_degenerate to build it anyway"
        )
    v = spec.right_vectors[:, direction_index].copy()
    path = LatentPath.ray(z0, v, t_max, n_per_side)
    zs = path.points()
    xs = g.evaluate_batch(zs)
    logs, flags = _sample_log_densities(g, zs, prior, fd_cfg, rank_policy)
    if not any(f == FLAG_OK for f in flags):
        raise EmptyProfileError("every sample along the ray is degenerate")
    meta = {
        "kind": "ray",
        "direction_index": int(direction_index),
        "direction": [float(c) for c in v],
        "sigma": float(spec.singular_values[direction_index]),
        "rank_at_center": int(spec.rank),
        "t_max": float(t_max),
        "epsilon": fd_cfg.epsilon,
        "sv_threshold": rank_policy.relative_threshold,
        "n_samples": int(len(path.times)),
    }
    return arclength_reparametrize(path.times, xs, logs, flags, path.anchor_index, meta)
