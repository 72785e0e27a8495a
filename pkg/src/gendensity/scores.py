"""Scalar memorization scores aggregated from density profiles.

Two measures, both second differences of log density:

* dip: along the segment joining each anchor to its nearest neighbor,
  endpoints minus twice the arclength midpoint.  Positive dip means a
  density valley between samples.
* decay: about each anchor along its largest singular direction, at a set
  of radii, normalized by radius.  Strongly negative decay means the
  density is peaked on the anchor.

Neighbors are found in output space under L2: that is where point masses
live, and latent-space neighborhoods are distorted by the very
degeneracy being measured.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .density import LatentPrior
from .differentiation import FdConfig
from .errors import (
    DegenerateDirectionError,
    DegeneratePointError,
    EmptyProfileError,
    EmptyReportError,
    InputDimensionError,
    NumericalError,
    ScoreUndefinedError,
)
from .generator import GeneratorHandle
from .paths import FLAG_OK, DensityProfile, LatentPath, decay_profile, path_density
from .spectrum import RankPolicy

DEFAULT_RADII = (0.5, 1.0)  # meaningful for data normalized to [-1, 1]-scale outputs


@dataclass(frozen=True)
class AnchorSet:
    """Known latent representations of training samples, with cached outputs."""

    latents: np.ndarray  # (k, m)
    outputs: np.ndarray  # (k, n)
    labels: Optional[tuple[str, ...]] = None

    @staticmethod
    def from_latents(g: GeneratorHandle, latents, labels=None) -> "AnchorSet":
        latents = np.atleast_2d(np.asarray(latents, dtype=np.float64))
        if latents.shape[1] != g.latent_dim:
            raise InputDimensionError(
                f"anchor latents have dim {latents.shape[1]}, generator wants {g.latent_dim}"
            )
        if labels is not None:
            labels = tuple(str(l) for l in labels)
            if len(labels) != latents.shape[0]:
                raise InputDimensionError("labels must pair up with latents")
        return AnchorSet(latents, g.evaluate_batch(latents), labels)

    def __len__(self) -> int:
        return self.latents.shape[0]


@dataclass(frozen=True)
class ScoreConfig:
    fd_cfg: FdConfig = FdConfig()
    rank_policy: RankPolicy = RankPolicy()
    path_samples: int = 101
    ray_samples_per_side: int = 51
    t_max: float = 3.0
    radii: tuple[float, ...] = DEFAULT_RADII
    neighbor_metric: str = "output"  # "output" | "latent" (sensitivity knob)


@dataclass
class ScoreReport:
    mean_dip: float
    mean_decay: float
    per_path_dips: list[float]
    per_point_decays: list[dict]
    radii_used: list[float]
    n_paths: int
    n_excluded: int
    pairs: list[tuple[int, int]]
    path_diagnostics: list[dict] = field(default_factory=list)
    config: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "mean_dip": self.mean_dip,
            "mean_decay": self.mean_decay,
            "per_path_dips": self.per_path_dips,
            "per_point_decays": self.per_point_decays,
            "radii_used": self.radii_used,
            "n_paths": self.n_paths,
            "n_excluded": self.n_excluded,
            "pairs": [list(p) for p in self.pairs],
            "path_diagnostics": self.path_diagnostics,
            "config": self.config,
        }

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def nearest_neighbor_pairs(anchors: AnchorSet, metric: str = "output") -> list[tuple[int, int]]:
    """For each anchor i, the index j minimizing the pairwise distance.

    Brute-force scan (anchor sets are desk-scale); ties break toward the
    smallest index, which keeps the pairing stable under permutation tests.
    """
    if len(anchors) < 2:
        raise InputDimensionError("need at least two anchors to pair")
    pts = anchors.outputs if metric == "output" else anchors.latents
    k = pts.shape[0]
    pairs = []
    for i in range(k):
        best_j = -1
        best_d = np.inf
        for j in range(k):
            if j == i:
                continue
            d = float(np.linalg.norm(pts[i] - pts[j]))
            if d < best_d:
                best_d = d
                best_j = j
        pairs.append((i, best_j))
    return pairs


def dip_score(profile: DensityProfile) -> float:
    """Endpoint-vs-midpoint second difference of log density along a segment.

    The midpoint is the sample whose arclength is closest to the arclength
    midpoint (not the time midpoint): the measure lives on the output
    manifold.  Flagged endpoint or midpoint makes the score undefined.
    """
    flags = profile.flags
    s = profile.arclengths
    lp = profile.log_densities
    if len(s) < 3:
        raise ScoreUndefinedError("profile too short for a dip score")
    if flags[0] != FLAG_OK or flags[-1] != FLAG_OK:
        raise ScoreUndefinedError("segment endpoint sample is flagged")
    target = 0.5 * (s[0] + s[-1])
    k = int(np.argmin(np.abs(s - target)))
    if flags[k] != FLAG_OK:
        raise ScoreUndefinedError("arclength-midpoint sample is flagged")
    return float(lp[0] + lp[-1] - 2.0 * lp[k])


def _interp_log_density(profile: DensityProfile, s_query: float) -> Optional[float]:
    """Linear-in-s interpolation of log density using only valid samples."""
    mask = profile.valid_mask()
    s = profile.arclengths[mask]
    lp = profile.log_densities[mask]
    if s.size < 2 or s_query < s[0] or s_query > s[-1]:
        return None
    return float(np.interp(s_query, s, lp))


def decay_score(profiles: Sequence[DensityProfile],
                radii: Sequence[float] = DEFAULT_RADII) -> tuple[float, list[dict], int]:
    """Radius-normalized second differences about each profile's center.

    Returns (mean over valid point/radius terms, per-point detail, number
    of excluded terms).  A term is excluded when the profile does not reach
    +-r in arclength with valid samples, or the center sample is flagged.
    """
    per_point = []
    values = []
    excluded = 0
    for profile in profiles:
        center = int(np.argmin(np.abs(profile.times)))
        detail = {
            "direction_index": profile.meta.get("direction_index"),
            "direction": profile.meta.get("direction"),
            "sigma": profile.meta.get("sigma"),
            "etas": {},
        }
        center_ok = profile.flags[center] == FLAG_OK
        lp0 = profile.log_densities[center]
        for r in radii:
            eta = None
            if center_ok:
                lp_plus = _interp_log_density(profile, +float(r))
                lp_minus = _interp_log_density(profile, -float(r))
                if lp_plus is not None and lp_minus is not None:
                    eta = (lp_plus + lp_minus - 2.0 * lp0) / float(r)
            if eta is None:
                excluded += 1
            else:
                values.append(eta)
            detail["etas"][repr(float(r))] = eta
        per_point.append(detail)
    mean = float(np.mean(values)) if values else float("nan")
    return mean, per_point, excluded


def score_run(
    g: GeneratorHandle,
    anchors: AnchorSet,
    prior: LatentPrior,
    config: ScoreConfig = ScoreConfig(),
) -> ScoreReport:
    """Full scoring pass: nearest-neighbor dips plus per-anchor decay.

    Per-anchor work is independent; aggregation sums in fixed index order
    so the report does not depend on scheduling.
    """
    if len(anchors) == 0:
        raise InputDimensionError("anchor set is empty")
    pairs = nearest_neighbor_pairs(anchors, config.neighbor_metric)

    dips = []
    diagnostics = []
    n_excluded = 0
    for i, j in pairs:
        seg = LatentPath.segment(anchors.latents[i], anchors.latents[j],
                                 config.path_samples)
        diag = {"pair": [i, j]}
        if anchors.labels is not None:
            diag["labels"] = [anchors.labels[i], anchors.labels[j]]
        try:
            profile = path_density(g, seg, prior, config.fd_cfg, config.rank_policy)
            dip = dip_score(profile)
        except (ScoreUndefinedError, EmptyProfileError, DegeneratePointError,
                NumericalError) as exc:
            n_excluded += 1
            diag["excluded"] = str(exc)
            diagnostics.append(diag)
            continue
        dips.append(dip)
        diag["dip"] = dip
        diagnostics.append(diag)

    decay_profiles = []
    for i in range(len(anchors)):
        try:
            decay_profiles.append(
                decay_profile(
                    g, anchors.latents[i], 0, prior, config.fd_cfg,
                    config.rank_policy, config.t_max, config.ray_samples_per_side,
                )
            )
        except (DegenerateDirectionError, DegeneratePointError, EmptyProfileError,
                NumericalError):
            n_excluded += len(config.radii)

    mean_decay, per_point, decay_excluded = decay_score(decay_profiles, config.radii)
    n_excluded += decay_excluded

    if not dips and not per_point:
        raise EmptyReportError("every path and decay term was excluded")

    return ScoreReport(
        mean_dip=float(np.mean(dips)) if dips else float("nan"),
        mean_decay=mean_decay,
        per_path_dips=dips,
        per_point_decays=per_point,
        radii_used=[float(r) for r in config.radii],
        n_paths=len(pairs),
        n_excluded=n_excluded,
        pairs=pairs,
        path_diagnostics=diagnostics,
        config={
            "epsilon": config.fd_cfg.epsilon,
            "sv_threshold": config.rank_policy.relative_threshold,
            "path_samples": config.path_samples,
            "ray_samples_per_side": config.ray_samples_per_side,
            "t_max": config.t_max,
            "neighbor_metric": config.neighbor_metric,
        },
    )
