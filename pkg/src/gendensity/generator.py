"""Generator abstraction: a fixed differentiable map from latent to output space.

A :class:`GeneratorHandle` wraps a deterministic map f from R^m to R^n.
Handles come from two places: analytic builtins (which also carry a
closed-form Jacobian, used as the oracle for the finite-difference module)
and small feed-forward networks loaded from the JSON interchange format.

All arithmetic is float64; 32-bit weights are upcast on load because the
density computation divides by products of singular values and needs the
headroom.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import _kernels
from .errors import (
    GeneratorLoadError,
    InputDimensionError,
    UnsupportedOperationError,
)

Array = np.ndarray

_ACTIVATIONS = ("identity", "relu", "tanh", "sigmoid")


@dataclass(frozen=True)
class GeneratorHandle:
    """A fixed map f: R^m -> R^n, evaluated one point or one batch at a time.

    Immutable after construction; concurrent read-only evaluation is safe.
    ``kind`` is ``"builtin:<name>"`` for analytic builtins and ``"network"``
    for loaded networks.
    """

    latent_dim: int
    output_dim: int
    kind: str
    _eval_batch: Callable[[Array], Array]
    _jacobian: Optional[Callable[[Array], Array]] = None

    def evaluate(self, z) -> Array:
        """Return f(z) for a single latent vector of length ``latent_dim``."""
        z = _as_vector(z, self.latent_dim, "z")
        return self._eval_batch(z[None, :])[0]

    def evaluate_batch(self, zs) -> Array:
        """Return f applied to each row of a (B, latent_dim) array."""
        zs = np.asarray(zs, dtype=np.float64)
        if zs.ndim != 2 or zs.shape[1] != self.latent_dim:
            raise InputDimensionError(
                f"expected batch of shape (B, {self.latent_dim}), got {zs.shape}"
            )
        return self._eval_batch(zs)

    @property
    def has_analytic_jacobian(self) -> bool:
        return self._jacobian is not None


class EvalCounter:
    """Counts latent points pushed through a wrapped handle.

    The wrapped handle stays immutable; the counter lives on this wrapper so
    instrumented tests can assert evaluation budgets (e.g. a central-difference
    Jacobian costs exactly 2m evaluations).
    """

    def __init__(self, g: GeneratorHandle):
        self.points = 0
        self.calls = 0

        def counted(zs: Array) -> Array:
            self.points += zs.shape[0]
            self.calls += 1
            return g._eval_batch(zs)

        self.handle = GeneratorHandle(
            latent_dim=g.latent_dim,
            output_dim=g.output_dim,
            kind=g.kind,
            _eval_batch=counted,
            _jacobian=g._jacobian,
        )


def _as_vector(z, dim: int, name: str) -> Array:
    z = np.asarray(z, dtype=np.float64)
    if z.ndim != 1 or z.shape[0] != dim:
        raise InputDimensionError(f"{name} must be a vector of length {dim}, got shape {z.shape}")
    return z


# ---------------------------------------------------------------------------
# analytic builtins


def identity(m: int) -> GeneratorHandle:
    """f(z) = z on R^m."""
    if m < 1:
        raise InputDimensionError("latent dimension must be positive")
    eye = np.eye(m)
    return GeneratorHandle(m, m, "builtin:identity", lambda zs: zs.copy(),
                           lambda z: eye.copy())


def linear(a) -> GeneratorHandle:
    """f(z) = A z for a fixed n-by-m matrix A."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise InputDimensionError("linear builtin needs a 2-D matrix")
    n, m = a.shape
    return GeneratorHandle(m, n, "builtin:linear", lambda zs: zs @ a.T,
                           lambda z: a.copy())


def circle_embed() -> GeneratorHandle:
    """f(z) = (cos z, sin z): the unit circle traced at unit speed."""

    def ev(zs: Array) -> Array:
        t = zs[:, 0]
        return np.stack([np.cos(t), np.sin(t)], axis=1)

    def jac(z: Array) -> Array:
        return np.array([[-math.sin(z[0])], [math.cos(z[0])]])

    return GeneratorHandle(1, 2, "builtin:circle-embed", ev, jac)


def memorizer(anchors, centers, sharpness: float = 50.0) -> GeneratorHandle:
    """Smooth map collapsing latent cells onto fixed output centers.

    Latent space is partitioned by nearest anchor; cells blend into their
    center through logistic ramps whose slope grows with ``sharpness``, so
    as sharpness grows the map sends all but a vanishing fraction of latent
    volume onto the centers.  Default sharpness 50 gives near-constant
    plateaus at unit-scale anchor spacing while staying differentiable.
    """
    anchors = np.atleast_2d(np.asarray(anchors, dtype=np.float64))
    centers = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    if anchors.shape[0] != centers.shape[0]:
        raise InputDimensionError("anchors and centers must pair up one-to-one")
    if anchors.shape[0] < 2:
        raise InputDimensionError("memorizer needs at least two centers")
    if not sharpness > 0:
        raise InputDimensionError("sharpness must be positive")
    m = anchors.shape[1]
    n = centers.shape[1]
    s = float(sharpness)

    return GeneratorHandle(
        m, n, "builtin:memorizer",
        lambda zs: _kernels.blend_eval(zs, anchors, centers, s),
        lambda z: _kernels.blend_jacobian(z, anchors, centers, s),
    )


def smooth_interpolator(anchors, centers) -> GeneratorHandle:
    """Affine map joining the same anchor/center pairs without collapsing.

    Least-squares affine fit of centers against anchors; latent directions
    the anchors do not span are completed isometrically into the output
    space, so the map stays full-rank wherever the output dimension allows.
    Serves as the non-memorizing counterpart to :func:`memorizer`.
    """
    anchors = np.atleast_2d(np.asarray(anchors, dtype=np.float64))
    centers = np.atleast_2d(np.asarray(centers, dtype=np.float64))
    if anchors.shape[0] != centers.shape[0]:
        raise InputDimensionError("anchors and centers must pair up one-to-one")
    m = anchors.shape[1]
    n = centers.shape[1]
    abar = anchors.mean(axis=0)
    cbar = centers.mean(axis=0)
    za = anchors - abar
    xc = centers - cbar
    mat = (np.linalg.pinv(za) @ xc).T  # (n, m), least-squares fit

    # Isometric completion: map the anchor null-space onto fresh orthonormal
    # output directions so the interpolator does not collapse unseen latent
    # directions to a point.
    u_a, s_a, vt_a = np.linalg.svd(za, full_matrices=True)
    rank_a = int(np.sum(s_a > 1e-12 * (s_a[0] if s_a.size else 1.0)))
    null_dirs = vt_a[rank_a:]  # (m - rank_a, m)
    if null_dirs.shape[0]:
        u_c, s_c, vt_c = np.linalg.svd(xc, full_matrices=True)
        rank_c = int(np.sum(s_c > 1e-12 * (s_c[0] if s_c.size else 1.0)))
        free_out = vt_c[rank_c:]  # (n - rank_c, n)
        for i in range(min(null_dirs.shape[0], free_out.shape[0])):
            mat = mat + np.outer(free_out[i], null_dirs[i])

    return GeneratorHandle(
        m, n, "builtin:smooth-interpolator",
        lambda zs: cbar[None, :] + (zs - abar[None, :]) @ mat.T,
        lambda z: mat.copy(),
    )


def analytic_jacobian(g: GeneratorHandle, z) -> Array:
    """Closed-form Jacobian of an analytic builtin at z (test oracle)."""
    if g._jacobian is None:
        raise UnsupportedOperationError(
            f"generator kind {g.kind!r} has no closed-form Jacobian"
        )
    z = _as_vector(z, g.latent_dim, "z")
    return g._jacobian(z)


# ---------------------------------------------------------------------------
# network interchange format


@dataclass(frozen=True)
class LayerSpec:
    weights: Array  # (out_dim, in_dim), row-major
    bias: Array  # (out_dim,)
    activation: str


@dataclass(frozen=True)
class NetworkSpec:
    layers: tuple[LayerSpec, ...]
    reference_io: tuple[tuple[Array, Array], ...] = field(default=())

    @property
    def latent_dim(self) -> int:
        return self.layers[0].weights.shape[1]

    @property
    def output_dim(self) -> int:
        return self.layers[-1].weights.shape[0]


def _apply_activation(name: str, x: Array) -> Array:
    if name == "identity":
        return x
    if name == "relu":
        return np.maximum(x, 0.0)
    if name == "tanh":
        return np.tanh(x)
    # sigmoid, stable on both tails
    out = np.empty_like(x)
    pos = x >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-x[pos]))
    ex = np.exp(x[~pos])
    out[~pos] = ex / (1.0 + ex)
    return out


def network_forward(spec: NetworkSpec, zs: Array) -> Array:
    x = zs
    for layer in spec.layers:
        x = _apply_activation(layer.activation, x @ layer.weights.T + layer.bias[None, :])
    return x


def parse_network(doc: dict) -> NetworkSpec:
    """Validate a parsed interchange document and build a NetworkSpec."""
    if not isinstance(doc, dict):
        raise GeneratorLoadError("network file must contain a JSON object")
    for key in ("latent_dim", "output_dim", "layers"):
        if key not in doc:
            raise GeneratorLoadError(f"network file is missing {key!r}")
    for key in ("latent_dim", "output_dim"):
        if not isinstance(doc[key], int) or doc[key] < 1:
            raise GeneratorLoadError(f"{key} must be a positive integer")
    raw_layers = doc["layers"]
    if not isinstance(raw_layers, list) or not raw_layers:
        raise GeneratorLoadError("network file needs a non-empty 'layers' list")

    layers = []
    prev_out = int(doc["latent_dim"])
    for i, raw in enumerate(raw_layers):
        try:
            w = np.asarray(raw["weights"], dtype=np.float64)
            b = np.asarray(raw["bias"], dtype=np.float64)
            act = raw["activation"]
        except (KeyError, TypeError, ValueError) as exc:
            raise GeneratorLoadError(f"layer {i}: malformed entry ({exc})") from exc
        if w.ndim != 2:
            raise GeneratorLoadError(f"layer {i}: weights must be a matrix")
        if b.ndim != 1 or b.shape[0] != w.shape[0]:
            raise GeneratorLoadError(
                f"layer {i}: bias length {b.shape} does not match {w.shape[0]} rows"
            )
        if act not in _ACTIVATIONS:
            raise GeneratorLoadError(f"layer {i}: unknown activation {act!r}")
        if w.shape[1] != prev_out:
            raise GeneratorLoadError(
                f"layer {i}: in_dim {w.shape[1]} does not chain with previous out_dim {prev_out}"
            )
        prev_out = w.shape[0]
        layers.append(LayerSpec(w, b, act))
    if prev_out != int(doc["output_dim"]):
        raise GeneratorLoadError(
            f"last layer out_dim {prev_out} does not match declared output_dim {doc['output_dim']}"
        )

    refs = []
    for i, pair in enumerate(doc.get("reference_io", []) or []):
        try:
            z = np.asarray(pair["z"], dtype=np.float64)
            x = np.asarray(pair["x"], dtype=np.float64)
        except (KeyError, TypeError, ValueError) as exc:
            raise GeneratorLoadError(f"reference_io[{i}]: malformed pair ({exc})") from exc
        if z.shape != (int(doc["latent_dim"]),) or x.shape != (int(doc["output_dim"]),):
            raise GeneratorLoadError(f"reference_io[{i}]: wrong vector lengths")
        refs.append((z, x))
    return NetworkSpec(tuple(layers), tuple(refs))


def load_network(path, replay_tol: float = 1e-6) -> GeneratorHandle:
    """Load a feed-forward generator from the JSON interchange format.

    When the file carries ``reference_io`` pairs, each one is replayed
    through the loaded network and must match within ``replay_tol``
    (absolute); a mismatch means the file does not describe the network
    that produced it and loading fails.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise GeneratorLoadError(f"cannot read network file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise GeneratorLoadError(f"network file is not valid JSON: {exc}") from exc

    spec = parse_network(doc)
    for i, (z, x) in enumerate(spec.reference_io):
        got = network_forward(spec, z[None, :])[0]
        err = float(np.max(np.abs(got - x)))
        if not err <= replay_tol:
            raise GeneratorLoadError(
                f"reference_io[{i}] replay deviates by {err:.3e} (> {replay_tol:.1e})"
            )

    return GeneratorHandle(
        spec.latent_dim, spec.output_dim, "network",
        lambda zs: network_forward(spec, zs),
    )
