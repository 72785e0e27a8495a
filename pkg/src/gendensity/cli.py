"""Command-line surface: load a generator, run analyses, emit plot data.

Subcommands: spectrum | path | decay | score | dim.  Outputs are
self-describing: every artifact embeds the run configuration (epsilon,
threshold, seed, ...), and identical config plus seed reproduces the
output byte for byte.
"""
from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import _kernels
from .density import LatentPrior
from .differentiation import FdConfig, jacobian
from .dimension import mean_spectrum, pointcloud_svd
from .errors import GendensityError, InputDimensionError
from .generator import (
    GeneratorHandle,
    circle_embed,
    identity,
    linear,
    load_network,
    memorizer,
    smooth_interpolator,
)
from .paths import LatentPath, decay_profile, path_density
from .scores import AnchorSet, ScoreConfig, score_run
from .spectrum import RankPolicy, svd_spectrum

_BUILTINS = ("identity", "linear", "circle-embed", "memorizer", "smooth-interpolator")


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def _parse_vector(text: str, name: str) -> np.ndarray:
    val = _parse_value(text)
    arr = np.asarray(val, dtype=np.float64)
    if arr.ndim != 1:
        raise InputDimensionError(f"{name} must be a JSON vector, got {text!r}")
    return arr


def _parse_radii(text: str) -> tuple[float, ...]:
    val = _parse_value(text)
    if isinstance(val, (int, float)):
        return (float(val),)
    if isinstance(val, list):
        return tuple(float(v) for v in val)
    return tuple(float(tok) for tok in text.split(","))


def _gen_params(pairs) -> dict:
    params = {}
    for item in pairs or []:
        if "=" not in item:
            raise InputDimensionError(f"--gen-param expects key=value, got {item!r}")
        key, _, raw = item.partition("=")
        params[key.strip()] = _parse_value(raw)
    return params


def _resolve_generator(spec: str, params: dict) -> GeneratorHandle:
    if spec.startswith("builtin:"):
        name = spec[len("builtin:"):]
        if name == "identity":
            return identity(int(params["m"]))
        if name == "linear":
            return linear(params["a"])
        if name == "circle-embed":
            return circle_embed()
        if name == "memorizer":
            return memorizer(params["anchors"], params["centers"],
                             float(params.get("sharpness", 50.0)))
        if name == "smooth-interpolator":
            return smooth_interpolator(params["anchors"], params["centers"])
        raise InputDimensionError(
            f"unknown builtin {name!r}; choices: {', '.join(_BUILTINS)}"
        )
    return load_network(spec)


def _resolve_prior(spec: str, m: int) -> LatentPrior:
    if spec == "normal":
        return LatentPrior.standard_normal(m)
    if spec.startswith("uniform:"):
        lo, _, hi = spec[len("uniform:"):].partition(",")
        return LatentPrior.uniform_box(m, float(lo), float(hi))
    raise InputDimensionError(
        f"unknown prior {spec!r}; use 'normal' or 'uniform:lo,hi'"
    )


def _load_anchors(path: str) -> tuple[np.ndarray, list | None]:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, list) or not doc:
        raise InputDimensionError("anchors file must hold a non-empty JSON list")
    latents = []
    labels = []
    have_labels = False
    for item in doc:
        if isinstance(item, dict):
            latents.append(item["z"])
            labels.append(item.get("label"))
            have_labels = have_labels or ("label" in item)
        else:
            latents.append(item)
            labels.append(None)
    arr = np.asarray(latents, dtype=np.float64)
    if arr.ndim != 2:
        raise InputDimensionError("anchors file must hold vectors of equal length")
    return arr, (labels if have_labels else None)


def _config_block(args, extra: dict) -> dict:
    block = {
        "command": args.command,
        "generator": args.generator,
        "gen_params": _gen_params(args.gen_param),
        "prior": args.prior,
        "epsilon": args.epsilon,
        "sv_threshold": args.sv_threshold,
        "fixed_rank": args.fixed_rank,
        "format": args.format,
        "seed": args.seed,
        "kernel_backend": _kernels.backend_name(),
    }
    block.update(extra)
    return block


def _emit(text: str, out_path: str | None):
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv_with_meta(config: dict, header: str, rows: list[str]) -> str:
    lines = [f"# {key}: {json.dumps(val, sort_keys=True)}" for key, val in config.items()]
    lines.append(header)
    lines.extend(rows)
    return "\n".join(lines) + "\n"


def _json_artifact(config: dict, payload: dict) -> str:
    return json.dumps({"config": config, **payload}, indent=2, sort_keys=False) + "\n"


# ---------------------------------------------------------------------------
# subcommands


def _cmd_spectrum(args) -> str:
    g = _resolve_generator(args.generator, _gen_params(args.gen_param))
    fd_cfg = FdConfig(args.epsilon)
    policy = RankPolicy(args.sv_threshold, args.fixed_rank)

    if args.point is not None:
        z = _parse_vector(args.point, "--point")
        spec = svd_spectrum(jacobian(g, z, fd_cfg), policy)
        config = _config_block(args, {"point": [float(v) for v in z], "rank": spec.rank})
        values = [float(v) for v in spec.singular_values]
        if args.format == "json":
            return _json_artifact(config, {"singular_values": values, "rank": spec.rank})
        rows = [f"{i},{v!r}" for i, v in enumerate(values)]
        return _csv_with_meta(config, "index,sigma", rows)

    if args.anchors:
        points, _ = _load_anchors(args.anchors)
    elif args.sample_points:
        prior = _resolve_prior(args.prior, g.latent_dim)
        rng = np.random.default_rng(args.seed)
        if prior.kind == "standard_normal":
            points = rng.standard_normal((args.sample_points, g.latent_dim))
        else:
            points = rng.uniform(prior.low, prior.high,
                                 (args.sample_points, g.latent_dim))
    else:
        raise InputDimensionError(
            "spectrum needs --point, --anchors, or --sample-points"
        )

    summary = mean_spectrum(g, points, args.k, fd_cfg, args.sv_threshold)
    config = _config_block(args, {
        "n_points": int(points.shape[0]),
        "k": len(summary.mean_singular_values),
        "suggested_dimension": summary.suggested_dimension,
        "n_skipped": summary.n_skipped,
    })
    values = [float(v) for v in summary.mean_singular_values]
    if args.format == "json":
        return _json_artifact(config, {
            "mean_singular_values": values,
            "suggested_dimension": summary.suggested_dimension,
        })
    rows = [f"{i},{v!r}" for i, v in enumerate(values)]
    return _csv_with_meta(config, "index,mean_sigma", rows)


def _profile_artifact(args, profile, extra: dict) -> str:
    config = _config_block(args, extra)
    if args.format == "json":
        doc = profile.to_dict()
        return _json_artifact(config, {"meta": doc["meta"], "samples": doc["samples"]})
    rows = [f"{t!r},{s!r},{lp!r},{f}" for t, s, lp, f in profile.to_rows()]
    return _csv_with_meta(config, "t,s,log_density,flag", rows)


def _cmd_path(args) -> str:
    g = _resolve_generator(args.generator, _gen_params(args.gen_param))
    prior = _resolve_prior(args.prior, g.latent_dim)
    z1 = _parse_vector(args.z1, "--z1")
    z2 = _parse_vector(args.z2, "--z2")
    if z1.size != g.latent_dim or z2.size != g.latent_dim:
        raise InputDimensionError(
            f"endpoints must have length {g.latent_dim} for this generator"
        )
    seg = LatentPath.segment(z1, z2, args.samples)
    profile = path_density(g, seg, prior, FdConfig(args.epsilon),
                           RankPolicy(args.sv_threshold, args.fixed_rank))
    return _profile_artifact(args, profile, {
        "z1": [float(v) for v in z1],
        "z2": [float(v) for v in z2],
        "samples": args.samples,
    })


def _cmd_decay(args) -> str:
    g = _resolve_generator(args.generator, _gen_params(args.gen_param))
    prior = _resolve_prior(args.prior, g.latent_dim)
    z0 = _parse_vector(args.z0, "--z0")
    profile = decay_profile(
        g, z0, args.direction_index, prior, FdConfig(args.epsilon),
        RankPolicy(args.sv_threshold, args.fixed_rank),
        t_max=args.t_max, n_per_side=args.samples_per_side,
        allow_degenerate=args.allow_degenerate,
    )
    return _profile_artifact(args, profile, {
        "z0": [float(v) for v in z0],
        "direction_index": args.direction_index,
        "t_max": args.t_max,
        "samples_per_side": args.samples_per_side,
        "allow_degenerate": args.allow_degenerate,
    })


def _cmd_score(args) -> str:
    g = _resolve_generator(args.generator, _gen_params(args.gen_param))
    prior = _resolve_prior(args.prior, g.latent_dim)
    latents, labels = _load_anchors(args.anchors)
    anchors = AnchorSet.from_latents(g, latents, labels)
    cfg = ScoreConfig(
        fd_cfg=FdConfig(args.epsilon),
        rank_policy=RankPolicy(args.sv_threshold, args.fixed_rank),
        path_samples=args.samples,
        ray_samples_per_side=args.samples_per_side,
        t_max=args.t_max,
        radii=_parse_radii(args.radii),
        neighbor_metric=args.nn_metric,
    )
    report = score_run(g, anchors, prior, cfg)
    config = _config_block(args, {
        "anchors_file": args.anchors,
        "n_anchors": len(anchors),
        "radii": list(cfg.radii),
        "t_max": cfg.t_max,
        "samples": cfg.path_samples,
        "samples_per_side": cfg.ray_samples_per_side,
        "nn_metric": cfg.neighbor_metric,
    })
    if args.format == "json":
        return _json_artifact(config, {"report": report.to_dict()})
    rows = [f"{args.generator},{report.mean_dip!r},{report.mean_decay!r},"
            f"{report.n_paths},{report.n_excluded}"]
    return _csv_with_meta(config, "model,mean_dip,mean_decay,n_paths,n_excluded", rows)


def _cmd_dim(args) -> str:
    g = _resolve_generator(args.generator, _gen_params(args.gen_param))
    latents, _ = _load_anchors(args.anchors)
    if latents.shape[1] != g.latent_dim:
        raise InputDimensionError(
            f"anchors have dim {latents.shape[1]}, generator wants {g.latent_dim}"
        )
    values = pointcloud_svd(latents)
    if values[0] > 0:
        above = int(np.sum(values >= args.sv_threshold * values[0]))
    else:
        above = 0
    config = _config_block(args, {
        "anchors_file": args.anchors,
        "n_points": int(latents.shape[0]),
        "n_above_threshold": above,
    })
    vals = [float(v) for v in values]
    if args.format == "json":
        return _json_artifact(config, {
            "singular_values": vals,
            "n_above_threshold": above,
        })
    rows = [f"{i},{v!r}" for i, v in enumerate(vals)]
    return _csv_with_meta(config, "index,sigma", rows)


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gendensity",
        description="Density and memorization diagnostics for generative maps",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--generator", required=True,
                       help="network file path or builtin:<name>")
        p.add_argument("--gen-param", action="append", metavar="KEY=JSON",
                       help="builtin parameter (repeatable)")
        p.add_argument("--prior", default="normal",
                       help="'normal' or 'uniform:lo,hi' (default: normal)")
        p.add_argument("--epsilon", type=float, default=FdConfig().epsilon,
                       help="central-difference step")
        p.add_argument("--sv-threshold", type=float,
                       default=RankPolicy().relative_threshold,
                       help="relative singular-value threshold")
        p.add_argument("--fixed-rank", type=int, default=None,
                       help="override the rank policy with a fixed rank")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for any requested sampling")
        p.add_argument("--out", default=None, help="output file (default stdout)")

    p = sub.add_parser("spectrum", help="singular values at a point or mean spectrum")
    common(p)
    p.add_argument("--point", default=None, help="latent point as a JSON vector")
    p.add_argument("--anchors", default=None, help="JSON anchors file")
    p.add_argument("--sample-points", type=int, default=None,
                   help="draw this many latent points from the prior")
    p.add_argument("--k", type=int, default=None, help="spectrum length to keep")
    p.set_defaults(fn=_cmd_spectrum)

    p = sub.add_parser("path", help="density profile along a latent segment")
    common(p)
    p.add_argument("--z1", required=True, help="segment start (JSON vector)")
    p.add_argument("--z2", required=True, help="segment end (JSON vector)")
    p.add_argument("--samples", type=int, default=101)
    p.set_defaults(fn=_cmd_path)

    p = sub.add_parser("decay", help="density profile along a singular direction")
    common(p)
    p.add_argument("--z0", required=True, help="center point (JSON vector)")
    p.add_argument("--direction-index", type=int, default=0)
    p.add_argument("--t-max", type=float, default=3.0)
    p.add_argument("--samples-per-side", type=int, default=51)
    p.add_argument("--allow-degenerate", action="store_true",
                   help="profile a below-threshold direction anyway")
    p.set_defaults(fn=_cmd_decay)

    p = sub.add_parser("score", help="mean dip and mean decay over an anchor set")
    common(p)
    p.add_argument("--anchors", required=True, help="JSON anchors file")
    p.add_argument("--samples", type=int, default=101)
    p.add_argument("--samples-per-side", type=int, default=51)
    p.add_argument("--t-max", type=float, default=3.0)
    p.add_argument("--radii", default="0.5,1.0",
                   help="decay radii (comma list or JSON)")
    p.add_argument("--nn-metric", choices=("output", "latent"), default="output",
                   help="space in which nearest neighbors are found")
    p.set_defaults(fn=_cmd_score)

    p = sub.add_parser("dim", help="point-cloud SVD of latent anchors")
    common(p)
    p.add_argument("--anchors", required=True, help="JSON anchors file")
    p.set_defaults(fn=_cmd_dim)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        text = args.fn(args)
    except GendensityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (OSError, KeyError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    _emit(text, args.out)
    return 0


if __name__ == "__main__":
    sys.exit(main())
