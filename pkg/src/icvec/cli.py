"""Command-line front end.

Subcommands: generate, rips, persist, vectorize, distance, experiment, verify.
Exit status 0 on success, 2 when an assertion inside an experiment (or a
verify re-run) fails, 1 on bad input.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import experiments as exp
from . import homology, metrics, pointcloud, rips, vectorize


def _common_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--seed", type=int, default=None, help="RNG seed (PCG64)")
    parser.add_argument("--out", type=str, default=None, help="output file or directory")
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="output format for data subcommands")
    parser.add_argument("--delta", type=float, default=None,
                        help="stable-vector regularization term")
    parser.add_argument("--max-filtration", type=float, default=None,
                        help="largest filtration value kept")
    parser.add_argument("--cap-at-max", action="store_true",
                        help="replace infinite deaths with the max filtration")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="icvec",
        description="Interconnectivity vectorizations of persistence diagrams",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="generate or ingest a point cloud")
    _common_flags(p)
    p.add_argument("--kind", required=True,
                   choices=pointcloud.GENERATOR_KINDS + ("linked-twist", "sliding-window", "image"))
    p.add_argument("--n", type=int, default=400, help="number of points / iterates")
    p.add_argument("--dim", type=int, default=2, help="ambient dimension (uniform/normal)")
    p.add_argument("--r", type=float, default=2.5, help="linked-twist parameter")
    p.add_argument("--x0", type=float, default=None)
    p.add_argument("--y0", type=float, default=None)
    p.add_argument("--m", type=int, default=2, help="sliding-window shift count")
    p.add_argument("--tau", type=float, default=6.0, help="sliding-window shift size")
    p.add_argument("--input", type=str, default=None,
                   help="samples CSV (sliding-window) or image file (image)")
    p.add_argument("--threshold", type=float, default=128.0)
    p.add_argument("--include-intensity", action="store_true")

    p = sub.add_parser("rips", help="dump the Rips filtration of a point cloud")
    _common_flags(p)
    p.add_argument("--input", required=True, help="points CSV")
    p.add_argument("--max-dim", type=int, default=2, choices=(1, 2))
    p.add_argument("--double-scale", action="store_true",
                   help="halve entry values (simplex present when d <= 2t)")

    p = sub.add_parser("persist", help="persistence diagram of a point cloud")
    _common_flags(p)
    p.add_argument("--input", required=True, help="points CSV")
    p.add_argument("--max-dim", type=int, default=2, choices=(1, 2))
    p.add_argument("--double-scale", action="store_true")

    p = sub.add_parser("vectorize", help="feature vector of a diagram")
    _common_flags(p)
    p.add_argument("--input", required=True, help="diagram CSV")
    p.add_argument("--method", required=True,
                   choices=("persistence", "interconnectivity", "stable"))
    p.add_argument("--dim", type=int, default=1)
    p.add_argument("--normalized", action="store_true")

    p = sub.add_parser("distance", help="distance between two diagram CSVs")
    _common_flags(p)
    p.add_argument("diagram_a")
    p.add_argument("diagram_b")
    p.add_argument("--metric", default="wasserstein",
                   choices=("wasserstein", "bottleneck", "sliced"))
    p.add_argument("--p", type=float, default=1.0)
    p.add_argument("--n-directions", type=int, default=50)
    p.add_argument("--dim", type=int, default=1)

    p = sub.add_parser("experiment", help="run a named experiment")
    _common_flags(p)
    p.add_argument("name", choices=sorted(exp.EXPERIMENTS))
    p.add_argument("--n-points", type=int, default=None)
    p.add_argument("--repetitions", type=int, default=None)
    p.add_argument("--mode", choices=("one_point", "random_many"), default=None)
    p.add_argument("--cloud-dim", type=int, default=None)
    p.add_argument("--eps-min", type=float, default=None)
    p.add_argument("--eps-max", type=float, default=None)
    p.add_argument("--eps-count", type=int, default=None)
    p.add_argument("--wide-eps-max", type=float, default=None)
    p.add_argument("--wide-eps-count", type=int, default=None)
    p.add_argument("--delta-min", type=float, default=None)
    p.add_argument("--delta-max", type=float, default=None)
    p.add_argument("--delta-count", type=int, default=None)
    p.add_argument("--r-values", type=str, default=None,
                   help="comma-separated linked-twist parameters")
    p.add_argument("--image-dir", type=str, default=None)
    p.add_argument("--threshold", type=float, default=None)
    p.add_argument("--include-intensity", action="store_true", default=None)
    p.add_argument("--windows", type=int, default=None, help="sliding-window count")
    p.add_argument("--m", type=int, default=None)
    p.add_argument("--tau", type=float, default=None)
    p.add_argument("--domain-end", type=float, default=None)
    p.add_argument("--amplitude", type=float, default=None)

    p = sub.add_parser("verify", help="re-derive a report and diff its CSVs")
    p.add_argument("report_dir")

    return parser


def _write_points(cloud, args) -> None:
    if args.out is None:
        raise ValueError("--out is required")
    if args.format == "json":
        payload = {
            "points": [list(p) for p in cloud.points],
            "ambient_dim": cloud.ambient_dim,
            "provenance": cloud.provenance,
            "seed": cloud.seed,
        }
        Path(args.out).write_text(json.dumps(payload, sort_keys=True) + "\n")
    else:
        pointcloud.save_points_csv(cloud, args.out)


def _cmd_generate(args) -> int:
    kind = args.kind
    if kind in pointcloud.GENERATOR_KINDS:
        cloud = pointcloud.generate(kind, args.n, seed=args.seed, dim=args.dim)
    elif kind == "linked-twist":
        if args.x0 is None or args.y0 is None:
            rng = np.random.default_rng(args.seed)
            x0, y0 = (float(v) for v in rng.random(2))
        else:
            x0, y0 = args.x0, args.y0
        cloud = pointcloud.linked_twist_orbit(args.r, x0, y0, args.n)
    elif kind == "sliding-window":
        if args.input is None:
            raise ValueError("--input samples CSV required for sliding-window")
        samples = pointcloud.load_points_csv(args.input).asarray()
        cloud = pointcloud.sliding_window_embed(samples, args.m, args.tau)
    else:  # image
        if args.input is None:
            raise ValueError("--input image file required")
        cloud = pointcloud.image_to_point_cloud(
            pointcloud.load_image(args.input), args.threshold,
            include_intensity=args.include_intensity,
        )
    _write_points(cloud, args)
    return 0


def _load_cloud_matrix(path: str) -> np.ndarray:
    return pointcloud.distance_matrix(pointcloud.load_points_csv(path))


def _default_max_filtration(args, dmat) -> float:
    if args.max_filtration is not None:
        return args.max_filtration
    return float(dmat.max()) or 1.0


def _cmd_rips(args) -> int:
    if args.out is None:
        raise ValueError("--out is required")
    dmat = _load_cloud_matrix(args.input)
    filtration = rips.build_rips(
        dmat, _default_max_filtration(args, dmat), args.max_dim, args.double_scale
    )
    rips.save_filtration_csv(filtration, args.out)
    return 0


def _cmd_persist(args) -> int:
    if args.out is None:
        raise ValueError("--out is required")
    dmat = _load_cloud_matrix(args.input)
    diagram = homology.rips_persistence(
        dmat, _default_max_filtration(args, dmat), args.max_dim, args.double_scale
    )
    if args.format == "json":
        payload = {
            "max_filtration": diagram.max_filtration,
            "points": [
                {"dim": p.dim, "birth": p.birth,
                 "death": None if p.is_infinite else p.death}
                for p in diagram.points
            ],
        }
        Path(args.out).write_text(json.dumps(payload, sort_keys=True) + "\n")
    else:
        homology.save_diagram_csv(diagram, args.out)
    return 0


def _cmd_vectorize(args) -> int:
    if args.out is None:
        raise ValueError("--out is required")
    diagram = homology.load_diagram_csv(args.input)
    delta = vectorize.DEFAULT_DELTA if args.delta is None else args.delta
    if args.method == "persistence":
        vec = vectorize.persistence_vector(
            diagram, args.dim, normalized=args.normalized, cap_at_max=args.cap_at_max
        )
    elif args.method == "interconnectivity":
        vec = vectorize.interconnectivity_vector(diagram, args.dim, cap_at_max=args.cap_at_max)
    else:
        vec = vectorize.stable_interconnectivity_vector(
            diagram, args.dim, delta=delta, cap_at_max=args.cap_at_max
        )
    source_hash = hashlib.sha256(Path(args.input).read_bytes()).hexdigest()
    if args.format == "json":
        payload = {
            "method": vec.method, "dim": vec.dim, "params": dict(vec.params),
            "values": list(vec.values), "source_diagram_sha256": source_hash,
        }
        Path(args.out).write_text(json.dumps(payload, sort_keys=True) + "\n")
    else:
        vectorize.save_vector_csv(vec, args.out, source_hash=source_hash)
    return 0


def _cmd_distance(args) -> int:
    d1 = homology.load_diagram_csv(args.diagram_a)
    d2 = homology.load_diagram_csv(args.diagram_b)
    policy = "cap" if args.cap_at_max else "exclude"
    if args.metric == "wasserstein":
        value = metrics.wasserstein(d1, d2, p=args.p, dim=args.dim, infinite=policy).total
    elif args.metric == "bottleneck":
        value = metrics.bottleneck(d1, d2, dim=args.dim, infinite=policy)
    else:
        value = metrics.sliced_wasserstein(
            d1, d2, n_directions=args.n_directions, dim=args.dim, infinite=policy
        )
    print(json.dumps({"metric": args.metric, "p": args.p, "value": value}))
    return 0


def _cmd_experiment(args) -> int:
    out = args.out or str(Path("icvec_out") / args.name)
    kwargs = {
        "seed": args.seed,
        "delta": args.delta,
        "max_filtration": args.max_filtration,
        "n_points": args.n_points,
        "repetitions": args.repetitions,
        "mode": args.mode,
        "cloud_dim": args.cloud_dim,
        "eps_min": args.eps_min,
        "eps_max": args.eps_max,
        "eps_count": args.eps_count,
        "wide_eps_max": args.wide_eps_max,
        "wide_eps_count": args.wide_eps_count,
        "delta_min": args.delta_min,
        "delta_max": args.delta_max,
        "delta_count": args.delta_count,
        "image_dir": args.image_dir,
        "threshold": args.threshold,
        "include_intensity": args.include_intensity,
        "n_windows": args.windows,
        "m": args.m,
        "tau": args.tau,
        "domain_end": args.domain_end,
        "amplitude": args.amplitude,
    }
    if args.r_values is not None:
        kwargs["r_values"] = tuple(float(tok) for tok in args.r_values.split(","))
    kwargs = {k: v for k, v in kwargs.items() if v is not None}
    exp.EXPERIMENTS[args.name](out, **kwargs)
    print(f"report written to {out}")
    return 0


def _cmd_verify(args) -> int:
    mismatches = exp.verify_report(args.report_dir)
    if mismatches:
        print("MISMATCH: " + ", ".join(mismatches))
        return 2
    print("verified: report reproduces byte-identically")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    handlers = {
        "generate": _cmd_generate,
        "rips": _cmd_rips,
        "persist": _cmd_persist,
        "vectorize": _cmd_vectorize,
        "distance": _cmd_distance,
        "experiment": _cmd_experiment,
        "verify": _cmd_verify,
    }
    try:
        return handlers[args.command](args)
    except exp.ExperimentAssertionError as err:
        print(f"experiment assertion failed: {err}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
