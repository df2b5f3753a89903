"""Command-line interface.

Exit codes: 0 success, 2 input or parse error, 3 domain precondition
failure, 4 mergegram not in general position.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import io
from .core import Diagram, Mergegram
from .errors import (
    ConfigError,
    DimensionMismatch,
    InvalidMetric,
    MergegramError,
    NotGeneralPosition,
    ParseError,
)
from .experiment import ExperimentConfig, report_text, run_experiment, summary_line
from .invariants import mergegram, nn_distances, persistence0d_from_mst
from .linkage import ScaleConvention, cloud_mst, single_linkage
from .metrics import bottleneck, hausdorff
from .perturb import (
    NoiseKind,
    affine_distort,
    jitter,
    projective_distort,
    random_isometry,
    random_rotation,
    rotate_cloud,
)
from .reconstruct import reconstruct_dendrogram

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_DOMAIN = 3
EXIT_GENERAL_POSITION = 4


class UsageError(Exception):
    pass


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _note(message: str, out: str | None) -> None:
    """Human-readable summary: stdout when data went to a file, else stderr."""
    print(message, file=sys.stdout if out else sys.stderr)


def cmd_compute(args) -> int:
    conv = ScaleConvention(args.convention)
    if args.precomputed:
        if args.invariant == "nnk":
            raise UsageError("nnk needs coordinates, not a distance matrix")
        source = io.read_cloud(args.cloud).points
        try:
            tree = cloud_mst(source, metric="precomputed")
        except InvalidMetric as exc:
            raise ParseError(str(exc)) from None
        n = len(source)
    else:
        cloud = io.read_cloud(args.cloud)
        n = len(cloud)
        if args.invariant == "nnk":
            nn = nn_distances(cloud, args.k)
            _emit(io.nn_to_text(nn), args.out)
            _note(f"NN({args.k}): {len(nn)} rows from {n} points", args.out)
            return EXIT_OK
        tree = cloud_mst(cloud)
    if args.invariant == "mergegram":
        diagram = mergegram(single_linkage(tree, conv))
    else:
        diagram = persistence0d_from_mst(tree, conv)
    _emit(io.diagram_to_text(diagram), args.out)
    _note(f"{args.invariant}: {len(diagram)} pairs ({len(diagram.pairs)} distinct) from {n} points", args.out)
    return EXIT_OK


def cmd_distance(args) -> int:
    if args.mode == "bottleneck":
        try:
            d1, d2 = io.read_diagram(args.file1), io.read_diagram(args.file2)
        except ParseError as exc:
            raise ParseError(f"bottleneck mode expects diagram TSV files: {exc}") from None
        value = bottleneck(d1, d2)
    else:
        try:
            c1, c2 = io.read_cloud(args.file1), io.read_cloud(args.file2)
        except ParseError as exc:
            raise ParseError(f"hausdorff mode expects cloud CSV files: {exc}") from None
        value = hausdorff(c1, c2)
    print(io.format_scale(value))
    return EXIT_OK


def cmd_reconstruct(args) -> int:
    mg = io.read_diagram(args.mergegram, cls=Diagram)
    try:
        mg = Mergegram(mg.pairs)
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    tree = reconstruct_dendrogram(mg)
    _emit(json.dumps(tree.to_dict(), indent=2) + "\n", args.out)
    return EXIT_OK


def cmd_perturb(args) -> int:
    cloud = io.read_cloud(args.cloud)
    kind = args.kind
    if kind == "rotate" and args.angle is not None:
        out = rotate_cloud(cloud, args.angle)
    else:
        if args.seed is None:
            raise UsageError(f"--seed is required for --kind {kind}")
        noise = NoiseKind(args.noise)
        if kind == "rotate":
            out = random_rotation(cloud, args.seed)
        elif kind == "affine":
            out = affine_distort(cloud, args.delta, noise, args.seed)
        elif kind == "projective":
            out = projective_distort(cloud, args.delta, noise, args.seed)
        elif kind == "jitter":
            out = jitter(cloud, args.delta, args.seed)
        else:
            out = random_isometry(cloud, args.seed, allow_reflection=not args.no_reflection)
    text = "".join(",".join(repr(float(x)) for x in row) + "\n" for row in out.points)
    _emit(text, args.out)
    return EXIT_OK


def cmd_experiment(args) -> int:
    cfg = ExperimentConfig.load(args.config)
    if args.workers is not None:
        cfg = ExperimentConfig.from_dict({**cfg.to_dict(), "workers": args.workers})
    results = run_experiment(cfg)
    out = args.out or cfg.out
    _emit(report_text(results), out)
    print(summary_line(results))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mergegram", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("compute", help="compute an invariant of a cloud CSV")
    p.add_argument("cloud")
    p.add_argument("--invariant", choices=("mergegram", "pd0", "nnk"), default="mergegram")
    p.add_argument("--k", type=int, default=4, help="neighbours for nnk (default 4)")
    p.add_argument("--convention", choices=("half", "full"), default="half")
    p.add_argument("--precomputed", action="store_true", help="the CSV is a distance matrix")
    p.add_argument("--out")
    p.set_defaults(func=cmd_compute)

    p = sub.add_parser("distance", help="bottleneck between diagrams or Hausdorff between clouds")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--mode", choices=("bottleneck", "hausdorff"), default="bottleneck")
    p.set_defaults(func=cmd_distance)

    p = sub.add_parser("reconstruct", help="dendrogram JSON from a general-position mergegram")
    p.add_argument("mergegram")
    p.add_argument("--out")
    p.set_defaults(func=cmd_reconstruct)

    p = sub.add_parser("perturb", help="write a distorted copy of a cloud")
    p.add_argument("cloud")
    p.add_argument("--kind", choices=("rotate", "affine", "projective", "jitter", "isometry"), required=True)
    p.add_argument("--delta", type=float, default=0.0, help="noise level (epsilon for jitter)")
    p.add_argument("--noise", choices=("uniform", "gaussian"), default="uniform")
    p.add_argument("--seed", type=int)
    p.add_argument("--angle", type=float, help="fixed rotation angle in radians")
    p.add_argument("--no-reflection", action="store_true")
    p.add_argument("--out")
    p.set_defaults(func=cmd_perturb)

    p = sub.add_parser("experiment", help="run a stability experiment from a JSON config")
    p.add_argument("config")
    p.add_argument("--out")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except NotGeneralPosition as exc:
        scale = "" if exc.scale is None else f" (death scale {io.format_scale(exc.scale)})"
        print(f"error: not in general position{scale}: {exc}", file=sys.stderr)
        return EXIT_GENERAL_POSITION
    except (ParseError, ConfigError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (MergegramError, DimensionMismatch, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN


if __name__ == "__main__":
    sys.exit(main())
