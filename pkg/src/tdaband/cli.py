"""Command line front end.

Subcommands:
    generate    draw a synthetic sample and write it as CSV
    diagram     compute a persistence diagram from a point CSV
    band        compute a confidence band from a point CSV
    experiment  run a canned end-to-end analysis into a directory

Every command is a deterministic function of its flags, so re-running
with identical arguments reproduces identical bytes. Exit codes: 0 on
success, 2 for usage or configuration errors, 3 when a band solver finds
no root in its bracket, 4 for file I/O failures.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Optional

from .confidence import (
    concentration_band,
    conservative_band,
    default_subsample_size,
    shells_band,
    subsample_band,
)
from .datasets import GENERATOR_KINDS, GeneratorSpec, generate
from .density import KernelSpec, default_grid, density_diagram, kde
from .errors import ConfigError, SolverError
from .experiments import (
    DENSITY_METHODS,
    EXPERIMENT_NAMES,
    RIPS_METHODS,
    density_band,
    run_named_experiment,
)
from .geometry import DensityParams, PointCloud, default_rn
from .persistence import rips_diagram
from .svgplot import diagram_svg

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_SOLVER = 3
EXIT_IO = 4


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tdaband",
        allow_abbrev=False,
        description="Persistence diagrams with confidence bands.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("generate", allow_abbrev=False, help="draw a synthetic sample")
    gen.add_argument("--kind", required=True, help=f"one of: {', '.join(GENERATOR_KINDS)}")
    gen.add_argument("--n", required=True, type=int, help="sample size")
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--out", required=True, help="output CSV path")

    dia = sub.add_parser(
        "diagram", allow_abbrev=False, help="persistence diagram of a point CSV"
    )
    dia.add_argument("pipeline", choices=("rips", "density"))
    dia.add_argument("input", help="point CSV, one comma-separated point per line")
    dia.add_argument("--out", required=True, help="output diagram CSV path")
    dia.add_argument("--max-dim", type=int, default=2, help="largest simplex dimension")
    dia.add_argument(
        "--max-scale",
        type=float,
        default=None,
        help="Rips truncation radius (default: half the cloud diameter)",
    )
    dia.add_argument("--h", type=float, default=0.3, help="KDE bandwidth")
    dia.add_argument("--grid-res", type=int, default=64, help="grid points per axis")
    dia.add_argument("--plot", default=None, help="also write an SVG to this path")

    band = sub.add_parser(
        "band", allow_abbrev=False, help="confidence band from a point CSV"
    )
    band.add_argument("input", help="point CSV")
    band.add_argument(
        "--method",
        required=True,
        choices=RIPS_METHODS + DENSITY_METHODS,
    )
    band.add_argument("--out", required=True, help="output JSON path")
    band.add_argument("--alpha", type=float, default=0.05)
    band.add_argument("--seed", type=int, default=0)
    band.add_argument("--d", type=int, default=1, help="intrinsic dimension")
    band.add_argument("--b", type=int, default=0, help="subsample size (0 = default)")
    band.add_argument("--reps", type=int, default=500, help="subsample replicates")
    band.add_argument("--B", type=int, default=300, help="bootstrap replicates")
    band.add_argument("--h", type=float, default=0.3, help="KDE bandwidth")
    band.add_argument("--grid-res", type=int, default=64, help="grid points per axis")
    band.add_argument(
        "--split", action="store_true", help="estimate on one half, band the other"
    )

    exp = sub.add_parser(
        "experiment", allow_abbrev=False, help="run a canned end-to-end analysis"
    )
    exp.add_argument("name", choices=EXPERIMENT_NAMES)
    exp.add_argument("--seed", type=int, default=0)
    exp.add_argument("--alpha", type=float, default=0.05)
    exp.add_argument("--out", required=True, help="report directory")
    return parser


def _load_cloud(path: str) -> PointCloud:
    return PointCloud.load_csv(path)


def cmd_generate(args: argparse.Namespace) -> int:
    spec = GeneratorSpec(kind=args.kind, n=args.n, seed=args.seed)
    cloud = generate(spec)
    cloud.save_csv(args.out)
    print(f"wrote {cloud.n} points to {args.out}")
    return EXIT_OK


def cmd_diagram(args: argparse.Namespace) -> int:
    cloud = _load_cloud(args.input)
    if args.pipeline == "rips":
        max_scale = args.max_scale
        if max_scale is None:
            max_scale = cloud.diameter() / 2.0 or 1.0
        diagram = rips_diagram(cloud, max_scale=max_scale, max_dim=args.max_dim)
        config_echo = f"pipeline=rips max_dim={args.max_dim} max_scale={max_scale!r}"
    else:
        kernel = KernelSpec.make("gaussian", args.h, cloud.ambient_dim)
        grid = default_grid(cloud, kernel, resolution=args.grid_res)
        diagram = density_diagram(kde(cloud, kernel, grid))
        config_echo = f"pipeline=density h={args.h!r} grid_res={args.grid_res}"
    diagram.save_csv(args.out)
    with open(args.out, "r", encoding="utf-8") as fh:
        body = fh.read()
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(f"# config: {config_echo}\n")
        fh.write(body)
    if args.plot is not None:
        with open(args.plot, "w", encoding="utf-8") as fh:
            fh.write(diagram_svg(diagram, title=f"{args.pipeline} diagram"))
    print(f"wrote {len(diagram.pairs)} pairs to {args.out}")
    return EXIT_OK


def cmd_band(args: argparse.Namespace) -> int:
    cloud = _load_cloud(args.input)
    method = args.method
    if method == "subsample":
        b = args.b if args.b > 0 else default_subsample_size(cloud.n)
        result = subsample_band(cloud, b=b, reps=args.reps, alpha=args.alpha, seed=args.seed)
    elif method in ("concentration", "concentration_split"):
        params = DensityParams(args.d, default_rn(cloud.n, args.d))
        result = concentration_band(
            cloud,
            params,
            args.alpha,
            split=(method == "concentration_split" or args.split),
            seed=args.seed,
        )
    elif method == "shells":
        params = DensityParams(args.d, default_rn(cloud.n, args.d))
        result = shells_band(cloud, params, args.alpha, split=args.split, seed=args.seed)
    elif method == "conservative":
        params = DensityParams(args.d, default_rn(cloud.n, args.d))
        result = conservative_band(cloud, params, args.alpha)
    else:
        kernel = KernelSpec.make("gaussian", args.h, cloud.ambient_dim)
        grid = default_grid(cloud, kernel, resolution=args.grid_res)
        result = density_band(
            method, cloud, kernel, grid, args.alpha, replicates=args.B, seed=args.seed
        )
    with open(args.out, "w", encoding="utf-8") as fh:
        fh.write(result.to_json())
        fh.write("\n")
    print(f"{result.method}: c = {result.c!r}")
    return EXIT_OK


def cmd_experiment(args: argparse.Namespace) -> int:
    summary = run_named_experiment(args.name, seed=args.seed, outdir=args.out, alpha=args.alpha)
    for pipeline, entry in sorted(summary["pipelines"].items()):
        for method, res in sorted(entry["methods"].items()):
            sig = json.dumps(res["significant"], sort_keys=True)
            c = "unbounded" if res["c"] is None else f"{res['c']:.6g}"
            print(f"{pipeline}/{method}: c={c} significant={sig}")
        if "mode_count" in entry:
            mc = entry["mode_count"]
            print(
                f"{pipeline}/mode_count: observed={mc['observed']} "
                f"ci=[{mc['ci'][0]}, {mc['ci'][1]}]"
            )
    print(f"report written to {args.out}")
    return EXIT_OK


def main(argv: Optional[list] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "generate": cmd_generate,
        "diagram": cmd_diagram,
        "band": cmd_band,
        "experiment": cmd_experiment,
    }
    try:
        return handlers[args.command](args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except SolverError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
