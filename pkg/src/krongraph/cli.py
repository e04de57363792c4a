"""``krongraph`` command line."""

import argparse
import logging
import os
import sys

from . import __version__
from .errors import KronGraphError
from .metrics import ALL_METRICS, DEFAULT_EIGS
from .models import DEFAULT_CHUNK_SIZE, validate_generator
from .pipeline import (
    ExperimentConfig,
    cmd_analyze,
    cmd_compare,
    cmd_fit_cl,
    cmd_generate,
    cmd_spectrum,
)
from .presets import GRAPH500_LEVELS, PRESETS, get_preset


def _add_matrix_args(p):
    p.add_argument("--preset", help="named parameter set (see `krongraph presets`)")
    for name in ("t1", "t2", "t3", "t4"):
        p.add_argument(f"--{name}", type=float)
    p.add_argument("--levels", type=int, help="log2 of the vertex count")


def _matrix_from_args(args):
    given = [getattr(args, t) for t in ("t1", "t2", "t3", "t4")]
    if all(x is not None for x in given):
        return validate_generator(*given)
    if any(x is not None for x in given):
        raise SystemExit("give all of --t1..--t4 or none")
    return None


def _metrics(text):
    metrics = tuple(x.strip() for x in text.split(",") if x.strip())
    bad = set(metrics) - set(ALL_METRICS)
    if bad:
        raise argparse.ArgumentTypeError(f"unknown metrics {sorted(bad)}")
    return metrics


def build_parser():
    parser = argparse.ArgumentParser(prog="krongraph", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="verb", required=True)

    p = sub.add_parser("generate", help="write an SKG, NSKG or CL edge list")
    p.add_argument("--model", choices=("skg", "nskg", "cl"), default="skg")
    _add_matrix_args(p)
    p.add_argument("--edges", type=int, help="number of edge insertions m")
    p.add_argument("--noise", type=float, help="NSKG noise level")
    p.add_argument("--degrees", help="CL weights file (one or two columns per vertex)")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--chunk-size", type=int, default=DEFAULT_CHUNK_SIZE)
    p.add_argument("--threads", type=int, help="worker threads (default $KRONGRAPH_THREADS or 1)")
    p.add_argument("--out-dir", default=".")
    p.add_argument("-o", "--output", help="output path (default <out-dir>/<model>.tsv)")

    p = sub.add_parser("analyze", help="metric CSVs for an edge-list file")
    p.add_argument("graph")
    p.add_argument("--metrics", type=_metrics, default=ALL_METRICS,
                   help="comma list from " + ",".join(ALL_METRICS))
    p.add_argument("--eigs", type=int, default=DEFAULT_EIGS)
    p.add_argument("--spy", type=int, help="also write an R x R spy raster")
    p.add_argument("--out-dir", default="analysis")

    p = sub.add_parser("compare", help="analyze two graphs and write paired CSVs + gaps")
    p.add_argument("graph_a")
    p.add_argument("graph_b")
    p.add_argument("--eigs", type=int, default=DEFAULT_EIGS)
    p.add_argument("--min-count", type=int, default=1,
                   help="ignore degree classes with fewer vertices in either graph")
    p.add_argument("--out-dir", default="comparison")

    p = sub.add_parser("fit-cl", help="CL graph matching the degrees of an edge-list file")
    p.add_argument("graph")
    p.add_argument("--edges", type=int, help="insertions (default: observed edge count)")
    p.add_argument("--seed", type=int, default=1)
    p.add_argument("--chunk-size", type=int, default=DEFAULT_CHUNK_SIZE)
    p.add_argument("--threads", type=int)
    p.add_argument("--out-dir", default=".")
    p.add_argument("-o", "--output")

    p = sub.add_parser("spectrum", help="value spectra, bins and mass summary of P_SKG / P_CL")
    _add_matrix_args(p)
    p.add_argument("--threshold", type=float, default=1e-20)
    p.add_argument("--out-dir", default="spectrum")

    sub.add_parser("presets", help="list built-in parameter sets")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return _dispatch(args)
    except (KronGraphError, KeyError, ValueError, OSError) as exc:
        print(f"krongraph {args.verb}: error: {exc}", file=sys.stderr)
        return 2


def _dispatch(args):
    if args.verb == "generate":
        cfg = ExperimentConfig(
            model=args.model, preset=args.preset, generator=_matrix_from_args(args),
            levels=args.levels, m=args.edges, noise=args.noise, seed=args.seed,
            chunk_size=args.chunk_size, threads=args.threads, degrees_file=args.degrees,
            out_dir=args.out_dir, output=args.output,
        )
        print(cmd_generate(cfg))
    elif args.verb == "analyze":
        _, written = cmd_analyze(args.graph, args.out_dir, args.metrics, args.eigs, args.spy)
        print("\n".join(written))
    elif args.verb == "compare":
        cmp = cmd_compare(args.graph_a, args.graph_b, args.out_dir, args.eigs, args.min_count)
        print(f"cc_max_gap={cmp.cc_gap:.6g} eig_max_rel_gap={cmp.eig_max_rel_gap:.6g} "
              f"core_max_rel_gap={cmp.core_rel_gap:.6g} degree_tv={cmp.degree_tv:.6g}")
    elif args.verb == "fit-cl":
        out = args.output or os.path.join(args.out_dir, "cl_fit.tsv")
        print(cmd_fit_cl(args.graph, out, args.edges, args.seed, args.chunk_size, args.threads))
    elif args.verb == "spectrum":
        T = _matrix_from_args(args)
        levels = args.levels
        if args.preset:
            p = get_preset(args.preset)
            T = T or p.generator
            levels = levels or p.levels
        if T is None or levels is None:
            raise SystemExit("spectrum needs --preset or --t1..--t4 with --levels")
        summary = cmd_spectrum(T, levels, args.out_dir, args.threshold)
        for key, value in summary.items():
            print(f"{key}: {value}")
    elif args.verb == "presets":
        for p in PRESETS.values():
            extra = f" (also levels {', '.join(map(str, GRAPH500_LEVELS))})" if p.name == "graph500" else ""
            print(f"{p.name}: T={list(p.generator.as_tuple())} levels={p.levels}{extra} m={p.m}"
                  + (f" noise={p.noise}" if p.noise is not None else ""))
    return 0


if __name__ == "__main__":
    sys.exit(main())
