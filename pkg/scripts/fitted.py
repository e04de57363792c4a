"""Real SNAP graphs against CL, SKG and NSKG counterparts.

Needs the original edge files, e.g.

    python3 scripts/fitted.py --snap-dir data/snap --out-dir runs/fitted

For each fitted preset: the real graph, a CL fit to its degrees, and SKG /
NSKG graphs from the preset's generator (n = 2**levels, m = real edge count).
Each model is compared to the real graph with ``write_comparison``.
"""

import argparse
import logging
import os

from krongraph.edgeio import read_edge_file, write_csv
from krongraph.graph import symmetrize
from krongraph.metrics import compare_reports, compute_report
from krongraph.models import generate_cl, generate_nskg, generate_skg
from krongraph.pipeline import fit_cl_degrees, write_comparison
from krongraph.presets import PRESETS

log = logging.getLogger("fitted")


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--snap-dir", required=True)
    ap.add_argument("--presets", nargs="+",
                    default=[n for n, p in PRESETS.items() if p.snap_name])
    ap.add_argument("--noise", type=float, default=0.1)
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--eigs", type=int, default=25)
    ap.add_argument("--out-dir", default="runs/fitted")
    args = ap.parse_args()
    logging.basicConfig(level=logging.INFO, format="%(asctime)s %(message)s")

    rows = []
    for name in args.presets:
        p = PRESETS[name]
        path = os.path.join(args.snap_dir, p.snap_name)
        if not os.path.exists(path):
            log.warning("skipping %s: %s not found", name, path)
            continue
        edges, n = read_edge_file(path)
        real_g, sym = symmetrize(edges, n)
        log.info("%s: %d edges after dedup (%d duplicates, %d loops)",
                 name, real_g.edge_count, sym.duplicates, sym.self_loops)
        real = compute_report(real_g, k=args.eigs)

        degrees, m = fit_cl_degrees(real_g)
        params = p.params()
        models = {
            "cl": (generate_cl(degrees, m, args.seed), real_g.n),
            "skg": (generate_skg(params, args.seed), params.n),
            "nskg": (generate_nskg(params, args.noise, args.seed)[1], params.n),
        }
        for model, (model_edges, model_n) in models.items():
            g, _ = symmetrize(model_edges, model_n)
            rep = compute_report(g, k=args.eigs)
            cmp = compare_reports(real, rep, min_count=1)
            write_comparison(real, rep, cmp, os.path.join(args.out_dir, name, model))
            rows.append((name, model, g.edge_count, cmp.degree_tv, cmp.cc_gap,
                         cmp.eig_max_rel_gap, cmp.core_rel_gap))
            log.info("%s vs %s: degree TV %.4f, cc gap %.4f", name, model,
                     cmp.degree_tv, cmp.cc_gap)

    write_csv(os.path.join(args.out_dir, "summary.csv"),
              ["preset", "model", "edges", "degree_tv", "cc_max_gap", "eig_max_rel_gap",
               "core_max_rel_gap"], rows)


if __name__ == "__main__":
    main()
