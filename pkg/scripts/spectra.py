"""Value spectra, nearest-value bins and low-value mass for every preset.

    python3 scripts/spectra.py --out-dir runs/spectra
    python3 scripts/spectra.py --presets graph500 --levels 18 26 42

One subdirectory per (preset, levels) with the CSVs written by
``krongraph spectrum``, plus a combined summary.csv.
"""

import argparse
import os

from krongraph.edgeio import write_csv
from krongraph.pipeline import cmd_spectrum
from krongraph.presets import PRESETS


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--presets", nargs="+", default=sorted(PRESETS))
    ap.add_argument("--levels", type=int, nargs="+",
                    help="override levels (default: each preset's own)")
    ap.add_argument("--threshold", type=float, default=1e-20)
    ap.add_argument("--out-dir", default="runs/spectra")
    args = ap.parse_args()

    keys, rows = None, []
    for name in args.presets:
        p = PRESETS[name]
        for levels in args.levels or [p.levels]:
            out = os.path.join(args.out_dir, f"{name}-{levels}")
            summary = cmd_spectrum(p.generator, levels, out, args.threshold)
            keys = keys or list(summary)
            rows.append([name] + [summary[k] for k in keys])
            print(f"{name} l={levels}: {summary['skg_distinct']} SKG values, "
                  f"{summary['cl_distinct']} CL values, gap {summary['theorem_gap']:.3g}, "
                  f"SKG mass below {args.threshold:g} {summary['skg_mass_in_bins_below']:.3g}")
    write_csv(os.path.join(args.out_dir, "summary.csv"), ["preset"] + keys, rows)


if __name__ == "__main__":
    main()
