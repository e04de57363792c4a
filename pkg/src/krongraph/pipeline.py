"""Command implementations shared by the CLI, scripts and tests."""

import logging
import os
import shlex
from dataclasses import dataclass, field

import numpy as np

from . import __version__
from .edgeio import file_sha256, read_edge_file, read_header, write_csv, write_edge_list, write_pgm
from .graph import symmetrize
from .metrics import ALL_METRICS, DEFAULT_EIGS, compare_reports, compute_report
from .models import (
    DEFAULT_CHUNK_SIZE,
    DegreeSequence,
    SkgParams,
    associated_cl,
    check_ratio_condition,
    generate_cl,
    generate_nskg,
    generate_skg,
    validate_generator,
)
from .errors import DegenerateMatrix
from .presets import get_preset, graph500_edges
from .spectrum import bin_skg_into_cl, cl_spectrum, mass_below, skg_spectrum, spy_raster, theorem_gap

log = logging.getLogger(__name__)

MODELS = ("skg", "nskg", "cl")


@dataclass
class ExperimentConfig:
    model: str = "skg"
    preset: str = None
    generator: object = None
    levels: int = None
    m: int = None
    noise: float = None
    seed: int = 1
    chunk_size: int = DEFAULT_CHUNK_SIZE
    threads: int = None
    degrees_file: str = None
    metrics: tuple = ALL_METRICS
    out_dir: str = "."
    output: str = None

    def resolve(self):
        """Fill generator/levels/m/noise from the preset where not given."""
        if self.model not in MODELS:
            raise ValueError(f"model must be one of {MODELS}")
        if self.preset:
            p = get_preset(self.preset)
            if self.generator is None:
                self.generator = p.generator
            if self.levels is None:
                self.levels = p.levels
            if self.m is None:
                self.m = graph500_edges(self.levels) if p.name == "graph500" else p.m
            if self.noise is None and self.model == "nskg":
                self.noise = p.noise
        if self.model == "cl" and self.degrees_file:
            return self
        if self.generator is None or self.levels is None:
            raise ValueError("need a preset or explicit --t1..--t4 and --levels"
                             + (" (or --degrees for cl)" if self.model == "cl" else ""))
        if self.m is None:
            self.m = graph500_edges(self.levels)
        if self.model == "nskg" and self.noise is None:
            raise ValueError("nskg needs --noise or a preset that defines it")
        return self

    def output_path(self):
        if self.output:
            return self.output
        return os.path.join(self.out_dir, f"{self.model}.tsv")


def read_degree_file(path):
    """One vertex per line: ``weight`` or ``out_weight in_weight``."""
    rows = []
    with open(path) as fh:
        for line in fh:
            s = line.strip()
            if s and not s.startswith("#"):
                rows.append([float(x) for x in s.split()])
    arr = np.array(rows, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[1] not in (1, 2):
        raise ValueError(f"{path}: expected one or two columns per line")
    out = arr[:, 0]
    inn = arr[:, -1]
    return out, inn


def _fmt_matrix(T):
    return " ".join(repr(x) for x in T.as_tuple())


def _command_line(cfg):
    args = ["krongraph", "generate", "--model", cfg.model]
    if cfg.degrees_file:
        args += ["--degrees", cfg.degrees_file]
    else:
        args += ["--t1", repr(cfg.generator.t1), "--t2", repr(cfg.generator.t2),
                 "--t3", repr(cfg.generator.t3), "--t4", repr(cfg.generator.t4),
                 "--levels", str(cfg.levels)]
    args += ["--edges", str(cfg.m), "--seed", str(cfg.seed), "--chunk-size", str(cfg.chunk_size)]
    if cfg.model == "nskg":
        args += ["--noise", repr(cfg.noise)]
    return shlex.join(args)


def generate(cfg):
    """Run a generator; return ``(edges, n, header)`` without touching disk."""
    cfg.resolve()
    header = [("krongraph", __version__), ("model", cfg.model)]
    if cfg.preset:
        header.append(("preset", cfg.preset))
    if cfg.model == "cl" and cfg.degrees_file:
        out, inn = read_degree_file(cfg.degrees_file)
        m = cfg.m if cfg.m is not None else int(round(out.sum()))
        scale_out = m / out.sum() if out.sum() > 0 else 0.0
        scale_in = m / inn.sum() if inn.sum() > 0 else 0.0
        degrees = DegreeSequence(out * scale_out, inn * scale_in, float(m))
        cfg.m = m
        n = degrees.n
        header += [("degrees_file", cfg.degrees_file),
                   ("degrees_sha256", file_sha256(cfg.degrees_file))]
        edges = generate_cl(degrees, m, cfg.seed, cfg.chunk_size, cfg.threads)
    else:
        params = SkgParams(cfg.generator, cfg.levels, cfg.m)
        n = params.n
        header += [("generator", _fmt_matrix(cfg.generator)), ("levels", cfg.levels)]
        if cfg.model == "skg":
            edges = generate_skg(params, cfg.seed, cfg.chunk_size, cfg.threads)
        elif cfg.model == "nskg":
            schedule, edges = generate_nskg(params, cfg.noise, cfg.seed, cfg.chunk_size, cfg.threads)
            header.append(("noise", repr(cfg.noise)))
            for i, (mu, T) in enumerate(zip(schedule.mus, schedule.matrices), start=1):
                header.append((f"level {i}", f"mu={mu!r} T={_fmt_matrix(T)}"))
        else:
            degrees = associated_cl(cfg.generator, cfg.levels, cfg.m)
            header.append(("degrees", "associated CL of generator"))
            edges = generate_cl(degrees, cfg.m, cfg.seed, cfg.chunk_size, cfg.threads)
    header += [
        ("n", n),
        ("edges", cfg.m),
        ("seed", cfg.seed),
        ("chunk_size", cfg.chunk_size),
        ("command", _command_line(cfg)),
    ]
    return edges, n, header


def cmd_generate(cfg):
    edges, n, header = generate(cfg)
    path = cfg.output_path()
    os.makedirs(os.path.dirname(os.path.abspath(path)), exist_ok=True)
    write_edge_list(path, edges, header)
    log.info("wrote %d edges over %d vertices to %s", len(edges), n, path)
    return path


def config_from_header(path):
    """Rebuild the ExperimentConfig recorded in a generated file's header."""
    h = read_header(path)
    model = h["model"]
    if model not in MODELS:
        raise ValueError(f"{path}: header model {model!r} is not regenerable by generate")
    cfg = ExperimentConfig(model=model, seed=int(h["seed"]), chunk_size=int(h["chunk_size"]),
                           m=int(h["edges"]))
    if "degrees_file" in h:
        cfg.degrees_file = h["degrees_file"]
    else:
        cfg.generator = validate_generator(*(float(x) for x in h["generator"].split()))
        cfg.levels = int(h["levels"])
    if "noise" in h:
        cfg.noise = float(h["noise"])
    cfg.preset = h.get("preset")
    return cfg


def analyze_edges(edges, n, metrics=ALL_METRICS, k=DEFAULT_EIGS):
    g, sym = symmetrize(edges, n)
    if "eig" in metrics and k > g.n:
        log.warning("requested %d eigenvalues but graph has %d vertices; clamping", k, g.n)
        k = g.n
    return g, sym, compute_report(g, metrics, k)


def write_report(rep, out_dir, metrics=ALL_METRICS, sym=None):
    os.makedirs(out_dir, exist_ok=True)
    written = []

    def put(name, cols, rows):
        path = os.path.join(out_dir, name)
        write_csv(path, cols, rows)
        written.append(path)

    if "degree" in metrics:
        put("degree.csv", ["degree", "count"], sorted(rep.degree_hist.items()))
    if "cc" in metrics:
        put("cc.csv", ["degree", "mean_cc", "vertex_count"],
            [(d, rep.cc_by_degree[d], rep.cc_counts[d]) for d in sorted(rep.cc_by_degree)])
    if "eig" in metrics:
        put("eig.csv", ["rank", "value"], [(i, v) for i, v in enumerate(rep.eigenvalues, start=1)])
    if "assort" in metrics:
        put("assort.csv", ["degree", "X_d"], sorted(rep.assortativity.items()))
    if "core" in metrics:
        put("core.csv", ["k", "size"], sorted(rep.core_sizes.items()))
    if sym is not None:
        put("graph.csv", ["key", "value"], [
            ("vertices", rep.n),
            ("raw_pairs", sym.insertions),
            ("self_loops", sym.self_loops),
            ("duplicates", sym.duplicates),
            ("edges", rep.edge_count),
        ])
    return written


def vertex_count(graph_file, parsed_n):
    """Header ``n`` (generated files keep isolated vertices) or ``1 + max id``."""
    recorded = read_header(graph_file).get("n")
    try:
        return max(parsed_n, int(recorded)) if recorded is not None else parsed_n
    except ValueError:
        return parsed_n


def cmd_analyze(graph_file, out_dir, metrics=ALL_METRICS, k=DEFAULT_EIGS, spy=None):
    edges, n = read_edge_file(graph_file)
    n = vertex_count(graph_file, n)
    _, sym, rep = analyze_edges(edges, n, metrics, k)
    written = write_report(rep, out_dir, metrics, sym)
    if spy:
        size = 1 << max(0, (n - 1).bit_length())
        grid = spy_raster(edges, size, min(int(spy), size))
        path = os.path.join(out_dir, "spy.csv")
        write_csv(path, [f"c{j}" for j in range(grid.shape[1])], grid.tolist())
        write_pgm(os.path.join(out_dir, "spy.pgm"), grid)
        written += [path, os.path.join(out_dir, "spy.pgm")]
    return rep, written


def _paired(a, b):
    keys = sorted(set(a) | set(b))
    return [(key, a.get(key), b.get(key)) for key in keys]


def write_comparison(ra, rb, cmp, out_dir):
    os.makedirs(out_dir, exist_ok=True)
    write_csv(os.path.join(out_dir, "gaps.csv"), ["metric", "value"], [
        ("cc_max_gap", cmp.cc_gap),
        ("cc_degrees_compared", len(cmp.cc_degrees)),
        ("eig_max_rel_gap", cmp.eig_max_rel_gap),
        ("core_max_rel_gap", cmp.core_rel_gap),
        ("degree_tv_distance", cmp.degree_tv),
    ])
    write_csv(os.path.join(out_dir, "degree_paired.csv"), ["degree", "count_a", "count_b"],
              _paired(ra.degree_hist, rb.degree_hist))
    write_csv(os.path.join(out_dir, "cc_paired.csv"),
              ["degree", "cc_a", "cc_b", "count_a", "count_b"],
              [(d, x, y, ra.cc_counts.get(d), rb.cc_counts.get(d))
               for d, x, y in _paired(ra.cc_by_degree, rb.cc_by_degree)])
    n_eig = max(len(ra.eigenvalues), len(rb.eigenvalues))
    write_csv(os.path.join(out_dir, "eig_paired.csv"), ["rank", "value_a", "value_b", "rel_gap"],
              [(i + 1,
                ra.eigenvalues[i] if i < len(ra.eigenvalues) else None,
                rb.eigenvalues[i] if i < len(rb.eigenvalues) else None,
                cmp.eig_rel_gaps[i] if i < len(cmp.eig_rel_gaps) else None)
               for i in range(n_eig)])
    write_csv(os.path.join(out_dir, "assort_paired.csv"), ["degree", "X_a", "X_b"],
              _paired(ra.assortativity, rb.assortativity))
    write_csv(os.path.join(out_dir, "core_paired.csv"), ["k", "size_a", "size_b"],
              _paired(ra.core_sizes, rb.core_sizes))


def cmd_compare(file_a, file_b, out_dir, k=DEFAULT_EIGS, min_count=1):
    ra, _ = cmd_analyze(file_a, os.path.join(out_dir, "a"), k=k)
    rb, _ = cmd_analyze(file_b, os.path.join(out_dir, "b"), k=k)
    cmp = compare_reports(ra, rb, min_count=min_count)
    write_comparison(ra, rb, cmp, out_dir)
    return cmp


def fit_cl_degrees(graph, m=None):
    """CL weights reproducing the observed degrees of ``graph`` with ``m`` insertions."""
    deg = graph.degrees.astype(np.float64)
    if m is None:
        m = graph.edge_count
    total = deg.sum()
    # degrees sum to 2E; weights sum to m so each endpoint draw is deg / 2E
    w = deg * (m / total) if total > 0 else deg
    return DegreeSequence(w, w.copy(), float(m)), int(m)


def cmd_fit_cl(graph_file, output, m=None, seed=1, chunk_size=DEFAULT_CHUNK_SIZE, threads=None):
    edges, n = read_edge_file(graph_file)
    n = vertex_count(graph_file, n)
    g, _ = symmetrize(edges, n)
    degrees, m = fit_cl_degrees(g, m)
    cl_edges = generate_cl(degrees, m, seed, chunk_size, threads)
    header = [
        ("krongraph", __version__),
        ("model", "cl-fit"),
        ("source", graph_file),
        ("source_sha256", file_sha256(graph_file)),
        ("n", n),
        ("edges", m),
        ("seed", seed),
        ("chunk_size", chunk_size),
        ("command", shlex.join(["krongraph", "fit-cl", graph_file, "--edges", str(m),
                                "--seed", str(seed), "--chunk-size", str(chunk_size)])),
    ]
    os.makedirs(os.path.dirname(os.path.abspath(output)), exist_ok=True)
    write_edge_list(output, cl_edges, header)
    return output


def cmd_spectrum(T, levels, out_dir, threshold=1e-20):
    os.makedirs(out_dir, exist_ok=True)
    skg = skg_spectrum(T, levels)
    cl = cl_spectrum(T, levels)
    report = bin_skg_into_cl(skg, cl)

    for name, spec in (("skg", skg), ("cl", cl)):
        write_csv(os.path.join(out_dir, f"{name}_spectrum.csv"), ["value", "multiplicity"],
                  [(e.value, e.multiplicity) for e in spec.entries])
        cols = ["z_i", "z_j", "c_z"] if name == "skg" else ["z_i", "z_j"]
        write_csv(os.path.join(out_dir, f"{name}_classes.csv"), cols + ["value", "multiplicity"],
                  [(*label, value, mult) for label, value, mult in spec.class_rows()])
    write_csv(os.path.join(out_dir, "bins.csv"),
              ["bin_value", "cl_count", "skg_count", "cl_mass", "skg_mass"],
              [(b.value, b.cl_count, b.skg_count, b.cl_mass, b.skg_mass) for b in report.bins])
    try:
        ratio = check_ratio_condition(T)
    except DegenerateMatrix:
        ratio = None
    summary = {
        "levels": levels,
        "generator": _fmt_matrix(T),
        "ratio_condition": ratio,
        "theorem_gap": theorem_gap(T, levels),
        "skg_distinct": len(skg),
        "cl_distinct": len(cl),
        "threshold": threshold,
        "skg_mass_below": mass_below(skg, threshold),
        "cl_mass_below": mass_below(cl, threshold),
        "skg_mass_in_bins_below": report.skg_mass_below(threshold),
        "skg_total_mass": skg.total_mass(),
        "cl_total_mass": cl.total_mass(),
    }
    write_csv(os.path.join(out_dir, "summary.csv"), ["key", "value"], list(summary.items()))
    return summary
