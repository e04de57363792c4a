"""Optional checks against the real SNAP datasets.

Skipped unless ``KRONGRAPH_SNAP_DIR`` points at a directory holding the
original files (soc-Epinions1.txt, CA-HepTh.txt, Cit-HepPh.txt).
"""

import os
from pathlib import Path

import pytest

from krongraph.edgeio import read_edge_file
from krongraph.graph import symmetrize
from krongraph.metrics import compute_report, total_variation
from krongraph.models import generate_cl
from krongraph.pipeline import fit_cl_degrees
from krongraph.presets import PRESETS

SNAP_DIR = os.environ.get("KRONGRAPH_SNAP_DIR")
FITTED = [p for p in PRESETS.values() if p.snap_name]

pytestmark = [
    pytest.mark.slow,
    pytest.mark.skipif(not SNAP_DIR, reason="KRONGRAPH_SNAP_DIR not set"),
]


def load(preset):
    path = Path(SNAP_DIR) / preset.snap_name
    if not path.exists():
        pytest.skip(f"{path} missing")
    edges, n = read_edge_file(path)
    return symmetrize(edges, n)


@pytest.mark.parametrize("preset", FITTED, ids=lambda p: p.name)
def test_real_graph_counts(preset, capsys):
    g, rep = load(preset)
    non_isolated = int((g.degrees > 0).sum())
    with capsys.disabled():
        print(f"\n{preset.name}: {non_isolated} vertices, {g.edge_count} undirected edges after "
              f"dedup ({rep.duplicates} duplicates, {rep.self_loops} loops); "
              f"reference {preset.real_vertices} vertices, {preset.real_edges} edges")
    assert non_isolated == preset.real_vertices


@pytest.mark.parametrize("preset", FITTED, ids=lambda p: p.name)
def test_cl_fit_matches_degree_histogram(preset, capsys):
    g, _ = load(preset)
    degrees, m = fit_cl_degrees(g)
    cl, _ = symmetrize(generate_cl(degrees, m, seed=1), g.n)
    real = compute_report(g, metrics=("degree",)).degree_hist
    fit = compute_report(cl, metrics=("degree",)).degree_hist
    real.pop(0, None)
    fit.pop(0, None)
    tv = total_variation(real, fit)
    with capsys.disabled():
        print(f"\n{'PASS' if tv <= 0.01 else 'FAIL'} {preset.name} CL fit degree TV = {tv:.4f}")
    assert tv <= 0.01
