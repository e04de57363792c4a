"""Graph metric battery: degrees, clustering, top eigenvalues, assortativity, cores."""

import math
from dataclasses import dataclass, field

import numba
import numpy as np

from .errors import ConvergenceFailure

ALL_METRICS = ("degree", "cc", "eig", "assort", "core")
DEFAULT_EIGS = 25


@numba.njit(cache=True)
def _triangles(indptr, indices, degrees):
    n = len(indptr) - 1
    # orient each edge from lower (degree, id) rank to higher
    fwd_ptr = np.zeros(n + 1, dtype=np.int64)
    for u in range(n):
        c = 0
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            if degrees[v] > degrees[u] or (degrees[v] == degrees[u] and v > u):
                c += 1
        fwd_ptr[u + 1] = fwd_ptr[u] + c
    fwd = np.empty(fwd_ptr[n], dtype=np.int64)
    for u in range(n):
        k = fwd_ptr[u]
        for p in range(indptr[u], indptr[u + 1]):
            v = indices[p]
            if degrees[v] > degrees[u] or (degrees[v] == degrees[u] and v > u):
                fwd[k] = v
                k += 1

    tri = np.zeros(n, dtype=np.int64)
    for u in range(n):
        for p in range(fwd_ptr[u], fwd_ptr[u + 1]):
            v = fwd[p]
            a, a_end = fwd_ptr[u], fwd_ptr[u + 1]
            b, b_end = fwd_ptr[v], fwd_ptr[v + 1]
            while a < a_end and b < b_end:
                x, y = fwd[a], fwd[b]
                if x == y:
                    tri[u] += 1
                    tri[v] += 1
                    tri[x] += 1
                    a += 1
                    b += 1
                elif x < y:
                    a += 1
                else:
                    b += 1
    return tri


@numba.njit(cache=True)
def _core_numbers(indptr, indices, degrees):
    """Batagelj-Zaversnik bucket peeling, O(n + m)."""
    n = len(indptr) - 1
    deg = degrees.copy()
    maxdeg = 0
    for v in range(n):
        if deg[v] > maxdeg:
            maxdeg = deg[v]
    bin_start = np.zeros(maxdeg + 2, dtype=np.int64)
    for v in range(n):
        bin_start[deg[v] + 1] += 1
    for d in range(1, maxdeg + 2):
        bin_start[d] += bin_start[d - 1]
    pos = np.empty(n, dtype=np.int64)
    vert = np.empty(n, dtype=np.int64)
    nxt = bin_start.copy()
    for v in range(n):
        pos[v] = nxt[deg[v]]
        vert[pos[v]] = v
        nxt[deg[v]] += 1

    for i in range(n):
        v = vert[i]
        for p in range(indptr[v], indptr[v + 1]):
            u = indices[p]
            if deg[u] > deg[v]:
                du = deg[u]
                pu = pos[u]
                pw = bin_start[du]
                w = vert[pw]
                if u != w:
                    pos[u] = pw
                    vert[pu] = w
                    pos[w] = pu
                    vert[pw] = u
                bin_start[du] += 1
                deg[u] -= 1
    return deg


def triangle_counts(g):
    return _triangles(g.indptr, g.indices, g.degrees.astype(np.int64))


def degree_distribution(g):
    counts = np.bincount(g.degrees, minlength=1)
    return {int(d): int(c) for d, c in enumerate(counts) if c}


def local_clustering(g):
    """Per-vertex clustering coefficient; NaN where degree < 2."""
    d = g.degrees.astype(np.float64)
    tri = triangle_counts(g)
    cc = np.full(g.n, np.nan)
    ok = d >= 2
    cc[ok] = 2.0 * tri[ok] / (d[ok] * (d[ok] - 1.0))
    return cc


def _mean_by_degree(degrees, values, mask):
    deg = degrees[mask]
    vals = values[mask]
    if len(deg) == 0:
        return {}, {}
    counts = np.bincount(deg)
    sums = np.bincount(deg, weights=vals)
    means, sizes = {}, {}
    for d in np.nonzero(counts)[0]:
        means[int(d)] = float(sums[d] / counts[d])
        sizes[int(d)] = int(counts[d])
    return means, sizes


def clustering_by_degree(g, with_counts=False):
    """Mean clustering coefficient per degree, degrees >= 2 only."""
    cc = local_clustering(g)
    means, sizes = _mean_by_degree(g.degrees, cc, g.degrees >= 2)
    return (means, sizes) if with_counts else means


def mean_neighbor_degree(g):
    deg = g.degrees
    rows = np.repeat(np.arange(g.n), deg)
    sums = np.bincount(rows, weights=deg[g.indices].astype(np.float64), minlength=g.n)
    out = np.full(g.n, np.nan)
    nz = deg > 0
    out[nz] = sums[nz] / deg[nz]
    return out


def assortativity_profile(g):
    """X_d: mean over degree-d vertices of their mean neighbor degree (d >= 1)."""
    means, _ = _mean_by_degree(g.degrees, mean_neighbor_degree(g), g.degrees >= 1)
    return means


def core_decomposition(g):
    """Return ``(core_numbers, core_sizes)``; ``core_sizes[k]`` counts core number >= k."""
    core = _core_numbers(g.indptr, g.indices, g.degrees.astype(np.int64))
    sizes = {}
    if g.n:
        hist = np.bincount(core)
        at_least = np.cumsum(hist[::-1])[::-1]
        sizes = {k: int(at_least[k]) for k in range(1, len(hist))}
    return core, sizes


def _order_by_magnitude(vals, rtol=1e-10):
    """Descending magnitude; magnitudes equal up to ``rtol`` put positives first."""
    vals = np.asarray(vals, dtype=np.float64)
    vals = vals[np.argsort(-np.abs(vals), kind="stable")]
    out, start = [], 0
    for i in range(1, len(vals) + 1):
        if i == len(vals) or abs(vals[i]) < abs(vals[start]) * (1 - rtol):
            out.extend(sorted(vals[start:i], reverse=True))
            start = i
    return np.array(out)


def top_eigenvalues(g, k=DEFAULT_EIGS, seed=0):
    """``k`` largest-magnitude adjacency eigenvalues, signs kept.

    Uses implicitly restarted Lanczos (ARPACK) on the sparse adjacency; falls
    back to a dense solve only when ARPACK cannot be used (``k >= n - 1``).
    """
    import scipy.sparse.linalg as sla

    n = g.n
    k = min(int(k), n)
    if k <= 0:
        return []
    if k >= n - 1:
        A = g.to_scipy().toarray()
        return list(_order_by_magnitude(np.linalg.eigvalsh(A))[:k])
    A = g.to_scipy()
    v0 = np.random.default_rng(seed).uniform(0.5, 1.5, size=n)
    try:
        vals = sla.eigsh(A, k=k, which="LM", v0=v0, tol=0, return_eigenvectors=False,
                         maxiter=max(1000, 20 * n))
    except sla.ArpackNoConvergence as exc:
        raise ConvergenceFailure(
            f"eigsh converged {len(exc.eigenvalues)} of {k} eigenvalues",
            residual=None,
        ) from exc
    return list(_order_by_magnitude(vals))


@dataclass
class MetricReport:
    n: int = 0
    edge_count: int = 0
    degree_hist: dict = field(default_factory=dict)
    cc_by_degree: dict = field(default_factory=dict)
    cc_counts: dict = field(default_factory=dict)
    eigenvalues: list = field(default_factory=list)
    assortativity: dict = field(default_factory=dict)
    core_sizes: dict = field(default_factory=dict)
    core_numbers: np.ndarray = None


def compute_report(g, metrics=ALL_METRICS, k=DEFAULT_EIGS):
    unknown = set(metrics) - set(ALL_METRICS)
    if unknown:
        raise ValueError(f"unknown metrics {sorted(unknown)}")
    rep = MetricReport(n=g.n, edge_count=g.edge_count)
    if "degree" in metrics:
        rep.degree_hist = degree_distribution(g)
    if "cc" in metrics:
        rep.cc_by_degree, rep.cc_counts = clustering_by_degree(g, with_counts=True)
    if "eig" in metrics:
        rep.eigenvalues = top_eigenvalues(g, k)
    if "assort" in metrics:
        rep.assortativity = assortativity_profile(g)
    if "core" in metrics:
        rep.core_numbers, rep.core_sizes = core_decomposition(g)
    return rep


@dataclass
class Comparison:
    cc_gap: float
    cc_degrees: list
    eig_rel_gaps: list
    core_rel_gap: float
    degree_tv: float
    cc_gaps: dict = field(default_factory=dict)

    @property
    def eig_max_rel_gap(self):
        return max(self.eig_rel_gaps, default=0.0)

    @property
    def cc_worst_degree(self):
        return max(self.cc_gaps, key=self.cc_gaps.get, default=None)


def _rel(a, b):
    scale = max(abs(a), abs(b))
    return 0.0 if scale == 0 else abs(a - b) / scale


def total_variation(hist_a, hist_b):
    na = sum(hist_a.values())
    nb = sum(hist_b.values())
    if na == 0 or nb == 0:
        return 0.0 if na == nb else 1.0
    keys = set(hist_a) | set(hist_b)
    return 0.5 * math.fsum(abs(hist_a.get(d, 0) / na - hist_b.get(d, 0) / nb) for d in keys)


def compare_reports(a, b, min_count=1):
    """Gap statistics between two reports.

    Clustering is compared over degrees present in both reports with at least
    ``min_count`` vertices in each.
    """
    shared = sorted(
        d for d in set(a.cc_by_degree) & set(b.cc_by_degree)
        if a.cc_counts.get(d, 0) >= min_count and b.cc_counts.get(d, 0) >= min_count
    )
    cc_gaps = {d: abs(a.cc_by_degree[d] - b.cc_by_degree[d]) for d in shared}
    cc_gap = max(cc_gaps.values(), default=0.0)
    # ranks are by magnitude, so compare magnitudes
    eig = [_rel(abs(x), abs(y)) for x, y in zip(a.eigenvalues, b.eigenvalues)]
    ks = set(a.core_sizes) & set(b.core_sizes)
    core_gap = max((_rel(a.core_sizes[k], b.core_sizes[k]) for k in ks), default=0.0)
    return Comparison(
        cc_gap=float(cc_gap),
        cc_degrees=shared,
        eig_rel_gaps=eig,
        core_rel_gap=float(core_gap),
        degree_tv=total_variation(a.degree_hist, b.degree_hist),
        cc_gaps=cc_gaps,
    )
