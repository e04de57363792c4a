"""Simple undirected graphs in CSR form and the edge-list -> graph step."""

from dataclasses import dataclass

import numpy as np


@dataclass
class Graph:
    """Undirected simple graph; ``indices[indptr[v]:indptr[v+1]]`` is sorted."""

    n: int
    indptr: np.ndarray
    indices: np.ndarray

    @property
    def edge_count(self):
        return len(self.indices) // 2

    @property
    def degrees(self):
        return np.diff(self.indptr)

    def neighbors(self, v):
        return self.indices[self.indptr[v]:self.indptr[v + 1]]

    @classmethod
    def from_pairs(cls, n, pairs):
        """Build from unique ``u < v`` pairs (no loops, no duplicates)."""
        pairs = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        rows = np.concatenate([pairs[:, 0], pairs[:, 1]])
        cols = np.concatenate([pairs[:, 1], pairs[:, 0]])
        order = np.lexsort((cols, rows))
        rows, cols = rows[order], cols[order]
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.cumsum(np.bincount(rows, minlength=n), out=indptr[1:])
        return cls(int(n), indptr, cols)

    @classmethod
    def from_edges(cls, n, edges):
        return symmetrize(edges, n)[0]

    def to_scipy(self):
        import scipy.sparse as sp

        data = np.ones(len(self.indices), dtype=np.float64)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=(self.n, self.n))


@dataclass
class SymmetrizeReport:
    insertions: int
    self_loops: int
    duplicates: int


def _unique_pairs(lo, hi, n):
    if n <= (1 << 31):
        keys = np.unique(lo * np.int64(n) + hi)
        return np.stack([keys // n, keys % n], axis=1)
    return np.unique(np.stack([lo, hi], axis=1), axis=0)


def symmetrize(edges, n):
    """Collapse directed insertions into a simple undirected graph.

    Returns ``(graph, report)``; the report counts dropped self-loops and
    duplicate insertions.
    """
    edges = np.asarray(edges).reshape(-1, 2)
    if len(edges) and int(edges.max()) >= n:
        raise ValueError(f"vertex id {int(edges.max())} out of range for n={n}")
    u = edges[:, 0].astype(np.int64)
    v = edges[:, 1].astype(np.int64)
    loops = u == v
    u, v = u[~loops], v[~loops]
    pairs = _unique_pairs(np.minimum(u, v), np.maximum(u, v), n)
    report = SymmetrizeReport(
        insertions=len(edges),
        self_loops=int(loops.sum()),
        duplicates=int(len(u) - len(pairs)),
    )
    return Graph.from_pairs(n, pairs), report
