"""Brute-force reference computations used only by the tests.

Each function here takes the slow, obvious route so it shares no code path
with the library.
"""

import itertools
from fractions import Fraction
from functools import reduce

import numpy as np


def kron_power(T, levels):
    """Explicit ``levels``-fold Kronecker product of the 2x2 generator."""
    M = np.array([[T.t1, T.t2], [T.t3, T.t4]])
    return reduce(np.kron, [M] * levels)


def kron_schedule(matrices):
    return reduce(np.kron, [np.array([[T.t1, T.t2], [T.t3, T.t4]]) for T in matrices])


def exact_kron_power(T, levels):
    """Kronecker power with exact rational entries (object array of Fractions)."""
    M = np.array([[Fraction(T.t1), Fraction(T.t2)], [Fraction(T.t3), Fraction(T.t4)]], dtype=object)
    return reduce(np.kron, [M] * levels)


def cl_outer(P):
    """CL matrix from an explicit probability matrix: row sums x column sums."""
    return np.outer(P.sum(axis=1), P.sum(axis=0))


def exact_histogram(P):
    hist = {}
    for x in P.ravel():
        hist[x] = hist.get(x, 0) + 1
    return hist


def adjacency_sets(n, pairs):
    adj = [set() for _ in range(n)]
    for u, v in pairs:
        if u != v:
            adj[u].add(v)
            adj[v].add(u)
    return adj


def triangles_all_triples(adj):
    """Per-vertex triangle counts by enumerating every vertex triple."""
    n = len(adj)
    tri = [0] * n
    for a, b, c in itertools.combinations(range(n), 3):
        if b in adj[a] and c in adj[a] and c in adj[b]:
            tri[a] += 1
            tri[b] += 1
            tri[c] += 1
    return tri


def triangles_wedges(adj):
    """Per-vertex triangle counts by checking every wedge."""
    return [
        sum(1 for x, y in itertools.combinations(sorted(nb), 2) if y in adj[x])
        for nb in adj
    ]


def clustering_by_degree(adj, tri):
    groups = {}
    for v, nb in enumerate(adj):
        d = len(nb)
        if d >= 2:
            groups.setdefault(d, []).append(2.0 * tri[v] / (d * (d - 1)))
    return {d: sum(xs) / len(xs) for d, xs in groups.items()}


def assortativity(adj):
    groups = {}
    for v, nb in enumerate(adj):
        d = len(nb)
        if d == 0:
            continue
        total = 0
        for w in nb:
            total += len(adj[w])
        groups.setdefault(d, []).append(total / d)
    return {d: sum(xs) / len(xs) for d, xs in groups.items()}


def core_numbers(adj):
    """Core numbers by repeated deletion for k = 1, 2, ..."""
    n = len(adj)
    core = [0] * n
    alive = set(range(n))
    k = 0
    while alive:
        k += 1
        changed = True
        while changed:
            changed = False
            for v in list(alive):
                if len(adj[v] & alive) < k:
                    alive.discard(v)
                    changed = True
        for v in alive:
            core[v] = k
    return core


def dense_eigenvalues(n, pairs):
    A = np.zeros((n, n))
    for u, v in pairs:
        if u != v:
            A[u, v] = A[v, u] = 1.0
    return np.linalg.eigvalsh(A)


def random_graph_pairs(rng, n, p):
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return pairs


def distinct_desc(values, rtol=1e-12):
    """Distinct values (descending), treating values within ``rtol`` as equal."""
    out = []
    for x in sorted(np.ravel(values), reverse=True):
        if out and abs(out[-1] - x) <= rtol * out[-1]:
            continue
        out.append(x)
    return np.array(out)
