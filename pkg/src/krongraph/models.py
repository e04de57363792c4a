"""SKG, NSKG and Chung-Lu generators plus their closed-form matrix entries.

Vertex ids are ``levels``-bit integers. Descent level 1 decides the most
significant bit of both ids, and quadrants map to (row bit, column bit) as
t1 -> (0, 0), t2 -> (0, 1), t3 -> (1, 0), t4 -> (1, 1).

Generation splits the insertion index space into fixed-size chunks. Chunk
``c`` draws from a Philox stream keyed by ``(seed, 0, c)``, so the edge
list depends only on (inputs, seed, chunk_size) and never on thread count.
"""

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .alias import AliasTable
from .errors import (
    DegenerateMatrix,
    NegativeEntry,
    NoiseOutOfRange,
    SumNotOne,
    ZeroTotalWeight,
)

SUM_TOL = 1e-12
DEFAULT_CHUNK_SIZE = 1 << 16
MAX_LEVELS = 63

_EDGE_STREAM = 0
_NOISE_STREAM = 1


@dataclass(frozen=True)
class GeneratorMatrix:
    """2x2 generator ``[t1 t2; t3 t4]``; entries nonnegative and summing to 1."""

    t1: float
    t2: float
    t3: float
    t4: float

    def __post_init__(self):
        for name in ("t1", "t2", "t3", "t4"):
            v = getattr(self, name)
            if not math.isfinite(v) or v < 0:
                raise NegativeEntry(f"{name}={v!r} is negative or not finite")
            if v > 1:
                raise SumNotOne(self.total)
        if abs(self.total - 1.0) > SUM_TOL:
            raise SumNotOne(self.total)

    @property
    def total(self):
        return math.fsum((self.t1, self.t2, self.t3, self.t4))

    def as_tuple(self):
        return (self.t1, self.t2, self.t3, self.t4)

    def as_array(self):
        return np.array([[self.t1, self.t2], [self.t3, self.t4]])

    @property
    def row_sums(self):
        return (self.t1 + self.t2, self.t3 + self.t4)

    @property
    def col_sums(self):
        return (self.t1 + self.t3, self.t2 + self.t4)

    def thresholds(self):
        """Cumulative quadrant thresholds used by the descent."""
        return np.array([self.t1, self.t1 + self.t2, self.t1 + self.t2 + self.t3])


def validate_generator(t1, t2, t3, t4):
    return GeneratorMatrix(float(t1), float(t2), float(t3), float(t4))


@dataclass(frozen=True)
class SkgParams:
    generator: GeneratorMatrix
    levels: int
    m: int

    def __post_init__(self):
        if not (1 <= self.levels <= MAX_LEVELS):
            raise ValueError(f"levels must be in [1, {MAX_LEVELS}], got {self.levels}")
        if self.m < 0:
            raise ValueError("edge count must be nonnegative")

    @property
    def n(self):
        return 1 << self.levels


@dataclass(frozen=True)
class NoiseSchedule:
    """Per-level generators used by NSKG, plus the noise draws that built them."""

    noise: float
    mus: tuple
    matrices: tuple

    @property
    def levels(self):
        return len(self.matrices)


@dataclass(frozen=True)
class BitProfile:
    levels: int
    zeros_src: int
    zeros_dst: int
    common_zeros: int

    def __post_init__(self):
        lo = max(0, self.zeros_src + self.zeros_dst - self.levels)
        if not lo <= self.common_zeros <= min(self.zeros_src, self.zeros_dst):
            raise ValueError(f"infeasible bit profile {self}")

    @property
    def common_ones(self):
        return self.levels - self.zeros_src - self.zeros_dst + self.common_zeros


def bit_profile(levels, i, j):
    """Zero counts of ``i`` and ``j`` and their common-zero count."""
    zi = levels - int(i).bit_count()
    zj = levels - int(j).bit_count()
    cz = levels - (int(i) | int(j)).bit_count()
    return BitProfile(levels, zi, zj, cz)


@dataclass
class DegreeSequence:
    """Out-weights (sources) and in-weights (sinks) over the same vertex set."""

    out_weights: np.ndarray
    in_weights: np.ndarray
    total: float = field(default=None)

    def __post_init__(self):
        self.out_weights = np.asarray(self.out_weights, dtype=np.float64)
        self.in_weights = np.asarray(self.in_weights, dtype=np.float64)
        if self.out_weights.shape != self.in_weights.shape:
            raise ValueError("out and in weight sequences differ in length")
        if np.any(self.out_weights < 0) or np.any(self.in_weights < 0):
            raise ValueError("weights must be nonnegative")
        so = math.fsum(self.out_weights)
        si = math.fsum(self.in_weights)
        if self.total is None:
            self.total = so
        scale = max(abs(self.total), 1e-300)
        if abs(so - self.total) > 1e-9 * scale or abs(si - self.total) > 1e-9 * scale:
            raise ValueError(
                f"weight sums ({so}, {si}) disagree with total {self.total}"
            )

    @property
    def n(self):
        return len(self.out_weights)


def thread_count(threads=None):
    if threads is not None:
        return max(1, int(threads))
    env = os.environ.get("KRONGRAPH_THREADS")
    if env:
        return max(1, int(env))
    return 1


def chunk_rng(seed, chunk_index, stream=_EDGE_STREAM):
    ss = np.random.SeedSequence(int(seed), spawn_key=(stream, int(chunk_index)))
    return np.random.Generator(np.random.Philox(ss))


def _chunk_bounds(m, chunk_size):
    if chunk_size < 1:
        raise ValueError("chunk_size must be positive")
    return [(c, lo, min(lo + chunk_size, m)) for c, lo in enumerate(range(0, m, chunk_size))]


def _run_chunks(work, m, chunk_size, threads):
    bounds = _chunk_bounds(m, chunk_size)
    if not bounds:
        return np.empty((0, 2), dtype=np.uint64)
    nthreads = min(thread_count(threads), len(bounds))
    if nthreads == 1:
        parts = [work(c, hi - lo) for c, lo, hi in bounds]
    else:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            parts = list(pool.map(lambda b: work(b[0], b[2] - b[1]), bounds))
    return np.concatenate(parts, axis=0)


def _as_schedule(generator, levels):
    if isinstance(generator, NoiseSchedule):
        return list(generator.matrices)
    if isinstance(generator, (list, tuple)):
        return list(generator)
    return [generator] * levels


def skg_sample_edge(generator, levels, draws):
    """Descend ``levels`` quadrants using one uniform from ``draws`` per level.

    ``generator`` may be a single GeneratorMatrix or a per-level sequence
    (NSKG). Returns ``(source, sink)``.
    """
    src = dst = 0
    it = iter(draws)
    for T in _as_schedule(generator, levels):
        u = next(it)
        q = int(np.searchsorted(T.thresholds(), u, side="right"))
        src = (src << 1) | (q >> 1)
        dst = (dst << 1) | (q & 1)
    return src, dst


def _descend(schedule, u):
    """Vectorized descent; ``u`` has shape (count, levels), row per edge."""
    count = u.shape[0]
    src = np.zeros(count, dtype=np.uint64)
    dst = np.zeros(count, dtype=np.uint64)
    one = np.uint64(1)
    for k, T in enumerate(schedule):
        q = np.searchsorted(T.thresholds(), u[:, k], side="right").astype(np.uint64)
        src = (src << one) | (q >> one)
        dst = (dst << one) | (q & one)
    return np.stack([src, dst], axis=1)


def _generate_descent(schedule, m, seed, chunk_size, threads):
    levels = len(schedule)

    def work(c, count):
        rng = chunk_rng(seed, c)
        return _descend(schedule, rng.random((count, levels)))

    return _run_chunks(work, m, chunk_size, threads)


def generate_skg(params, seed, chunk_size=DEFAULT_CHUNK_SIZE, threads=None):
    """Return an ``(m, 2)`` uint64 array of SKG insertions."""
    schedule = [params.generator] * params.levels
    return _generate_descent(schedule, params.m, seed, chunk_size, threads)


def max_noise(T):
    """Largest noise level keeping every perturbed entry nonnegative."""
    return min(T.t2, T.t3, (T.t1 + T.t4) / 2.0)


def perturb(T, mu):
    s = T.t1 + T.t4
    if s == 0:
        if mu != 0:
            raise NoiseOutOfRange("t1 + t4 = 0 leaves no room for noise")
        return T
    return GeneratorMatrix(
        T.t1 - 2.0 * mu * T.t1 / s,
        T.t2 + mu,
        T.t3 + mu,
        T.t4 - 2.0 * mu * T.t4 / s,
    )


def draw_noise_schedule(T, levels, noise, seed):
    """Draw ``levels`` perturbed generators with mu_i ~ U[-noise, noise]."""
    if not (0.0 <= noise <= max_noise(T)):
        raise NoiseOutOfRange(
            f"noise {noise} outside [0, {max_noise(T)}] for generator {T.as_tuple()}"
        )
    rng = chunk_rng(seed, 0, stream=_NOISE_STREAM)
    mus = rng.uniform(-noise, noise, size=levels) if noise > 0 else np.zeros(levels)
    mats = tuple(perturb(T, float(mu)) for mu in mus)
    return NoiseSchedule(float(noise), tuple(float(x) for x in mus), mats)


def generate_nskg(params, noise, seed, chunk_size=DEFAULT_CHUNK_SIZE, threads=None):
    """Return ``(schedule, edges)``; with ``noise == 0`` matches generate_skg."""
    schedule = draw_noise_schedule(params.generator, params.levels, noise, seed)
    edges = _generate_descent(list(schedule.matrices), params.m, seed, chunk_size, threads)
    return schedule, edges


def skg_entry(T, levels, i, j):
    p = bit_profile(levels, i, j)
    zi, zj, cz = p.zeros_src, p.zeros_dst, p.common_zeros
    return T.t1 ** cz * T.t2 ** (zi - cz) * T.t3 ** (zj - cz) * T.t4 ** p.common_ones


def zero_counts(levels):
    """Number of zero bits of every id in ``[0, 2**levels)``."""
    ids = np.arange(1 << levels, dtype=np.uint64)
    return levels - np.bitwise_count(ids).astype(np.int64)


def expected_degrees(T, levels, m):
    """Expected out/in insertion counts of every vertex under SKG."""
    z = zero_counts(levels)
    ks = np.arange(levels + 1)
    a, b = T.row_sums
    c, d = T.col_sums
    out_by_z = m * (a ** ks) * (b ** (levels - ks))
    in_by_z = m * (c ** ks) * (d ** (levels - ks))
    return DegreeSequence(out_by_z[z], in_by_z[z], float(m))


def schedule_expected_degrees(schedule, m):
    """Expected out/in counts for a per-level schedule (NSKG)."""
    out = np.ones(1)
    inn = np.ones(1)
    for T in _as_schedule(schedule, None):
        out = np.kron(out, T.row_sums)
        inn = np.kron(inn, T.col_sums)
    return DegreeSequence(m * out, m * inn, float(m))


def associated_cl(T, levels, m):
    return expected_degrees(T, levels, m)


def cl_entry(degrees, i, j):
    return degrees.out_weights[i] * degrees.in_weights[j] / degrees.total ** 2


def generate_cl(degrees, m, seed, chunk_size=DEFAULT_CHUNK_SIZE, threads=None):
    """Sample ``m`` insertions, source ~ out-weights and sink ~ in-weights."""
    if degrees.n == 0 or degrees.out_weights.sum() <= 0 or degrees.in_weights.sum() <= 0:
        raise ZeroTotalWeight("degree sequence carries no weight")
    src_table = AliasTable(degrees.out_weights)
    dst_table = AliasTable(degrees.in_weights)

    def work(c, count):
        rng = chunk_rng(seed, c)
        src = src_table.sample(rng, count)
        dst = dst_table.sample(rng, count)
        return np.stack([src, dst], axis=1).astype(np.uint64)

    return _run_chunks(work, int(m), chunk_size, threads)


def check_ratio_condition(T, tol=1e-12):
    """True when t1/t2 == t3/t4 within ``tol``, tested as |t1*t4 - t2*t3|."""
    if T.t2 == 0 or T.t4 == 0:
        raise DegenerateMatrix("ratio condition needs t2 > 0 and t4 > 0")
    return abs(T.t1 * T.t4 - T.t2 * T.t3) <= tol
