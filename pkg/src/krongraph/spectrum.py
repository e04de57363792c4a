"""Closed-form value spectra of the SKG and associated CL probability matrices.

Nothing here materializes an n x n matrix. Entries depend only on the bit
profile of (i, j), so each matrix is summarized by O(levels**3) (SKG) or
O(levels**2) (CL) classes with exact integer multiplicities.

Class values are products of powers of double-precision inputs. Every double
is a dyadic rational, so these products are held exactly as ``(odd, exp)``
pairs meaning ``odd * 2**exp``; that makes "equal value" an exact test and
sidesteps underflow until the final conversion to float.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import MismatchedLevels

MERGE_RTOL = 1e-15
MAX_SPECTRUM_LEVELS = 40


def _dyadic(x):
    """Exact ``(num, exp)`` with ``x == num * 2**exp`` and ``num`` odd (or 0)."""
    num, den = float(x).as_integer_ratio()
    if num == 0:
        return (0, 0)
    exp = -(den.bit_length() - 1)
    tz = (num & -num).bit_length() - 1
    return (num >> tz, exp + tz)


def _dpow(d, k):
    if k == 0:
        return (1, 0)
    return (d[0] ** k, d[1] * k)


def _dmul(*ds):
    num, exp = 1, 0
    for a, e in ds:
        if a == 0:
            return (0, 0)
        num *= a
        exp += e
    return (num, exp)


def _dadd(*ds):
    """Exact sum of dyadic pairs."""
    lo = min(e for _, e in ds)
    num = sum(a << (e - lo) for a, e in ds)
    if num == 0:
        return (0, 0)
    tz = (num & -num).bit_length() - 1
    return (num >> tz, lo + tz)


def _dfloat(d):
    """Correctly rounded float of a dyadic pair (int / int division rounds once)."""
    num, exp = d
    if exp >= 0:
        return float(num << exp)
    return num / (1 << -exp)


def _power_table(x, levels):
    d = x if isinstance(x, tuple) else _dyadic(x)
    return [_dpow(d, k) for k in range(levels + 1)]


@dataclass
class SpectrumEntry:
    value: float
    multiplicity: int
    classes: list = field(default_factory=list)


@dataclass
class ValueSpectrum:
    """Distinct matrix values (descending) with exact multiplicities."""

    model: str
    levels: int
    entries: list

    @property
    def values(self):
        return np.array([e.value for e in self.entries])

    @property
    def multiplicities(self):
        return [e.multiplicity for e in self.entries]

    def total_count(self):
        return sum(e.multiplicity for e in self.entries)

    def total_mass(self):
        return math.fsum(e.value * e.multiplicity for e in self.entries)

    def class_rows(self):
        """Per-class rows ``(label, value, multiplicity)`` before merging."""
        rows = []
        for e in self.entries:
            for label, mult in e.classes:
                rows.append((label, e.value, mult))
        return rows

    def __len__(self):
        return len(self.entries)


def _merge(model, levels, classes):
    """``classes`` holds ``(exact_value, multiplicity, label)`` triples."""
    exact = {}
    for key, mult, label in classes:
        slot = exact.setdefault(key, [0, []])
        slot[0] += mult
        slot[1].append((label, mult))

    items = sorted(
        ((_dfloat(k), mult, labels) for k, (mult, labels) in exact.items()),
        key=lambda t: -t[0],
    )
    entries = []
    for value, mult, labels in items:
        if entries:
            prev = entries[-1]
            if abs(prev.value - value) <= MERGE_RTOL * max(abs(prev.value), abs(value)):
                prev.multiplicity += mult
                prev.classes.extend(labels)
                continue
        entries.append(SpectrumEntry(value, mult, list(labels)))
    return ValueSpectrum(model, levels, entries)


def _check_levels(levels):
    if not 1 <= levels <= MAX_SPECTRUM_LEVELS:
        raise ValueError(f"levels must be in [1, {MAX_SPECTRUM_LEVELS}]")


def skg_classes(T, levels):
    """Yield ``(zi, zj, cz, exact_value, multiplicity)`` for every feasible class."""
    p1, p2, p3, p4 = (_power_table(t, levels) for t in T.as_tuple())
    fact = [math.factorial(k) for k in range(levels + 1)]
    for zi in range(levels + 1):
        for zj in range(levels + 1):
            for cz in range(max(0, zi + zj - levels), min(zi, zj) + 1):
                ones = levels - zi - zj + cz
                mult = fact[levels] // (
                    fact[cz] * fact[zi - cz] * fact[zj - cz] * fact[ones]
                )
                value = _dmul(p1[cz], p2[zi - cz], p3[zj - cz], p4[ones])
                yield zi, zj, cz, value, mult


def cl_classes(T, levels):
    """Yield ``(zi, zj, exact_value, multiplicity)`` for the associated CL matrix."""
    t1, t2, t3, t4 = (_dyadic(t) for t in T.as_tuple())
    # exact row/column sums of T, so each value is rounded only once
    sums = (_dadd(t1, t2), _dadd(t3, t4), _dadd(t1, t3), _dadd(t2, t4))
    pa, pb, pc, pd = (_power_table(x, levels) for x in sums)
    for zi in range(levels + 1):
        for zj in range(levels + 1):
            value = _dmul(pa[zi], pb[levels - zi], pc[zj], pd[levels - zj])
            yield zi, zj, value, math.comb(levels, zi) * math.comb(levels, zj)


def skg_spectrum(T, levels):
    _check_levels(levels)
    classes = [(v, mult, (zi, zj, cz)) for zi, zj, cz, v, mult in skg_classes(T, levels)]
    return _merge("SKG", levels, classes)


def cl_spectrum(T, levels):
    """Spectrum of the CL matrix associated with ``T`` (closed form)."""
    _check_levels(levels)
    classes = [(v, mult, (zi, zj)) for zi, zj, v, mult in cl_classes(T, levels)]
    return _merge("CL", levels, classes)


def degree_spectrum(degrees, levels=None):
    """Spectrum of ``out_i * in_j / m**2`` for an explicit degree sequence."""
    m = degrees.total
    out_vals, out_counts = np.unique(degrees.out_weights, return_counts=True)
    in_vals, in_counts = np.unique(degrees.in_weights, return_counts=True)
    classes = []
    for a, ca in zip(out_vals, out_counts):
        for b, cb in zip(in_vals, in_counts):
            value = _dyadic(a * b / (m * m))
            classes.append((value, int(ca) * int(cb), (float(a), float(b))))
    if levels is None:
        levels = int(round(math.log2(max(degrees.n, 1))))
    return _merge("CL", levels, classes)


@dataclass
class Bin:
    value: float
    cl_count: int
    skg_count: int
    cl_mass: float
    skg_mass: float


@dataclass
class BinReport:
    bins: list

    @property
    def skg_count(self):
        return sum(b.skg_count for b in self.bins)

    @property
    def cl_count(self):
        return sum(b.cl_count for b in self.bins)

    @property
    def skg_mass(self):
        return math.fsum(b.skg_mass for b in self.bins)

    @property
    def cl_mass(self):
        return math.fsum(b.cl_mass for b in self.bins)

    def skg_mass_below(self, threshold):
        return math.fsum(b.skg_mass for b in self.bins if b.value < threshold)


def nearest_bin(bin_values_desc, v):
    """Index of the closest bin value; ties go to the larger value."""
    asc = bin_values_desc[::-1]
    k = int(np.searchsorted(asc, v, side="left"))
    n = len(asc)
    if k == 0:
        best = 0
    elif k == n:
        best = n - 1
    else:
        lower, upper = asc[k - 1], asc[k]
        best = k if (upper - v) <= (v - lower) else k - 1
    return n - 1 - best


def bin_skg_into_cl(skg, cl):
    """Assign each SKG value to the nearest CL value and accumulate counts/mass."""
    if skg.levels != cl.levels:
        raise MismatchedLevels(f"SKG levels {skg.levels} != CL levels {cl.levels}")
    cl_values = cl.values
    skg_counts = [0] * len(cl.entries)
    skg_terms = [[] for _ in cl.entries]
    for e in skg.entries:
        k = nearest_bin(cl_values, e.value)
        skg_counts[k] += e.multiplicity
        skg_terms[k].append(e.value * e.multiplicity)
    bins = [
        Bin(
            value=c.value,
            cl_count=c.multiplicity,
            skg_count=skg_counts[k],
            cl_mass=c.value * c.multiplicity,
            skg_mass=math.fsum(skg_terms[k]),
        )
        for k, c in enumerate(cl.entries)
    ]
    return BinReport(bins)


def mass_below(spectrum, threshold):
    return math.fsum(e.value * e.multiplicity for e in spectrum.entries if e.value < threshold)


def theorem_gap(T, levels):
    """Max over bit-profile classes of |P_SKG - P_CL|."""
    _check_levels(levels)
    cl = {(zi, zj): _dfloat(v) for zi, zj, v, _ in cl_classes(T, levels)}
    return max(abs(_dfloat(v) - cl[zi, zj]) for zi, zj, _, v, _ in skg_classes(T, levels))


def spy_raster(edges, n, resolution):
    """Edge counts per cell of a ``resolution x resolution`` grid over the adjacency matrix."""
    r = int(resolution)
    if r < 1 or r & (r - 1) or r > n:
        raise ValueError("resolution must be a power of two no larger than n")
    edges = np.asarray(edges).reshape(-1, 2)
    cell = n // r
    rows = edges[:, 0].astype(np.int64) // cell
    cols = edges[:, 1].astype(np.int64) // cell
    return np.bincount(rows * r + cols, minlength=r * r).reshape(r, r)
