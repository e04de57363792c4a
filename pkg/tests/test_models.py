import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import ALL_GENERATORS, GRAPH500, RATIO, SKEWED, UNIFORM
from krongraph.errors import (
    DegenerateMatrix,
    NegativeEntry,
    NoiseOutOfRange,
    SumNotOne,
    ZeroTotalWeight,
)
from krongraph.models import (
    BitProfile,
    DegreeSequence,
    SkgParams,
    associated_cl,
    bit_profile,
    check_ratio_condition,
    chunk_rng,
    cl_entry,
    draw_noise_schedule,
    expected_degrees,
    generate_cl,
    generate_nskg,
    generate_skg,
    schedule_expected_degrees,
    skg_entry,
    skg_sample_edge,
    validate_generator,
)
from oracles import cl_outer, kron_power, kron_schedule


@st.composite
def generators(draw):
    w = [draw(st.floats(0.01, 1.0)) for _ in range(4)]
    s = sum(w)
    t = [x / s for x in w[:3]]
    return validate_generator(*t, 1.0 - sum(t))


# -- validate_generator -------------------------------------------------------

def test_validate_generator_examples():
    assert GRAPH500.as_tuple() == (0.57, 0.19, 0.19, 0.05)
    assert UNIFORM.total == 1.0
    with pytest.raises(SumNotOne) as err:
        validate_generator(0.5, 0.5, 0.5, 0.5)
    assert err.value.total == 2.0


def test_validate_generator_rejects_negative():
    with pytest.raises(NegativeEntry):
        validate_generator(0.6, 0.5, -0.1, 0.0)


def test_validate_generator_sum_tolerance():
    validate_generator(0.25, 0.25, 0.25, 0.25 + 5e-13)
    with pytest.raises(SumNotOne):
        validate_generator(0.25, 0.25, 0.25, 0.25 + 5e-12)


# -- single-edge descent ------------------------------------------------------

def test_sample_edge_corner_quadrants():
    assert skg_sample_edge(GRAPH500, 2, [0.0, 0.3]) == (0, 0)
    assert skg_sample_edge(GRAPH500, 2, [0.99, 0.999]) == (3, 3)


def test_sample_edge_hand_trace():
    # thresholds 0.57 / 0.76 / 0.95: 0.6 -> t2, 0.8 -> t3, 0.1 -> t1
    assert skg_sample_edge(GRAPH500, 3, [0.6, 0.8, 0.1]) == (2, 4)


def test_sample_edge_threshold_boundaries():
    # u == t1 falls into the t2 quadrant (strict u < t1 for t1)
    assert skg_sample_edge(UNIFORM, 1, [0.25]) == (0, 1)
    assert skg_sample_edge(UNIFORM, 1, [0.2499999]) == (0, 0)


def test_vectorized_descent_matches_scalar_path():
    params = SkgParams(GRAPH500, 7, 300)
    edges = generate_skg(params, seed=5, chunk_size=300)
    draws = chunk_rng(5, 0).random((300, 7))
    expected = [skg_sample_edge(GRAPH500, 7, row) for row in draws]
    assert [tuple(map(int, e)) for e in edges] == expected


# -- generate_skg / generate_nskg ---------------------------------------------

def test_generate_zero_edges():
    assert generate_skg(SkgParams(GRAPH500, 4, 0), seed=1).shape == (0, 2)


def test_generate_skg_deterministic_and_thread_independent():
    params = SkgParams(GRAPH500, 12, 50_000)
    a = generate_skg(params, seed=9, chunk_size=4096, threads=1)
    b = generate_skg(params, seed=9, chunk_size=4096, threads=4)
    c = generate_skg(params, seed=10, chunk_size=4096, threads=1)
    assert a.tobytes() == b.tobytes()
    assert a.shape == (50_000, 2)
    assert not np.array_equal(a, c)
    assert a.max() < params.n


def test_skg_empirical_cell_frequencies():
    levels, m = 3, 400_000
    edges = generate_skg(SkgParams(SKEWED, levels, m), seed=3)
    P = kron_power(SKEWED, levels)
    counts = np.zeros_like(P)
    np.add.at(counts, (edges[:, 0].astype(int), edges[:, 1].astype(int)), 1)
    sd = np.sqrt(m * P * (1 - P))
    assert np.all(np.abs(counts - m * P) <= 5 * sd)


def test_nskg_zero_noise_equals_skg():
    params = SkgParams(GRAPH500, 10, 20_000)
    schedule, edges = generate_nskg(params, 0.0, seed=4, chunk_size=1000)
    assert all(T == GRAPH500 for T in schedule.matrices)
    assert edges.tobytes() == generate_skg(params, seed=4, chunk_size=1000).tobytes()


def test_nskg_schedule_rule():
    schedule = draw_noise_schedule(GRAPH500, 18, 0.1, seed=2)
    assert schedule.levels == 18
    for mu, T in zip(schedule.mus, schedule.matrices):
        assert -0.1 <= mu <= 0.1
        assert abs(T.total - 1.0) <= 1e-12
        assert T.t2 == pytest.approx(0.19 + mu, abs=1e-15)
        assert T.t3 == pytest.approx(0.19 + mu, abs=1e-15)
        assert T.t1 == pytest.approx(0.57 - 2 * mu * 0.57 / 0.62, abs=1e-15)
        assert T.t4 == pytest.approx(0.05 - 2 * mu * 0.05 / 0.62, abs=1e-15)
        assert min(T.as_tuple()) >= 0


def test_nskg_noise_out_of_range():
    with pytest.raises(NoiseOutOfRange):
        generate_nskg(SkgParams(GRAPH500, 4, 10), 5.0, seed=1)
    with pytest.raises(NoiseOutOfRange):
        generate_nskg(SkgParams(GRAPH500, 4, 10), -0.01, seed=1)


def test_nskg_empirical_cell_frequencies():
    levels, m = 3, 400_000
    schedule, edges = generate_nskg(SkgParams(GRAPH500, levels, m), 0.15, seed=8)
    P = kron_schedule(schedule.matrices)
    counts = np.zeros_like(P)
    np.add.at(counts, (edges[:, 0].astype(int), edges[:, 1].astype(int)), 1)
    sd = np.sqrt(m * P * (1 - P))
    assert np.all(np.abs(counts - m * P) <= 5 * sd)


def test_nskg_deterministic_across_threads():
    params = SkgParams(GRAPH500, 11, 30_000)
    s1, a = generate_nskg(params, 0.1, seed=6, chunk_size=2048, threads=1)
    s2, b = generate_nskg(params, 0.1, seed=6, chunk_size=2048, threads=4)
    assert s1 == s2
    assert a.tobytes() == b.tobytes()


# -- closed-form entries ------------------------------------------------------

def test_skg_entry_single_level():
    T = SKEWED
    assert [skg_entry(T, 1, i, j) for i, j in [(0, 0), (0, 1), (1, 0), (1, 1)]] == list(T.as_tuple())


def test_skg_entry_uniform():
    for i in range(4):
        for j in range(4):
            assert skg_entry(UNIFORM, 2, i, j) == 1 / 16


@pytest.mark.parametrize("name", sorted(ALL_GENERATORS))
def test_skg_entry_matches_kron_oracle_level6(name):
    T = ALL_GENERATORS[name]
    P = kron_power(T, 6)
    got = np.array([[skg_entry(T, 6, i, j) for j in range(64)] for i in range(64)])
    assert np.max(np.abs(got - P)) <= 1e-12


@given(generators(), st.integers(1, 4))
@settings(max_examples=40, deadline=None)
def test_skg_entry_matches_kron_property(T, levels):
    P = kron_power(T, levels)
    n = 1 << levels
    got = np.array([[skg_entry(T, levels, i, j) for j in range(n)] for i in range(n)])
    assert np.max(np.abs(got - P)) <= 1e-12
    assert abs(got.sum() - 1.0) <= 1e-9


def test_bit_profile():
    p = bit_profile(3, 0b010, 0b100)
    assert (p.zeros_src, p.zeros_dst, p.common_zeros, p.common_ones) == (2, 2, 1, 0)
    with pytest.raises(ValueError):
        BitProfile(3, 1, 1, 2)


# -- degrees and CL -----------------------------------------------------------

def test_expected_degrees_uniform():
    d = expected_degrees(UNIFORM, 5, 320)
    assert np.allclose(d.out_weights, 10.0, rtol=0, atol=1e-12)
    assert np.allclose(d.in_weights, 10.0, rtol=0, atol=1e-12)


def test_expected_degree_vertex_zero():
    d = expected_degrees(GRAPH500, 2, 64)
    assert d.out_weights[0] == pytest.approx(36.9664, abs=1e-12)
    # cross-check against row sums of the explicit matrix
    P = kron_power(GRAPH500, 2)
    assert np.allclose(d.out_weights, 64 * P.sum(axis=1), atol=1e-12)
    assert np.allclose(d.in_weights, 64 * P.sum(axis=0), atol=1e-12)


@given(generators(), st.integers(1, 12), st.integers(1, 10**7))
@settings(max_examples=50, deadline=None)
def test_expected_degrees_sum_to_m(T, levels, m):
    d = expected_degrees(T, levels, m)
    assert math.fsum(d.out_weights) == pytest.approx(m, rel=1e-9)
    assert math.fsum(d.in_weights) == pytest.approx(m, rel=1e-9)


def test_schedule_degrees_reduce_to_closed_form():
    a = schedule_expected_degrees([SKEWED] * 6, 1000)
    b = expected_degrees(SKEWED, 6, 1000)
    assert np.allclose(a.out_weights, b.out_weights, rtol=1e-13)
    assert np.allclose(a.in_weights, b.in_weights, rtol=1e-13)


def test_schedule_degrees_match_explicit_matrix():
    schedule = draw_noise_schedule(GRAPH500, 5, 0.1, seed=3)
    P = kron_schedule(schedule.matrices)
    d = schedule_expected_degrees(schedule, 10.0)
    assert np.allclose(d.out_weights, 10 * P.sum(axis=1), atol=1e-12)
    assert np.allclose(d.in_weights, 10 * P.sum(axis=0), atol=1e-12)


def test_associated_cl_sizes():
    d = associated_cl(GRAPH500, 18, 16 * 2**18)
    assert d.n == 262_144
    u = associated_cl(UNIFORM, 6, 640)
    assert np.ptp(u.out_weights) == 0 and np.ptp(u.in_weights) == 0


def test_cl_entry_uniform():
    d = DegreeSequence(np.full(8, 2.0), np.full(8, 2.0), 16.0)
    assert cl_entry(d, 3, 5) == pytest.approx(1 / 64, abs=1e-15)


@pytest.mark.parametrize("name", sorted(ALL_GENERATORS))
def test_cl_entry_matches_closed_form_and_outer_oracle(name):
    T = ALL_GENERATORS[name]
    levels, m = 6, 1000
    d = associated_cl(T, levels, m)
    oracle = cl_outer(kron_power(T, levels))
    got = np.array([[cl_entry(d, i, j) for j in range(64)] for i in range(64)])
    assert np.max(np.abs(got - oracle)) <= 1e-12
    a, b = T.row_sums
    c, e = T.col_sums
    for i, j in [(0, 0), (5, 17), (63, 2), (40, 40)]:
        zi = levels - bin(i).count("1")
        zj = levels - bin(j).count("1")
        closed = a**zi * b ** (levels - zi) * c**zj * e ** (levels - zj)
        assert got[i, j] == pytest.approx(closed, abs=1e-15)
    assert abs(got.sum() - 1.0) <= 1e-9


def test_theorem_entries_equal_for_ratio_generator():
    d = associated_cl(RATIO, 6, 1.0)
    for i in range(64):
        for j in range(64):
            assert abs(skg_entry(RATIO, 6, i, j) - cl_entry(d, i, j)) <= 1e-12


def test_generate_cl_basics():
    d = DegreeSequence([5.0], [5.0], 5.0)
    edges = generate_cl(d, 5, seed=1)
    assert edges.tolist() == [[0, 0]] * 5
    assert generate_cl(d, 0, seed=1).shape == (0, 2)
    with pytest.raises(ZeroTotalWeight):
        generate_cl(DegreeSequence([0.0, 0.0], [0.0, 0.0], 0.0), 3, seed=1)


def test_generate_cl_empirical_frequencies():
    levels, m = 3, 400_000
    d = associated_cl(SKEWED, levels, m)
    edges = generate_cl(d, m, seed=12)
    P = cl_outer(kron_power(SKEWED, levels))
    counts = np.zeros_like(P)
    np.add.at(counts, (edges[:, 0].astype(int), edges[:, 1].astype(int)), 1)
    sd = np.sqrt(m * P * (1 - P))
    assert np.all(np.abs(counts - m * P) <= 5 * sd)


def test_generate_cl_deterministic_across_threads():
    d = associated_cl(GRAPH500, 10, 16 * 1024)
    a = generate_cl(d, 16 * 1024, seed=2, chunk_size=1000, threads=1)
    b = generate_cl(d, 16 * 1024, seed=2, chunk_size=1000, threads=4)
    assert a.tobytes() == b.tobytes()


# -- ratio condition ----------------------------------------------------------

def test_ratio_condition_examples():
    assert check_ratio_condition(validate_generator(0.4, 0.2, 0.266667, 0.133333), 1e-5)
    assert not check_ratio_condition(GRAPH500, 1e-12)
    assert abs(GRAPH500.t1 * GRAPH500.t4 - GRAPH500.t2 * GRAPH500.t3) == pytest.approx(0.0076)
    assert check_ratio_condition(UNIFORM)
    with pytest.raises(DegenerateMatrix):
        check_ratio_condition(validate_generator(0.5, 0.0, 0.5, 0.0))


def test_degree_sequence_rejects_mismatched_totals():
    with pytest.raises(ValueError):
        DegreeSequence([1.0, 2.0], [1.0, 1.0])


def test_skg_out_degree_of_vertex_zero_binomial():
    levels = 14
    m = 16 * 2**levels
    edges = generate_skg(SkgParams(GRAPH500, levels, m), seed=1)
    p = (GRAPH500.t1 + GRAPH500.t2) ** levels
    observed = int(np.count_nonzero(edges[:, 0] == 0))
    assert abs(observed - m * p) <= 4 * math.sqrt(m * p * (1 - p))
