"""Exact enumeration: recurrence table vs brute force and closed form."""

import math

import pytest
from hypothesis import given, settings, strategies as st

from planargrav.enumeration import (
    tutte_table, brute_force_counts, closed_form_rooted,
    generate_all_maps, fit_growth, unrooted_estimate, table_to_csv,
)


def test_recurrence_matches_brute_force():
    table = tutte_table(8, 12)
    brute = brute_force_counts(6)
    for key, c in brute.counts.items():
        assert table.counts.get(key, 0) == c
    for key, c in table.counts.items():
        N, m = key
        if N <= 6 and m <= brute.m_max:
            assert brute.counts.get(key, 0) == c


def test_known_small_counts():
    table = tutte_table(8, 12)
    assert table.counts[(0, 2)] == 1
    assert table.counts[(1, 3)] == 1
    assert table.counts[(2, 4)] == 2
    assert table.counts[(3, 3)] == 4
    assert table.counts[(5, 3)] == 24


@given(m=st.integers(2, 8), j=st.integers(0, 8))
@settings(max_examples=40, deadline=None)
def test_closed_form_matches_table(m, j):
    N = m + 2 * j
    table = tutte_table(26, 10)
    if N <= 26:
        assert closed_form_rooted(m, j) == table.counts.get((N, m), 0)


@given(m=st.integers(2, 12), j=st.integers(0, 12))
@settings(max_examples=60, deadline=None)
def test_parity_and_positivity(m, j):
    # counts vanish off the lattice N = m (mod 2) and are positive on it
    assert closed_form_rooted(m, j) > 0
    table = tutte_table(10, 10)
    for (N, mm), c in table.counts.items():
        assert c == 0 or (N - mm) % 2 == 0


def test_generated_maps_are_distinct_and_counted():
    maps = generate_all_maps(5)
    table = tutte_table(5, 7)
    by_size: dict = {}
    for N, bucket in maps.items():
        for mp in bucket.values():
            by_size[(mp.N, mp.m)] = by_size.get((mp.N, mp.m), 0) + 1
    for key, c in by_size.items():
        assert table.counts.get(key, 0) == c


def test_growth_fit_recovers_synthetic_law():
    c, alpha = 2.5, -2.5
    seq = [c ** n * n ** alpha for n in range(1, 300)]
    fit = fit_growth(seq, min_terms=50)
    assert fit.growth_constant == pytest.approx(c, rel=1e-3)
    assert fit.exponent == pytest.approx(alpha, abs=0.02)


def test_unrooted_estimate_scale():
    table = tutte_table(11, 4)
    est = unrooted_estimate(11, table.counts[(11, 3)])
    # rooted / (number of root choices) up to symmetry corrections
    assert 0 < est < table.counts[(11, 3)]


def test_csv_round_trip_contains_header_and_rows():
    csv = table_to_csv(tutte_table(4, 6))
    lines = csv.strip().splitlines()
    assert lines[0] == "N,m,count"
    assert "3,3,4" in lines
