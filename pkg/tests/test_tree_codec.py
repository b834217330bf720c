"""Tree bijection and codec: round trips, weights, urn identities."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from planargrav.map_core import validate
from planargrav.tree_codec import (
    decode, encode, tree_counts, tree_is_valid, tree_weight,
    tree_to_string, tree_from_string, tree_to_seq, seq_to_tree,
    all_valid_trees, sample_tree, urn_counts, urn_brute_force,
    urn_ratio_report, catalan,
)


def _all_trees(n):
    return [t for ts in all_valid_trees(n).values() for t in ts]


def test_encode_decode_round_trip_small():
    for t in _all_trees(10):
        mp = decode(t)
        validate(mp)
        assert encode(mp) == t


def test_decoded_maps_are_pairwise_distinct():
    from planargrav.map_core import canonical_code
    codes = [canonical_code(decode(t)) for t in _all_trees(9)]
    assert len(codes) == len(set(codes))


@given(seed=st.integers(0, 10 ** 6))
@settings(max_examples=30, deadline=None)
def test_sampled_tree_serialization_round_trips(seed):
    t = sample_tree(0.4, 0.3, 0.3, seed=seed)
    assert tree_is_valid(t)
    assert tree_from_string(tree_to_string(t)) == t
    assert seq_to_tree(tree_to_seq(t)) == t


def test_vertex_type_counts_satisfy_leaf_balance():
    for t in _all_trees(9):
        n0, n1, n2 = tree_counts(t)
        # binary vertices add a leaf each; the root consumes one
        assert n0 == n2 + 1


def test_weight_is_product_over_vertex_types():
    t = _all_trees(6)[-1]
    n0, n1, n2 = tree_counts(t)
    w = tree_weight(t, Fraction(1, 2), Fraction(1, 3), Fraction(1, 5))
    assert w == Fraction(1, 2) ** n0 * Fraction(1, 3) ** n1 \
        * Fraction(1, 5) ** n2


def test_subcritical_weights_sum_below_one():
    total = sum(tree_weight(t, 0.4, 0.3, 0.3) for t in _all_trees(14))
    assert total <= 1.0


@given(n=st.integers(1, 7), m=st.integers(1, 7))
@settings(max_examples=40, deadline=None)
def test_urn_counts_match_brute_force(n, m):
    if m > n:
        with pytest.raises(ValueError):
            urn_counts(n, m)
    else:
        assert urn_counts(n, m) == urn_brute_force(n, m)


def test_urn_ratios_stay_at_most_one():
    # within a row the ratio c(n, m) / c(n, m-1) decreases to 1 at m = n
    ratios = urn_ratio_report(20)
    assert all(r <= ratios[i][1] + 1e-12
               for i, (_, r) in enumerate(ratios[1:]))
    assert ratios[-1][1] >= 1.0


def test_full_urns_are_catalan_with_growth_rate_four():
    assert [catalan(n) for n in range(7)] == [1, 1, 2, 5, 14, 42, 132]
    for n in range(1, 12):
        assert urn_counts(n, n) == catalan(n)
    assert urn_counts(30, 30) / urn_counts(29, 29) == pytest.approx(
        4.0, abs=0.25)
