"""Boundary growth chain: stationary law, returns, full-map invariants."""

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from planargrav.boundary_dynamics import (
    GrowthConfig, simulate_growth, stationary_boundary_law,
    occupation_distribution, tv_distance, return_hazard_limit,
    return_tail_ratio, critical_return_slope, reversible_variant_check,
)


def test_stationary_law_normalized_and_geometric_ratio():
    law = stationary_boundary_law(1.0, 2.0, k_max=200)
    assert law.sum() == pytest.approx(1.0, abs=1e-9)
    for i in range(5):
        k = i + 3
        assert law[i + 1] / law[i] == pytest.approx(
            0.5 * k / (k + 1), rel=1e-12)


@given(lam1=st.floats(0.2, 1.0), gap=st.floats(0.2, 2.0))
@settings(max_examples=25, deadline=None)
def test_stationary_ratio_any_subcritical_rates(lam1, gap):
    lam2 = lam1 + gap
    law = stationary_boundary_law(lam1, lam2, k_max=120)
    assert law.sum() == pytest.approx(1.0, abs=1e-8)
    assert law[1] / law[0] == pytest.approx(
        (lam1 / lam2) * 3.0 / 4.0, rel=1e-10)


def test_simulated_occupation_near_stationary():
    cfg = GrowthConfig(1.0, 2.0, seed=0, events=200_000,
                       mode="boundary-only")
    emp = occupation_distribution(simulate_growth(cfg))
    tv = tv_distance(emp, stationary_boundary_law(1.0, 2.0, k_max=80))
    assert tv < 0.02


def test_simulation_is_deterministic():
    cfg = GrowthConfig(1.0, 2.0, seed=7, events=20_000,
                       mode="boundary-only")
    a = simulate_growth(cfg)
    b = simulate_growth(cfg)
    assert a.occupation_time == b.occupation_time
    assert a.returns_to_3 == b.returns_to_3


def test_return_hazard_approaches_rate_contrast():
    # conditional stopping probability tends to (l2 - l1) / (l1 + l2)
    assert return_hazard_limit(1.0, 2.0) == pytest.approx(1 / 3, abs=0.02)
    assert return_hazard_limit(1.0, 3.0) == pytest.approx(1 / 2, abs=0.02)


def test_unconditional_tail_ratio():
    # P(T > n) / P(T >= n) tends to 2*l1 / (l1 + l2)
    assert return_tail_ratio(1.0, 2.0) == pytest.approx(2 / 3, abs=0.02)


def test_critical_return_tail_exponent():
    slope = critical_return_slope(1.0, n_lo=10, n_hi=1000)
    assert slope == pytest.approx(-2.0, abs=0.15)


def test_full_map_closures_satisfy_gauss_bonnet():
    cfg = GrowthConfig(1.0, 2.0, seed=3, events=5_000, mode="full-map",
                       close_and_reset=True, validate_every=20)
    stats = simulate_growth(cfg)
    assert stats.euler_violations == 0
    assert stats.closure_defects, "chain never returned to a closed state"
    assert all(d == 12 for d in stats.closure_defects)


def test_reversible_variant_state_graph():
    rep = reversible_variant_check(1.0, 2.0, n_max=6)
    assert rep["unpaired_additions"] == 0
    assert rep["spurious_deletions"] == 0
    assert not rep["non_deletable_found"]
