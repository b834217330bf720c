"""1D lattice gravity: exact path counts, susceptibility, word chains."""

import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from planargrav.one_dim import (
    WalkConfig, path_layer, path_counts, green_function,
    susceptibility, susceptibility_closed_form, gamma_slope,
    lifo_queue_sim, context_free_sim, critical_scaling,
)


@given(d=st.integers(1, 3), N=st.integers(0, 6))
@settings(max_examples=30, deadline=None)
def test_layer_total_counts_all_walks(d, N):
    assert sum(path_layer(d, N).values()) == (2 * d) ** N


@given(d=st.integers(1, 2), n1=st.integers(0, 5), n2=st.integers(0, 5))
@settings(max_examples=25, deadline=None)
def test_path_count_convolution(d, n1, n2):
    # splitting a walk at step n1 factorizes the count over midpoints
    a, b = path_layer(d, n1), path_layer(d, n2)
    target = (0,) * d
    direct = path_counts(d, n1 + n2, target)
    split = sum(c * b.get(tuple(-yi for yi in y), 0)
                for y, c in a.items())
    assert direct == split


def test_path_counts_symmetric_under_reflection():
    assert path_counts(2, 6, (2, 0)) == path_counts(2, 6, (-2, 0))
    assert path_counts(2, 6, (1, 1)) == path_counts(2, 6, (1, -1))


def test_susceptibility_matches_closed_form_within_tail():
    for mu in (1.6, 2.0, 3.0):
        chi = susceptibility(2, mu)
        assert abs(chi["value"] - susceptibility_closed_form(2, mu)) \
            <= chi["tail_bound"] + 1e-12
    assert susceptibility_closed_form(2, math.log(4) + 1.0) \
        == pytest.approx(1.0 / (1.0 - math.exp(-1.0)))


def test_green_function_decays_from_origin():
    g0 = green_function(2, 1.9, (0, 0))["value"]
    g1 = green_function(2, 1.9, (3, 0))["value"]
    assert g0 > g1 > 0


def test_susceptibility_exponent_is_one():
    rep = gamma_slope()
    assert rep["gamma"] == pytest.approx(1.0, abs=0.01)


def test_queue_length_law_is_geometric():
    rep = lifo_queue_sim(1.0, 2.0, horizon=2e5, seed=0)
    assert rep["decay_rate"] == pytest.approx(math.log(2.0), abs=0.02)


def test_context_free_chain_detailed_balance_ratio():
    # rates lam (n+1) up / nu n down give pi_{n+1} / pi_n = lam / nu
    rep = context_free_sim(1.0, 2.0, horizon=2e5, seed=0)
    assert rep["length_ratio"] == pytest.approx(0.5, abs=0.02)


def test_exact_detailed_balance_in_rationals():
    lam, nu = Fraction(2, 3), Fraction(5, 4)
    pi = [(lam / nu) ** n for n in range(20)]
    for n in range(19):
        assert pi[n] * lam * (n + 1) == pi[n + 1] * nu * (n + 1)


def test_supercritical_queue_has_uniform_bulk():
    rep = lifo_queue_sim(2.0, 1.0, alphabet=2, horizon=2e4, seed=1)
    assert rep["final_length"] > 1000
    assert rep["symbol_freq"][0] == pytest.approx(0.5, abs=0.05)


def test_critical_queue_is_diffusive():
    rep = critical_scaling(t_end=200.0, replicas=2000, seed=0)
    assert rep["ks_distance"] < 0.1


def test_config_validation():
    with pytest.raises(ValueError):
        WalkConfig(d=0)
    assert WalkConfig(d=2).mu_cr == pytest.approx(math.log(4))
