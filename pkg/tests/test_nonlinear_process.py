"""Quadratic measure process: fixed point, contraction, criticality."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from planargrav.nonlinear_process import (
    ProcessParams, MeasureGrid, step, fixed_point, canonical_prediction,
    contraction_estimate, per_column_finite_predictor,
    total_mass_finite_predictor,
)


def test_fixed_point_matches_closed_form_grid():
    p = ProcessParams(0.2, 0.2)
    q = fixed_point(p, n_max=20, m_max=44)
    pred = canonical_prediction(p, 20, 44)
    assert np.max(np.abs(q.values[:, :pred.shape[1]]
                         - pred[:q.values.shape[0], :])) < 1e-9
    assert q.get(0, 2) == pytest.approx(p.beta)


def test_iteration_from_zero_is_monotone_and_bounded():
    p = ProcessParams(0.25, 0.15)
    q = MeasureGrid(15, 30)
    prev_total = 0.0
    for _ in range(200):
        q = step(q, p)
        assert np.all(q.values >= 0)
        assert q.total() + 1e-12 >= prev_total
        prev_total = q.total()
    assert prev_total <= 1.0 + 1e-9


@given(r1=st.floats(0.01, 0.3), r2=st.floats(0.01, 0.25))
@settings(max_examples=15, deadline=None)
def test_subcritical_fixed_point_mass_at_most_one(r1, r2):
    q = fixed_point(ProcessParams(r1, r2), n_max=25, m_max=40)
    assert q.total() <= 1.0 + 1e-9


def test_map_is_a_contraction_at_moderate_rates():
    est = contraction_estimate(ProcessParams(0.3, 0.2), trials=200)
    assert est["within_bound"]
    assert est["measured_factor"] < 1.0


def test_finiteness_predictors_consistent():
    # total-mass finiteness implies per-column finiteness
    for r1, r2 in [(0.1, 0.1), (0.2, 0.2), (0.4, 0.4), (0.7, 0.2),
                   (0.846, 0.1)]:
        if total_mass_finite_predictor(r1, r2):
            assert per_column_finite_predictor(r1, r2)
    assert total_mass_finite_predictor(0.2, 0.2)


def test_inadmissible_rates_rejected():
    with pytest.raises(ValueError):
        ProcessParams(0.9, 0.9)
    with pytest.raises(ValueError):
        ProcessParams(-0.1, 0.2)
