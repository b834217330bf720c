"""Algebraic generating function: exact series, criticality, residuals."""

from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from planargrav.gf_algebraic import (
    s_series, y_series, critical_data, functional_equation_residual,
    quadratic_form_residual, y_branch, y_radius, cubic_discriminant,
)
from planargrav.enumeration import tutte_table


def test_series_counts_two_boundary_disks():
    s = s_series(Fraction(1), 12)
    table = tutte_table(12, 2)
    for N in range(13):
        assert s.coefficients[N] == table.counts.get((N, 2), 0)


def test_spot_coefficients():
    s = s_series(Fraction(1), 8)
    assert [s.coefficients[k] for k in (0, 2, 4, 6)] == [1, 1, 4, 24]


betas = st.integers(1, 14).map(lambda k: Fraction(k, 200))


@given(beta=betas)
@settings(max_examples=15, deadline=None)
def test_functional_equation_exact(beta):
    assert functional_equation_residual(beta, 12) == 0


@given(beta=betas)
@settings(max_examples=10, deadline=None)
def test_quadratic_form_exact(beta):
    assert quadratic_form_residual(beta, 12) == 0


def test_critical_point_at_top_coupling():
    cd = critical_data(Fraction(2, 27))
    assert cd.x1 == 1
    assert Fraction(cd.radius_R) / Fraction(cd.x1) == Fraction(27, 32)


def test_branch_matches_series_inside_radius():
    beta = 1.0
    cd = critical_data(beta)
    x = 0.4 * float(cd.x1)
    y = y_branch(beta, x)
    ys = y_series(beta, 60).coefficients
    approx = sum(float(c) * x ** k for k, c in enumerate(ys))
    assert y == pytest.approx(approx, rel=1e-10)


def test_discriminant_vanishes_at_singularity():
    beta = Fraction(1)
    cd = critical_data(beta)
    d = cubic_discriminant(beta, Fraction(cd.x1).limit_denominator(10 ** 12))
    assert abs(float(d)) < 1e-9


@given(beta=st.floats(0.02, 0.07))
@settings(max_examples=20, deadline=None)
def test_radius_below_first_singularity(beta):
    cd = critical_data(beta)
    assert 0 < cd.radius_R < cd.x1
    # second branch stays real up to R
    assert y_radius(beta, 0.5 * float(cd.radius_R)) > 0
