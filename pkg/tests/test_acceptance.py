"""Acceptance gate: one test per criterion, one pass/fail line each.

Runs at the fast level by default (a few minutes for the whole file);
set PLANARGRAV_ACCEPTANCE_LEVEL=full for the complete protocol (the
supercritical escape check alone takes several minutes).  Tolerances
are fixed inside each criterion:

  1  recurrence table == brute force (exact), spot values exact
  2  closed form == recurrence to N = 30 (exact)
  3  series coefficients == counts to order 20 (exact)
  4  growth constant within 0.5% of 3*sqrt(1.5); exponent -2.5 +- 0.1
  5  x1(2/27) == 1, R/x1 == 27/32, algebraic residuals exactly 0
  6  empirical boundary law within TV 0.01 of the product law
  7  return hazard within 0.02 of 1/3; critical slope -2 +- 0.15
  8  every closure has total defect 12; zero Euler violations
  9  fixed point matches closed form to 1e-9; q*(0,2) = 3/5
  10 measured contraction factor <= r1 + 2 r2
  11 scan verdicts == analytic finiteness predictors (exact)
  12 codec round trips exact; image counts == enumeration; mass <= 1
  13 degree-law mass within 0.01 of 1; geometric tail CI below 1;
     near covariance exceeds far covariance at 2 standard errors
  14 subcritical death fraction >= 0.99; supercritical escape in >= 5%
     of runs; flip-graph component symmetric, balanced, complete
  15 susceptibility to 1e-6 of closed form; gamma within 0.01 of 1;
     queue decay within 0.02 of ln 2; half-normal KS < 0.05
"""

import os

import pytest

from planargrav.acceptance import ALL_CRITERIA

FAST = os.environ.get("PLANARGRAV_ACCEPTANCE_LEVEL", "fast") != "full"


@pytest.mark.parametrize("k", range(1, 16))
def test_criterion(k):
    passed, detail = ALL_CRITERIA[k - 1](fast=FAST)
    print(f"criterion {k:2d}: {'PASS' if passed else 'FAIL'}  {detail}")
    assert passed, f"criterion {k} failed: {detail}"
