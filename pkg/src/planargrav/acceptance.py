"""Acceptance suite: one function per release criterion.

Each ``criterion_k(fast=False)`` returns ``(passed, detail)``; the
``fast`` flag shrinks sample sizes for a quick smoke reproduction and is
noted in the detail string (the release gate is the full level).  The
same functions back ``tests/test_acceptance.py`` and the ``reproduce``
CLI subcommand.
"""

from __future__ import annotations

import math
import time
from fractions import Fraction

import numpy as np

__all__ = ["ALL_CRITERIA", "run_suite"] + [
    f"criterion_{k}" for k in range(1, 16)]


def criterion_1(fast: bool = False):
    """Recurrence table equals brute-force map enumeration."""
    from .enumeration import tutte_table, brute_force_counts
    n = 6 if fast else 8
    table = tutte_table(8, 12)
    brute = brute_force_counts(n)
    bad = [(k, table.counts.get(k, 0), v) for k, v in brute.counts.items()
           if table.counts.get(k, 0) != v]
    bad += [(k, v, brute.counts.get(k, 0)) for k, v in table.counts.items()
            if k[0] <= n and k[1] <= brute.m_max
            and brute.counts.get(k, 0) != v]
    spots = {(0, 2): 1, (1, 3): 1, (2, 4): 2, (3, 3): 4, (5, 3): 24}
    spot_bad = {k: (table.counts.get(k, 0), v) for k, v in spots.items()
                if table.counts.get(k, 0) != v}
    ok = not bad and not spot_bad
    return ok, (f"recurrence vs brute force N<={n}: "
                f"{'match' if not bad else bad[:3]}; spot values "
                f"{'ok' if not spot_bad else spot_bad}")


def criterion_2(fast: bool = False):
    """Closed form equals the recurrence for m <= 10, m + 2j <= 30."""
    from .enumeration import tutte_table, closed_form_rooted
    n_hi = 20 if fast else 30
    table = tutte_table(n_hi, 12)
    bad = []
    for m in range(2, 11):
        for j in range(0, (n_hi - m) // 2 + 1):
            if closed_form_rooted(m, j) != table.counts.get((m + 2 * j, m), 0):
                bad.append((m, j))
    return not bad, f"closed form vs recurrence up to N={n_hi}: " + \
        ("exact match" if not bad else f"mismatches {bad[:5]}")


def criterion_3(fast: bool = False):
    """Disk series at beta=1 reproduces the m=2 column exactly."""
    from .enumeration import tutte_table
    from .gf_algebraic import s_series
    order = 20
    s = s_series(Fraction(1), order)
    table = tutte_table(order, 2)
    bad = [(k, s.coefficients[k], table.counts.get((k, 2), 0))
           for k in range(order + 1)
           if s.coefficients[k] != table.counts.get((k, 2), 0)]
    spots = [s.coefficients[k] for k in (0, 2, 4, 6)]
    ok = not bad and spots == [1, 1, 4, 24]
    return ok, f"series coefficients 0..{order} vs counts: " + \
        ("exact; orders 0,2,4,6 = 1,1,4,24" if ok else f"bad {bad[:3]}")


def criterion_4(fast: bool = False):
    """Growth constant 3*sqrt(3/2) and exponent -5/2 from the series."""
    from .gf_algebraic import s_series
    from .enumeration import fit_growth
    order = 120 if fast else 400
    seq = [c for c in s_series(Fraction(1), order).coefficients if c != 0]
    fit = fit_growth(seq, min_terms=20 if fast else 50)
    c_target = 3.0 * math.sqrt(1.5)
    # even-index subsequence: growth per nonzero term is c^2
    c_hat = math.sqrt(fit.growth_constant)
    alpha = fit.exponent
    ok = abs(c_hat - c_target) / c_target < 0.005 and abs(alpha + 2.5) < 0.1
    return ok, (f"order {order}: c={c_hat:.5f} (target {c_target:.5f}), "
                f"exponent {alpha:.3f} (target -2.5)")


def criterion_5(fast: bool = False):
    """Critical point, radius ratio, and functional-equation residuals."""
    from .gf_algebraic import (critical_data, functional_equation_residual,
                               quadratic_form_residual)
    cd = critical_data(Fraction(2, 27))
    order = 30 if fast else 50
    r1 = functional_equation_residual(Fraction(1), order)
    r2 = quadratic_form_residual(Fraction(1), order)
    ok = (cd.x1 == 1 and Fraction(cd.radius_R) / Fraction(cd.x1)
          == Fraction(27, 32) and r1 == 0 and r2 == 0)
    return ok, (f"x1(2/27)={cd.x1}, R/x1={cd.radius_R}/{cd.x1}, "
                f"residuals to order {order}: {r1}, {r2}")


def criterion_6(fast: bool = False):
    """Simulated boundary occupation matches the product-form law."""
    from .boundary_dynamics import (GrowthConfig, simulate_growth,
                                    occupation_distribution,
                                    stationary_boundary_law, tv_distance)
    events = 200_000 if fast else 1_000_000
    cfg = GrowthConfig(1.0, 2.0, seed=0, events=events, mode="boundary-only")
    stats = simulate_growth(cfg)
    emp = occupation_distribution(stats)
    law = stationary_boundary_law(1.0, 2.0, k_max=80)
    tv = tv_distance(emp, law)
    return tv < 0.01, f"TV(empirical, product law) = {tv:.4f} at {events} events"


def criterion_7(fast: bool = False):
    """Return-time hazard limit and critical power-law slope."""
    from .boundary_dynamics import return_hazard_limit, critical_return_slope
    hazard = return_hazard_limit(1.0, 2.0)
    slope = critical_return_slope(1.0, 10, 1000)
    ok = abs(hazard - 1.0 / 3.0) < 0.02 and abs(slope + 2.0) < 0.15
    return ok, (f"hazard limit {hazard:.5f} (target 1/3), "
                f"critical slope {slope:.3f} (target -2)")


def criterion_8(fast: bool = False):
    """Closed spheres have total defect 12; disk Euler identity holds."""
    from .boundary_dynamics import GrowthConfig, simulate_growth
    target = 1_000 if fast else 10_000
    events = 45 * target   # ~1/45 of events close the boundary at (1,2)
    cfg = GrowthConfig(1.0, 2.0, seed=0, events=events, mode="full-map",
                       close_and_reset=True, validate_every=25)
    stats = simulate_growth(cfg)
    n_closed = len(stats.closure_defects)
    bad = [d for d in stats.closure_defects if d != 12]
    ok = n_closed >= target and not bad and stats.euler_violations == 0
    return ok, (f"{n_closed} closures, defects != 12: {len(bad)}, "
                f"Euler violations: {stats.euler_violations}")


def criterion_9(fast: bool = False):
    """Nonlinear fixed point matches the canonical coefficients."""
    from .nonlinear_process import (ProcessParams, fixed_point,
                                    canonical_prediction)
    p = ProcessParams(0.2, 0.2)
    n_cap = 20
    m_cap = 44   # m-truncation feeds down into smaller m; keep headroom
    q = fixed_point(p, tol=1e-12, n_max=n_cap, m_max=m_cap)
    pred = canonical_prediction(p, n_cap, m_cap)
    err = float(np.max(np.abs(q.values[:, :19] - pred[:, :19])))
    ok = err < 1e-9 and abs(q.get(0, 2) - 0.6) < 1e-12
    return ok, (f"max |fixed point - canonical| = {err:.2e} on N,m <= 20; "
                f"q*(0,2) = {q.get(0, 2):.12f}")


def criterion_10(fast: bool = False):
    """One-step L1 contraction stays below the kernel bound."""
    from .nonlinear_process import ProcessParams, contraction_estimate
    rep = contraction_estimate(ProcessParams(0.3, 0.2),
                               trials=200 if fast else 1000, seed=0)
    return rep["within_bound"], (
        f"measured factor {rep['measured_factor']:.4f} "
        f"<= bound {rep['bound']:.4f} in {rep['trials']} trials")


def criterion_11(fast: bool = False):
    """Per-column finiteness matches the algebraic predictor on a grid."""
    from .nonlinear_process import criticality_scan
    k = 8 if fast else 20
    grid = np.linspace(0.04, 0.92, k)
    rep = criticality_scan(grid, grid)
    n_dis = sum(1 for p in rep["points"] if p["predicted"] != p["empirical"])
    return rep["agree"], (f"{len(rep['points'])} grid points, "
                          f"{n_dis} disagreements")


def criterion_12(fast: bool = False):
    """Tree bijection round-trips; image counts; weighted mass <= 1."""
    from .enumeration import generate_all_maps, tutte_table
    from .map_core import canonical_code
    from .tree_codec import encode, decode, all_valid_trees, tree_weight
    n_map = 6 if fast else 8
    n_tree = 9 if fast else 12
    maps = generate_all_maps(n_map)
    bad_maps = 0
    for by_code in maps.values():
        for mp in by_code.values():
            if canonical_code(decode(encode(mp))) != canonical_code(mp):
                bad_maps += 1
    trees = all_valid_trees(n_tree)
    bad_trees = sum(1 for ts in trees.values() for t in ts
                    if encode(decode(t)) != t)
    # image counts: trees grouped by (N, m) of the decoded map
    table = tutte_table(2 * n_tree, 2 * n_tree)
    image: dict = {}
    for ts in trees.values():
        for t in ts:
            mp = decode(t)
            image[(mp.N, mp.m)] = image.get((mp.N, mp.m), 0) + 1
    count_bad = [(k, v, table.counts.get(k, 0)) for k, v in image.items()
                 if table.counts.get(k, 0) != v]
    mass = sum(tree_weight(t, 0.4, 0.3, 0.3)
               for ts in trees.values() for t in ts)
    ok = (bad_maps == 0 and bad_trees == 0 and not count_bad
          and mass <= 1.0)
    return ok, (f"map round-trips N<={n_map}: {bad_maps} bad; tree "
                f"round-trips <={n_tree} vertices: {bad_trees} bad; "
                f"image counts: {'match' if not count_bad else count_bad[:3]}; "
                f"weighted mass {float(mass):.6f}")


def criterion_13(fast: bool = False):
    """Equilibrium degree law: normalized, geometric tail, decaying
    covariance."""
    from .tree_codec import degree_statistics
    n = 100_000 if fast else 1_000_000
    rep = degree_statistics(0.4, 0.4, 0.4, n_samples=n, seed=0,
                            distances=(4, 20))
    mass_ok = abs(rep.total_mass - 1.0) <= 0.01
    lo, hi = rep.tail_rate_ci
    tail_ok = hi < 1.0
    (c4, s4), (c20, s20) = rep.covariances[4], rep.covariances[20]
    cov_ok = (c4 - 2 * s4) > (c20 + 2 * s20)
    ok = mass_ok and tail_ok and cov_ok
    return ok, (f"mass {rep.total_mass:.4f}, tail rate {rep.tail_rate:.4f} "
                f"CI ({lo:.4f},{hi:.4f}), cov d=4 {c4:.4f}+-{s4:.4f} vs "
                f"d=20 {c20:.4f}+-{s20:.4f} at {n} samples")


def criterion_14(fast: bool = False):
    """Bulk dynamics: drift dichotomy and flip-chain reversibility."""
    from .internal_dynamics import (InternalConfig, drift_experiment,
                                    simulate_internal, component_reversibility)
    n_sub = 200 if fast else 1000
    sub = drift_experiment(InternalConfig(1.0, 2.0, seed=0), n_runs=n_sub)
    sub_ok = sub["died_fraction"] >= 0.99
    if fast:
        sup_detail = "supercritical escape: full level only"
        sup_ok = True
        frac = float("nan")
    else:
        n_sup, exceeded = 40, 0
        for r in range(n_sup):
            tr = simulate_internal(InternalConfig(
                2.0, 1.0, seed=2, replica=r,
                max_events=1_200_000, max_vertices=500_000))
            exceeded += tr.outcome == "exceeded"
        frac = exceeded / n_sup
        sup_ok = frac >= 0.05
        sup_detail = f"(2,1): q>100 in {exceeded}/{n_sup} runs ({frac:.1%})"
    comp = component_reversibility(8)
    comp_ok = (comp["adjacency_symmetric"] and comp["uniform_balanced"]
               and comp["single_component"])
    ok = sub_ok and sup_ok and comp_ok
    return ok, (f"(1,2): died {sub['died_fraction']:.1%} of {n_sub}; "
                f"{sup_detail}; octahedron-scale component: "
                f"symmetric={comp['adjacency_symmetric']}, "
                f"balanced={comp['uniform_balanced']}, "
                f"single={comp['single_component']}")


def criterion_15(fast: bool = False):
    """1D closed forms: susceptibility, gamma, queue decay, critical CLT."""
    from .one_dim import (susceptibility, gamma_slope, lifo_queue_sim,
                          critical_scaling)
    mu_cr = math.log(4)
    chi_err = max(abs(susceptibility(2, mu_cr + d)["value"]
                      - susceptibility(2, mu_cr + d)["closed_form"])
                  for d in (0.1, 0.3, 1.0))
    g = gamma_slope()
    q = lifo_queue_sim(1.0, 2.0, horizon=4e4 if fast else 2e5, seed=0)
    ks = critical_scaling(1.0, t_end=1000.0,
                          replicas=2000 if fast else 10_000, seed=0)
    ok = (chi_err < 1e-6 and abs(g["gamma"] - 1.0) <= 0.01
          and abs(q["decay_rate"] - math.log(2.0)) <= 0.02
          and ks["ks_distance"] < 0.05)
    return ok, (f"chi err {chi_err:.2e}; gamma {g['gamma']:.4f}; queue "
                f"decay {q['decay_rate']:.4f} (target {math.log(2):.4f}); "
                f"KS {ks['ks_distance']:.4f} at {ks['replicas']} replicas")


ALL_CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4,
                criterion_5, criterion_6, criterion_7, criterion_8,
                criterion_9, criterion_10, criterion_11, criterion_12,
                criterion_13, criterion_14, criterion_15]


def run_suite(level: str = "full") -> dict:
    """Run every criterion; returns a machine-readable report."""
    if level not in ("fast", "full"):
        raise ValueError("level must be 'fast' or 'full'")
    fast = level == "fast"
    results = []
    t_start = time.time()
    for k, crit in enumerate(ALL_CRITERIA, start=1):
        t0 = time.time()
        try:
            ok, detail = crit(fast=fast)
        except Exception as exc:  # a crash is a failure, not an abort
            ok, detail = False, f"exception: {exc!r}"
        results.append({"criterion": k, "passed": bool(ok),
                        "detail": detail,
                        "seconds": round(time.time() - t0, 2)})
    return {"level": level,
            "passed": all(r["passed"] for r in results),
            "n_passed": sum(r["passed"] for r in results),
            "n_total": len(results),
            "seconds": round(time.time() - t_start, 2),
            "results": results}
