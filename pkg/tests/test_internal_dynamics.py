"""Bulk insertion/removal dynamics on closed triangulations."""

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from planargrav.map_core import octahedron, tetrahedron, validate
from planargrav.internal_dynamics import (
    Triangulation, InternalConfig, simulate_internal, drift_experiment,
    exact_walk_transient, component_reversibility,
    sphere_triangulation_counts, mirror_map,
)


def _degrees(tri):
    return sorted(tri.deg[v] for v in tri.order)


def test_structure_checks_on_reference_spheres():
    for mp in (tetrahedron(), octahedron()):
        tri = Triangulation(mp, simplicial=True)
        tri.check()
        assert tri.F == 2 * tri.V - 4
        assert tri.curvature_defect() == 12


def test_subdivide_then_merge_restores_counters():
    tri = Triangulation(octahedron())
    v0, f0, degs0 = tri.V, tri.F, _degrees(tri)
    h = tri.rep[tri.order[0]]
    v = tri.subdivide(h)
    tri.check()
    assert (tri.V, tri.F, tri.deg[v]) == (v0 + 1, f0 + 2, 4)
    # one of the merge directions is the exact inverse of the subdivision
    restored = False
    for k in range(tri.deg[v]):
        probe = tri.copy()
        g = probe.out_edge(v, k)
        if probe.merge_ok(g):
            probe.merge(g)
            probe.check()
            assert (probe.V, probe.F) == (v0, f0)
            if _degrees(probe) == degs0:
                restored = True
    assert restored


def test_flip_twice_is_identity_on_degrees():
    tri = Triangulation(octahedron())
    degs0 = _degrees(tri)
    h = next(h for h in range(len(tri.nxt)) if tri.flip_ok(h))
    tri.flip(h)
    tri.check()
    assert _degrees(tri) != degs0
    assert tri.flip_ok(h)
    tri.flip(h)
    tri.check()
    assert _degrees(tri) == degs0


@given(seed=st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_random_guarded_moves_keep_structure_valid(seed):
    rng = np.random.default_rng(seed)
    tri = Triangulation(octahedron())
    for _ in range(60):
        h = int(rng.integers(len(tri.nxt)))
        if min(h, h ^ 1) in tri.free_pairs:
            continue
        kind = rng.integers(3)
        if kind == 0:
            tri.subdivide(h)
        elif kind == 1 and tri.flip_ok(h):
            tri.flip(h)
        elif kind == 2:
            g = tri.rep[tri.random_vertex(rng)]
            if tri.deg[tri.org[g]] == 4 and tri.merge_ok(g):
                tri.merge(g)
    tri.check()
    assert tri.F == 2 * tri.V - 4
    validate(tri.to_rooted())


def test_simulation_is_deterministic():
    cfg = InternalConfig(1.0, 2.0, seed=5, max_events=5_000)
    a, b = simulate_internal(cfg), simulate_internal(cfg)
    assert (a.outcome, a.n_events, a.final_q, a.increments) == \
        (b.outcome, b.n_events, b.final_q, b.increments)


def test_subcritical_tracked_degree_dies():
    rep = drift_experiment(InternalConfig(1.0, 2.0, seed=0), n_runs=60)
    assert rep["died_fraction"] > 0.9
    assert rep["mean_increment"] < 0


def test_exact_walk_law_is_a_probability_vector():
    p = exact_walk_transient(4, 1.0, 0.5, k_max=60)
    assert p.sum() == pytest.approx(1.0, abs=1e-8)
    assert np.all(p >= -1e-12)


def test_flip_graph_components_match_sphere_counts():
    for n_triangles in (8, 10):
        rep = component_reversibility(n_triangles)
        v = n_triangles // 2 + 2
        assert rep["component_size"] == sphere_triangulation_counts[v]
        assert rep["adjacency_symmetric"]
        assert rep["uniform_balanced"]


def test_mirror_map_is_an_involution():
    from planargrav.map_core import canonical_code
    mp = octahedron()
    assert canonical_code(mirror_map(mirror_map(mp))) == canonical_code(mp)
