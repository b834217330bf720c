"""Half-edge maps: validity, Euler/Gauss-Bonnet identities, local moves."""

import pytest
from hypothesis import given, settings, strategies as st

from planargrav.map_core import (
    RootedMap, validate, canonical_code, unrooted_canonical_code,
    euler_characteristic, gauss_bonnet_defect, close_boundary,
    gv_move, alexander_move, tetrahedron, octahedron,
    from_triangles, to_triangles, vertex_degrees,
)
from planargrav.boundary_dynamics import initial_triangle


def test_reference_maps_validate():
    for mp in (tetrahedron(), octahedron()):
        validate(mp)
        assert euler_characteristic(mp) == 2
        assert gauss_bonnet_defect(mp) == 12


def test_triangle_list_round_trip():
    mp = from_triangles(to_triangles(octahedron()))
    assert sorted(vertex_degrees(mp)) == sorted(vertex_degrees(octahedron()))
    validate(mp)


def test_close_boundary_of_single_triangle():
    mp = close_boundary(initial_triangle())
    assert gauss_bonnet_defect(mp) == 12
    assert euler_characteristic(mp) == 2


def test_alexander_move_adds_one_vertex():
    mp = octahedron()
    before = (mp.V, mp.F)
    out = alexander_move(mp, 0)
    validate(out)
    assert (out.V, out.F) == (before[0] + 1, before[1] + 2)
    assert gauss_bonnet_defect(out) == 12


def test_gv_move_preserves_counters():
    mp = octahedron()
    out = gv_move(mp, 0)
    validate(out)
    assert (out.V, out.F) == (mp.V, mp.F)
    assert sum(vertex_degrees(out)) == sum(vertex_degrees(mp))


def test_canonical_code_separates_known_maps():
    assert canonical_code(tetrahedron()) != canonical_code(octahedron())
    assert canonical_code(octahedron()) == canonical_code(octahedron())


def test_unrooted_code_ignores_root_choice():
    mp = octahedron()
    codes = set()
    for h in range(len(mp.twin)):
        rerooted = RootedMap(list(mp.twin), list(mp.nxt), h,
                             mp.closed, mp.allow_multi)
        codes.add(unrooted_canonical_code(rerooted))
    assert len(codes) == 1


@given(seed=st.integers(0, 10 ** 6))
@settings(max_examples=25, deadline=None)
def test_random_alexander_sequences_stay_valid(seed):
    import numpy as np
    rng = np.random.default_rng(seed)
    mp = octahedron()
    for _ in range(4):
        h = int(rng.integers(len(mp.twin)))
        mp = alexander_move(mp, h)
    validate(mp)
    assert euler_characteristic(mp) == 2
    assert gauss_bonnet_defect(mp) == 12
