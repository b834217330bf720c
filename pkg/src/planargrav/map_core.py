"""Rooted planar maps as half-edge structures.

A map is stored as two permutations on half-edge indices:

* ``twin`` -- a fixed-point-free involution pairing the two sides of
  each edge;
* ``nxt`` -- the successor permutation around each face (so faces are
  the orbits of ``nxt``).

Vertices are the orbits of ``h -> nxt[twin[h]]``; they are never stored
explicitly.  A *disk* map carries a root half-edge lying on the outer
face; a *closed* map (sphere triangulation) has no outer face and the
root is merely a traversal anchor.

The two growth moves implemented here generate every rooted disk
triangulation exactly once:

* ``tutte_move_1``: cap the root edge and its boundary successor with a
  triangle, ``(N, m) -> (N + 1, m - 1)``, allowed for ``m >= 3``;
* ``tutte_move_2``: glue an ordered pair of disk maps with one new
  triangle, ``(N1 + N2 + 1, m1 + m2 - 1)``.

``peel_root`` is the exact inverse (used by the tree codec).
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator, Sequence

__all__ = [
    "RootedMap",
    "new_edge_map",
    "tutte_move_1",
    "tutte_move_2",
    "peel_root",
    "canonical_code",
    "unrooted_canonical_code",
    "euler_characteristic",
    "vertex_degrees",
    "curvature",
    "gauss_bonnet_defect",
    "gv_move",
    "alexander_move",
    "from_triangles",
    "to_triangles",
    "close_boundary",
    "validate",
    "tetrahedron",
    "octahedron",
]

_CODE_VERSION = 1


@dataclass
class RootedMap:
    """Half-edge map.  Treat instances as values: moves return copies."""

    twin: list[int]
    nxt: list[int]
    root: int
    closed: bool = False
    allow_multi: bool = True

    def copy(self) -> "RootedMap":
        return RootedMap(self.twin[:], self.nxt[:], self.root,
                         self.closed, self.allow_multi)

    # -- derived counters ------------------------------------------------

    @property
    def num_half_edges(self) -> int:
        return len(self.twin)

    @property
    def L(self) -> int:
        """Number of edges."""
        return len(self.twin) // 2

    def face_of(self, h: int) -> list[int]:
        """The orbit of ``nxt`` through half-edge ``h``."""
        out = [h]
        g = self.nxt[h]
        while g != h:
            out.append(g)
            g = self.nxt[g]
        return out

    def outer_face(self) -> list[int]:
        """Boundary half-edges in cyclic order starting at the root."""
        if self.closed:
            raise ValueError("closed map has no outer face")
        return self.face_of(self.root)

    @property
    def m(self) -> int:
        """Boundary length (degree of the outer face)."""
        return len(self.outer_face())

    @property
    def F(self) -> int:
        """Total number of faces, outer face included for disk maps."""
        return sum(1 for _ in self.faces())

    @property
    def N(self) -> int:
        """Number of inner faces."""
        return self.F - (0 if self.closed else 1)

    @property
    def V(self) -> int:
        return sum(1 for _ in self.vertices())

    def faces(self) -> Iterator[list[int]]:
        seen = [False] * len(self.nxt)
        for h in range(len(self.nxt)):
            if not seen[h]:
                face = self.face_of(h)
                for g in face:
                    seen[g] = True
                yield face

    def vertex_of(self, h: int) -> list[int]:
        """All half-edges sharing the origin vertex of ``h``."""
        out = [h]
        g = self.nxt[self.twin[h]]
        while g != h:
            out.append(g)
            g = self.nxt[self.twin[g]]
        return out

    def vertices(self) -> Iterator[list[int]]:
        seen = [False] * len(self.nxt)
        for h in range(len(self.nxt)):
            if not seen[h]:
                orb = self.vertex_of(h)
                for g in orb:
                    seen[g] = True
                yield orb

    def counters(self) -> tuple[int, int, int, int]:
        """(N, m, V, L); m = 0 for closed maps."""
        m = 0 if self.closed else self.m
        return (self.N, m, self.V, self.L)


def new_edge_map() -> RootedMap:
    """The smallest disk map: one edge, boundary of length two (N=0, m=2)."""
    return RootedMap(twin=[1, 0], nxt=[1, 0], root=0)


def validate(mp: RootedMap, triangulation: bool = True) -> None:
    """Raise ``ValueError`` on any structural defect.

    Checks the permutation axioms, genus zero, and (optionally) that
    every non-outer face is a triangle.
    """
    n = len(mp.twin)
    if n == 0 or n % 2:
        raise ValueError("half-edge count must be positive and even")
    if sorted(mp.nxt) != list(range(n)):
        raise ValueError("nxt is not a permutation")
    for h in range(n):
        if mp.twin[h] == h or mp.twin[mp.twin[h]] != h:
            raise ValueError("twin is not a fixed-point-free involution")
    if not 0 <= mp.root < n:
        raise ValueError("root out of range")
    # connectivity and genus
    faces = list(mp.faces())
    V = mp.V
    F = len(faces)
    L = n // 2
    if V - L + F != 2:
        raise ValueError(f"Euler characteristic violated: V={V} L={L} F={F}")
    if _reachable_count(mp) != n:
        raise ValueError("map is not connected")
    if triangulation:
        outer = None if mp.closed else frozenset(mp.outer_face())
        for face in faces:
            if outer is not None and face[0] in outer:
                if len(face) < 2:
                    raise ValueError("outer face degenerate")
                continue
            if len(face) != 3:
                raise ValueError("non-outer face of degree != 3")
    if not mp.allow_multi:
        _check_simplicial(mp)


def _reachable_count(mp: RootedMap) -> int:
    seen = {mp.root}
    stack = [mp.root]
    while stack:
        h = stack.pop()
        for g in (mp.nxt[h], mp.twin[h]):
            if g not in seen:
                seen.add(g)
                stack.append(g)
    return len(seen)


def _check_simplicial(mp: RootedMap) -> None:
    labels = _vertex_labels(mp)
    edges = set()
    for h in range(len(mp.twin)):
        if h < mp.twin[h]:
            u, v = labels[h], labels[mp.twin[h]]
            if u == v:
                raise ValueError("loop edge in simplicial mode")
            key = (min(u, v), max(u, v))
            if key in edges:
                raise ValueError("multi-edge in simplicial mode")
            edges.add(key)


def _vertex_labels(mp: RootedMap) -> list[int]:
    """Label each half-edge with the index of its origin vertex."""
    labels = [-1] * len(mp.nxt)
    k = 0
    for h in range(len(mp.nxt)):
        if labels[h] < 0:
            for g in mp.vertex_of(h):
                labels[g] = k
            k += 1
    return labels


# -- Tutte moves ---------------------------------------------------------


def tutte_move_1(mp: RootedMap) -> RootedMap:
    """Cap the root edge and its successor with one triangle.

    (N, m) -> (N + 1, m - 1).  Rejects m = 2: the boundary of a 2-gon
    has no pair of distinct adjacent edges to cap.
    """
    if mp.closed:
        raise ValueError("move on closed map")
    boundary = mp.outer_face()
    if len(boundary) < 3:
        raise ValueError("tutte_move_1 requires boundary length m >= 3")
    out = mp.copy()
    e1 = out.root
    e2 = out.nxt[e1]
    s = out.nxt[e2]          # boundary successor of the capped pair
    p = boundary[-1]         # boundary predecessor of the root
    a = len(out.twin)        # inner side of the new edge
    b = a + 1                # outer side: the new root
    out.twin.extend([b, a])
    out.nxt.extend([0, 0])
    # new inner triangle e1 -> e2 -> a
    out.nxt[e2] = a
    out.nxt[a] = e1
    # outer face: ... p -> b -> s ...
    out.nxt[p] = b
    out.nxt[b] = s if s != e1 else b  # m == 3 collapses to a 2-gon
    if s == e1:
        # boundary was exactly (e1, e2, p): new outer face is (b, p)
        out.nxt[b] = p
    out.root = b
    return out


def tutte_move_2(a_map: RootedMap, b_map: RootedMap) -> RootedMap:
    """Glue the ordered pair (a, b) with one new triangle.

    The head of a's root edge is identified with the tail of b's root
    edge; the triangle sits on the two root edges and the new edge
    closing it becomes the root of the result.
    (N1 + N2 + 1, m1 + m2 - 1).
    """
    if a_map.closed or b_map.closed:
        raise ValueError("move on closed map")
    na = len(a_map.twin)
    twin = a_map.twin + [h + na for h in b_map.twin]
    nxt = a_map.nxt + [h + na for h in b_map.nxt]
    ra = a_map.root
    rb = b_map.root + na
    bound_a = a_map.outer_face()
    bound_b = b_map.outer_face()
    pa = bound_a[-1]
    sa = nxt[ra]
    pb = bound_b[-1] + na
    sb = nxt[rb]
    c = len(twin)            # inner side closing the triangle
    d = c + 1                # outer side: the new root
    twin.extend([d, c])
    nxt.extend([0, 0])
    # inner triangle ra -> rb -> c
    nxt[ra] = rb
    nxt[rb] = c
    nxt[c] = ra
    # outer face: d -> (b boundary minus rb) -> (a boundary minus ra) -> d
    nxt[d] = sb if sb != rb else sa if sa != ra else d
    if sb == rb:
        # b was an edge map is impossible here (m >= 2 means sb != rb)
        raise AssertionError("boundary of length 1")
    nxt[pb] = sa if sa != ra else d
    if sa != ra:
        nxt[pa] = d
    return RootedMap(twin=twin, nxt=nxt, root=d,
                     allow_multi=a_map.allow_multi and b_map.allow_multi)


def peel_root(mp: RootedMap) -> tuple[str, tuple[RootedMap, ...]]:
    """Invert the generating moves at the root triangle.

    Returns ``("move1", (sub,))`` or ``("move2", (a, b))`` or
    ``("edge", ())`` for the edge map itself.
    """
    if mp.closed:
        raise ValueError("cannot peel a closed map")
    boundary = mp.outer_face()
    if mp.N == 0:
        if len(boundary) != 2:
            raise ValueError("N = 0 disk that is not the edge map")
        return ("edge", ())
    r = mp.root
    t = mp.twin[r]           # inner side of the root edge
    n1 = mp.nxt[t]           # u -> v
    n2 = mp.nxt[n1]          # v -> w
    if mp.nxt[n2] != t:
        raise ValueError("root's inner face is not a triangle")
    # is the apex v (head of n1) on the boundary?
    outer = set(boundary)
    apex_boundary_edge = None
    for g in mp.vertex_of(n2):
        if g in outer:
            apex_boundary_edge = g
            break
    if apex_boundary_edge is None:
        return ("move1", (_unpeel_move1(mp, boundary, t, n1, n2),))
    return ("move2", _unpeel_move2(mp, boundary, t, n1, n2,
                                   apex_boundary_edge))


def _unpeel_move1(mp: RootedMap, boundary: Sequence[int],
                  t: int, n1: int, n2: int) -> RootedMap:
    out = mp.copy()
    r = out.root
    p = boundary[-1]
    s = out.nxt[r]
    # reopen the triangle: boundary ... p -> n1 -> n2 -> s ...
    out.nxt[p if p != r else n2] = n1
    out.nxt[n2] = s if s != r else n1
    out.root = n1
    return _drop_half_edges(out, (r, t))


def _unpeel_move2(mp: RootedMap, boundary: Sequence[int], t: int,
                  n1: int, n2: int, sa: int) -> tuple[RootedMap, RootedMap]:
    r = mp.root
    nxt = mp.nxt[:]
    twin = mp.twin[:]
    # boundary order: r, sb, ..., pb, sa, ..., pa  (sa has origin = apex)
    idx = boundary.index(sa)
    pb = boundary[idx - 1]
    pa = boundary[-1]
    sb = nxt[r]
    # component a: root n1, boundary n1 -> sa ... pa -> n1
    nxt[n1] = sa if sa != r else n1
    nxt[pa if pa != r else n1] = n1
    # component b: root n2, boundary n2 -> sb ... pb -> n2
    nxt[n2] = sb if sb != r else n2
    nxt[pb if pb != r else n2] = n2
    parent = RootedMap(twin=twin, nxt=nxt, root=n1,
                       allow_multi=mp.allow_multi)
    a_part = _extract_component(parent, n1)
    b_part = _extract_component(RootedMap(twin=twin, nxt=nxt, root=n2,
                                          allow_multi=mp.allow_multi), n2)
    return (a_part, b_part)


def _extract_component(mp: RootedMap, start: int) -> RootedMap:
    seen = {start}
    stack = [start]
    while stack:
        h = stack.pop()
        for g in (mp.nxt[h], mp.twin[h]):
            if g not in seen:
                seen.add(g)
                stack.append(g)
    order = sorted(seen)
    relabel = {h: i for i, h in enumerate(order)}
    return RootedMap(twin=[relabel[mp.twin[h]] for h in order],
                     nxt=[relabel[mp.nxt[h]] for h in order],
                     root=relabel[start],
                     allow_multi=mp.allow_multi)


def _drop_half_edges(mp: RootedMap, dead: Sequence[int]) -> RootedMap:
    keep = [h for h in range(len(mp.twin)) if h not in set(dead)]
    relabel = {h: i for i, h in enumerate(keep)}
    return RootedMap(twin=[relabel[mp.twin[h]] for h in keep],
                     nxt=[relabel[mp.nxt[h]] for h in keep],
                     root=relabel[mp.root],
                     closed=mp.closed,
                     allow_multi=mp.allow_multi)


# -- canonical codes -----------------------------------------------------


def canonical_code(mp: RootedMap) -> bytes:
    """Root-anchored complete isomorphism invariant.

    Half-edges are relabelled in BFS discovery order from the root
    (expanding via ``nxt`` then ``twin``); the relabelled permutation
    tables are serialized.  Rooted maps have no nontrivial
    automorphisms, so equal codes mean root-respecting isomorphism.

    Layout: 1 version byte, ``uint32`` half-edge count, then for each
    half-edge in canonical order its ``nxt`` and ``twin`` labels as
    ``uint16`` pairs.
    """
    n = len(mp.twin)
    if n > 0xFFFF:
        raise ValueError("map too large for the code format")
    label = {mp.root: 0}
    order = [mp.root]
    head = 0
    while head < len(order):
        h = order[head]
        head += 1
        for g in (mp.nxt[h], mp.twin[h]):
            if g not in label:
                label[g] = len(order)
                order.append(g)
    body = bytearray()
    body.append(_CODE_VERSION)
    body += struct.pack(">I", n)
    flags = (1 if mp.closed else 0)
    body.append(flags)
    for h in order:
        body += struct.pack(">HH", label[mp.nxt[h]], label[mp.twin[h]])
    return bytes(body)


def unrooted_canonical_code(mp: RootedMap) -> bytes:
    """Minimum of the rooted code over all admissible root choices.

    For disk maps the root ranges over the boundary half-edges; for
    closed maps over every half-edge.
    """
    candidates = range(len(mp.twin)) if mp.closed else mp.outer_face()
    best = None
    probe = mp.copy()
    for h in candidates:
        probe.root = h
        code = canonical_code(probe)
        if best is None or code < best:
            best = code
    assert best is not None
    return best


# -- geometry ------------------------------------------------------------


def euler_characteristic(mp: RootedMap) -> int:
    return mp.V - mp.L + mp.F


def vertex_degrees(mp: RootedMap) -> list[int]:
    """Degrees q_v (incident half-edges; loops count twice)."""
    return [len(orb) for orb in mp.vertices()]


def curvature(q: int) -> Fraction:
    """Discrete curvature at a vertex of degree q, in units of pi.

    R = 2 pi (6 - q) / q; the returned Fraction is R / pi.
    """
    if q <= 0:
        raise ValueError("vertex degree must be positive")
    return Fraction(2 * (6 - q), q)


def gauss_bonnet_defect(mp: RootedMap) -> int:
    """Total angle defect sum(6 - q_v) of a closed sphere triangulation.

    Always 12: with epsilon_v = pi (6 - q_v) / 3 this is the discrete
    Gauss-Bonnet identity sum(epsilon_v) = 2 pi chi at chi = 2.
    """
    if not mp.closed:
        raise ValueError("defect sum is defined for closed triangulations")
    for face in mp.faces():
        if len(face) != 3:
            raise ValueError("not a triangulation")
    return sum(6 - q for q in vertex_degrees(mp))


def close_boundary(mp: RootedMap) -> RootedMap:
    """Cap a boundary of length 3 with a final triangle (sphere closure).

    The three boundary half-edges already form a 3-cycle of ``nxt``;
    closing just promotes the outer face to an inner triangle.
    """
    if mp.closed:
        raise ValueError("already closed")
    if mp.m != 3:
        raise ValueError("closure requires m = 3")
    out = mp.copy()
    out.closed = True
    return out


# -- local re-triangulation moves ----------------------------------------


def gv_move(mp: RootedMap, h: int) -> RootedMap:
    """Flip the inner edge carried by half-edge ``h`` (degree-preserving
    move 1 of the bulk dynamics): the diagonal of the two adjacent
    triangles is replaced by the opposite diagonal.  V, L, F invariant.
    """
    out = mp.copy()
    t = out.twin[h]
    a = out.nxt[h]
    b = out.nxt[a]
    c = out.nxt[t]
    d = out.nxt[c]
    if out.nxt[b] != h or out.nxt[d] != t:
        raise ValueError("flip target is not between two triangles")
    if not out.closed:
        outer = set(out.outer_face())
        if h in outer or t in outer:
            raise ValueError("cannot flip a boundary edge")
    if not mp.allow_multi:
        w = b  # half-edge out of w... validity via vertex scan below
        head_a = out.vertex_of(b)      # origin w
        head_c = set(out.vertex_of(d))  # origin x
        if b in head_c:
            raise ValueError("flip would create a loop")
        for g in head_a:
            if out.twin[g] in head_c:
                raise ValueError("flip would create a multi-edge")
    # new triangles: (c, h, b) and (a, t, d); h becomes x -> w
    out.nxt[c] = h
    out.nxt[h] = b
    out.nxt[b] = c
    out.nxt[a] = t
    out.nxt[t] = d
    out.nxt[d] = a
    if out.root in (h, t) and not out.closed:
        raise AssertionError("unreachable: root edge is on the boundary")
    return out


def alexander_move(mp: RootedMap, h: int) -> RootedMap:
    """Subdivide the edge carried by ``h`` with a fresh vertex.

    The two incident triangles are replaced by four; V -> V + 1,
    L -> L + 3, F -> F + 2.
    """
    out = mp.copy()
    t = out.twin[h]
    a = out.nxt[h]   # v -> w
    b = out.nxt[a]   # w -> u
    c = out.nxt[t]   # u -> x
    d = out.nxt[c]   # x -> v
    if out.nxt[b] != h or out.nxt[d] != t:
        raise ValueError("subdivision target is not between two triangles")
    if not out.closed:
        outer = set(out.outer_face())
        if h in outer or t in outer:
            raise ValueError("cannot subdivide a boundary edge")
    base = len(out.twin)
    # fresh half-edges: zv/vz, zw/wz, zx/xz
    zv, vz, zw, wz, zx, xz = range(base, base + 6)
    out.twin.extend([vz, zv, wz, zw, xz, zx])
    out.nxt.extend([0] * 6)
    # h becomes u -> z, t becomes z -> u
    # triangles: (h, zw, b), (zv, a, wz), (vz, zx, d), (t, c, xz)
    out.nxt[h] = zw
    out.nxt[zw] = b
    out.nxt[b] = h
    out.nxt[zv] = a
    out.nxt[a] = wz
    out.nxt[wz] = zv
    out.nxt[vz] = zx
    out.nxt[zx] = d
    out.nxt[d] = vz
    out.nxt[t] = c
    out.nxt[c] = xz
    out.nxt[xz] = t
    return out


# -- conversions ---------------------------------------------------------


def from_triangles(triangles: Sequence[tuple[int, int, int]],
                   allow_multi: bool = False) -> RootedMap:
    """Build a closed map from oriented triangles (consistent orientation:
    each directed edge appears exactly once)."""
    half: dict[tuple[int, int], int] = {}
    nxt: list[int] = []
    for (u, v, w) in triangles:
        base = len(nxt)
        for e in ((u, v), (v, w), (w, u)):
            if e in half:
                raise ValueError(f"directed edge {e} repeated")
            half[e] = len(half)
        nxt.extend([base + 1, base + 2, base])
    twin = [-1] * len(nxt)
    for (u, v), h in half.items():
        g = half.get((v, u))
        if g is None:
            raise ValueError(f"unmatched directed edge {(u, v)}")
        twin[h] = g
    return RootedMap(twin=twin, nxt=nxt, root=0, closed=True,
                     allow_multi=allow_multi)


def to_triangles(mp: RootedMap) -> list[tuple[int, int, int]]:
    """Oriented triangle list of a closed triangulation, with vertex ids
    given by orbit labels."""
    if not mp.closed:
        raise ValueError("expected a closed map")
    labels = _vertex_labels(mp)
    out = []
    for face in mp.faces():
        if len(face) != 3:
            raise ValueError("not a triangulation")
        out.append((labels[face[0]], labels[face[1]], labels[face[2]]))
    return out


def tetrahedron() -> RootedMap:
    return from_triangles([(0, 1, 2), (1, 0, 3), (2, 1, 3), (0, 2, 3)])


def octahedron() -> RootedMap:
    # vertices 0..5, poles 0 and 5, equator 1,2,3,4
    return from_triangles([
        (0, 1, 2), (0, 2, 3), (0, 3, 4), (0, 4, 1),
        (5, 2, 1), (5, 3, 2), (5, 4, 3), (5, 1, 4),
    ])
