"""Bulk dynamics on closed sphere triangulations.

Two families of local moves:

* edge flips (the degree-preserving move): V, L, F are all invariant,
  and with a symmetric flip rate the chain on each irreducible
  component is reversible with respect to the uniform measure;

* vertex insertion / removal: a vertex ``i`` fires at rate ``lam`` and
  subdivides a uniformly chosen edge of the link of ``i`` (its degree
  grows by one, a fresh degree-4 vertex is born on the link), and at
  rate ``mu`` it removes a uniformly chosen admissible degree-4 vertex
  from its link by merging along the diagonal away from ``i`` (the
  exact inverse of the insertion).

The degree q_i(t) of a tracked vertex then performs a random walk
whose drift has the sign of lam - mu: for lam < mu the vertex dies
almost surely, for lam > mu its degree escapes to infinity with
positive probability.  In the flip-only regime the degree process
converges, as the triangulation grows, to the birth-death walk on
[3, infinity) with rates lam*i in both directions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .map_core import RootedMap, gv_move, unrooted_canonical_code, validate
from .map_core import octahedron, tetrahedron
from .rng import rng_for

__all__ = [
    "InternalConfig",
    "InternalTrace",
    "Triangulation",
    "simulate_internal",
    "drift_experiment",
    "exact_walk_transient",
    "limiting_walk_compare",
    "component_reversibility",
    "sphere_triangulation_counts",
]


@dataclass
class InternalConfig:
    lam: float
    mu: float
    seed: int = 0
    replica: int = 0
    simplicial: bool = True       # forbid loops and multiple edges
    t_max: float = 1000.0
    q_threshold: int = 100        # tracked degree counts as escaped here
    max_events: int = 400_000
    max_vertices: int = 150_000
    track_after: int = 0          # tracked vertex = first born after this

    def __post_init__(self) -> None:
        if self.lam < 0 or self.mu < 0 or self.lam + self.mu == 0:
            raise ValueError("need nonnegative rates, not both zero")


@dataclass
class InternalTrace:
    outcome: str          # "died" | "exceeded" | "survived" | "censored"
    birth_time: float
    end_time: float
    final_q: int
    max_q: int
    n_events: int
    final_vertices: int
    increments: tuple     # (#up, #down) jumps of the tracked degree
    seed: int
    replica: int


# -- in-place half-edge triangulation ---------------------------------------


class Triangulation:
    """Mutable closed triangulation with O(1)-amortized local moves.

    Half-edges are paired by index (twin of h is h ^ 1); ``nxt`` walks
    each triangle, ``org`` is the origin vertex.  Vertex degrees, one
    representative out-half-edge per vertex and an alive-vertex list
    with positions (for O(1) uniform sampling) are maintained through
    every move; adjacency queries walk the smaller of the two stars, so
    simpliciality checks stay O(mean degree) without an edge table.
    """

    __slots__ = ("nxt", "org", "deg", "rep", "order", "pos",
                 "free_pairs", "free_verts", "L", "simplicial")

    def __init__(self, mp: RootedMap, simplicial: bool = True):
        n = len(mp.twin)
        # relabel half-edges so that twins sit at (2k, 2k+1)
        label = [-1] * n
        k = 0
        for h in range(n):
            if label[h] < 0:
                label[h] = 2 * k
                label[mp.twin[h]] = 2 * k + 1
                k += 1
        self.nxt = [0] * n
        self.org = [0] * n
        for h in range(n):
            self.nxt[label[h]] = label[mp.nxt[h]]
        # vertices = orbits of h -> nxt[twin[h]]
        seen = [False] * n
        self.deg = []
        self.rep = []
        for h in range(n):
            if seen[h]:
                continue
            v = len(self.deg)
            d = 0
            g = h
            while not seen[g]:
                seen[g] = True
                self.org[label[g]] = v
                d += 1
                g = mp.nxt[mp.twin[g]]
            self.deg.append(d)
            self.rep.append(label[h])
        self.order = list(range(len(self.deg)))
        self.pos = list(range(len(self.deg)))
        self.free_pairs: list = []
        self.free_verts: list = []
        self.L = n // 2
        self.simplicial = simplicial

    @property
    def V(self) -> int:
        return len(self.order)

    @property
    def F(self) -> int:
        return 2 + self.L - self.V

    def copy(self) -> "Triangulation":
        new = object.__new__(Triangulation)
        new.nxt = self.nxt.copy()
        new.org = self.org.copy()
        new.deg = self.deg.copy()
        new.rep = self.rep.copy()
        new.order = self.order.copy()
        new.pos = self.pos.copy()
        new.free_pairs = self.free_pairs.copy()
        new.free_verts = self.free_verts.copy()
        new.L = self.L
        new.simplicial = self.simplicial
        return new

    # rotation: next out-half-edge around the origin of h
    def sigma(self, h: int) -> int:
        return self.nxt[self.nxt[h]] ^ 1

    def out_edge(self, v: int, k: int) -> int:
        """The k-th out-half-edge of v, rotating from its representative."""
        g = self.rep[v]
        for _ in range(k):
            g = self.sigma(g)
        return g

    def random_vertex(self, rng) -> int:
        return self.order[int(rng.random() * len(self.order))]

    def _new_pair(self) -> int:
        if self.free_pairs:
            return self.free_pairs.pop()
        h = len(self.nxt)
        self.nxt.extend((0, 0))
        self.org.extend((0, 0))
        return h

    def _new_vertex(self) -> int:
        if self.free_verts:
            v = self.free_verts.pop()
            self.deg[v] = 0
        else:
            v = len(self.deg)
            self.deg.append(0)
            self.rep.append(0)
            self.pos.append(0)
        self.pos[v] = len(self.order)
        self.order.append(v)
        return v

    def _kill_vertex(self, v: int) -> None:
        i = self.pos[v]
        last = self.order.pop()
        if last != v:
            self.order[i] = last
            self.pos[last] = i
        self.free_verts.append(v)

    def has_edge(self, u: int, w: int) -> bool:
        """Adjacency by walking the smaller of the two stars."""
        if self.deg[w] < self.deg[u]:
            u, w = w, u
        nxt, org = self.nxt, self.org
        g = self.rep[u]
        for _ in range(self.deg[u]):
            if org[g ^ 1] == w:
                return True
            g = nxt[nxt[g]] ^ 1
        return False

    # -- moves ------------------------------------------------------------

    def subdivide(self, h: int) -> int:
        """Split the edge carried by h with a fresh degree-4 vertex.

        V+1, L+3, F+2; the two apex degrees grow by one.  Always legal.
        """
        nxt, org = self.nxt, self.org
        t = h ^ 1
        u, w = org[h], org[t]
        e1 = nxt[h]            # w -> j
        f1 = nxt[e1]           # j -> u
        e2 = nxt[t]            # u -> y
        f2 = nxt[e2]           # y -> w
        j, y = org[f1], org[f2]
        z = self._new_vertex()
        zw = self._new_pair(); wz = zw ^ 1
        zj = self._new_pair(); jz = zj ^ 1
        zy = self._new_pair(); yz = zy ^ 1
        # triangles: (u z j), (z w j), (w z y), (z u y)
        nxt[h], nxt[zj], nxt[f1] = zj, f1, h
        nxt[zw], nxt[e1], nxt[jz] = e1, jz, zw
        nxt[wz], nxt[zy], nxt[f2] = zy, f2, wz
        nxt[t], nxt[e2], nxt[yz] = e2, yz, t
        org[t] = z
        org[zw], org[wz] = z, w
        org[zj], org[jz] = z, j
        org[zy], org[yz] = z, y
        self.deg[z] = 4
        self.deg[j] += 1
        self.deg[y] += 1
        self.rep[z] = t
        self.rep[u] = h
        self.rep[w] = wz
        self.rep[j] = jz
        self.rep[y] = yz
        self.L += 3
        return z

    def merge_ok(self, g: int) -> bool:
        """Can the degree-4 origin of g be removed by merging along the
        diagonal that avoids the head of g?"""
        z = self.org[g]
        if self.deg[z] != 4:
            return False
        g1 = self.sigma(g)
        g3 = self.sigma(self.sigma(g1))
        u, w = self.org[g1 ^ 1], self.org[g3 ^ 1]
        if u == w:
            return False
        if self.simplicial and self.has_edge(u, w):
            return False
        return True

    def merge(self, g: int) -> None:
        """Remove the degree-4 vertex z = org(g), restoring the edge
        between the two link neighbors away from head(g).  Exact inverse
        of subdivide; call merge_ok first."""
        nxt, org = self.nxt, self.org
        z = org[g]
        g1 = self.sigma(g)
        g2 = self.sigma(g1)
        g3 = self.sigma(g2)
        j = org[g ^ 1]
        u, y, w = org[g1 ^ 1], org[g2 ^ 1], org[g3 ^ 1]
        e0, e1, e2, e3 = nxt[g], nxt[g1], nxt[g2], nxt[g3]
        huw, hwu = g1 ^ 1, g1
        # triangles: (u w j), (w u y)
        nxt[huw], nxt[e3], nxt[e0] = e3, e0, huw
        nxt[hwu], nxt[e1], nxt[e2] = e1, e2, hwu
        org[hwu] = w
        self.deg[j] -= 1
        self.deg[y] -= 1
        self.rep[u] = huw
        self.rep[w] = hwu
        self.rep[j] = e0
        self.rep[y] = e2
        self.free_pairs.append(min(g, g ^ 1))
        self.free_pairs.append(min(g2, g2 ^ 1))
        self.free_pairs.append(min(g3, g3 ^ 1))
        self._kill_vertex(z)
        self.L -= 3

    def flip_ok(self, h: int) -> bool:
        nxt, org = self.nxt, self.org
        t = h ^ 1
        u, w = org[h], org[t]
        j = org[nxt[nxt[h]]]
        y = org[nxt[nxt[t]]]
        if j == y or self.deg[u] <= 3 or self.deg[w] <= 3:
            return False
        if self.simplicial and self.has_edge(j, y):
            # a duplicated face is impossible here: both new triangles
            # contain the new edge (j, y), which did not exist before
            return False
        return True

    def flip(self, h: int) -> None:
        """Replace the edge carried by h with the opposite diagonal of
        the two adjacent triangles.  V, L, F invariant."""
        nxt, org = self.nxt, self.org
        t = h ^ 1
        u, w = org[h], org[t]
        a = nxt[h]          # w -> j
        b = nxt[a]          # j -> u
        c = nxt[t]          # u -> y
        d = nxt[c]          # y -> w
        j, y = org[b], org[d]
        # new triangles: (u y j) via (c, h, b) and (w j y) via (a, t, d)
        nxt[c], nxt[h], nxt[b] = h, b, c
        nxt[a], nxt[t], nxt[d] = t, d, a
        org[h], org[t] = y, j
        self.deg[u] -= 1
        self.deg[w] -= 1
        self.deg[j] += 1
        self.deg[y] += 1
        self.rep[u] = c
        self.rep[w] = a
        self.rep[j] = t
        self.rep[y] = h

    # -- exports ----------------------------------------------------------

    def to_rooted(self) -> RootedMap:
        """Compact copy as an immutable closed rooted map."""
        alive = []
        dead = set()
        for p in self.free_pairs:
            dead.add(p)
            dead.add(p ^ 1)
        for h in range(len(self.nxt)):
            if h not in dead:
                alive.append(h)
        label = {h: i for i, h in enumerate(alive)}
        twin = [label[h ^ 1] for h in alive]
        nxt = [label[self.nxt[h]] for h in alive]
        return RootedMap(twin=twin, nxt=nxt, root=0, closed=True,
                         allow_multi=not self.simplicial)

    def curvature_defect(self) -> int:
        return sum(6 - self.deg[v] for v in self.order)

    def check(self) -> None:
        """Structural self-test (slow; for tests and debugging)."""
        assert self.curvature_defect() == 12
        assert self.L == sum(self.deg[v] for v in self.order) // 2
        for v in self.order:
            g = self.rep[v]
            assert self.org[g] == v
            for _ in range(self.deg[v]):
                assert self.org[g] == v
                g = self.sigma(g)
            assert g == self.rep[v]
        validate(self.to_rooted())


# -- vertex insertion / removal dynamics -------------------------------------


def _insertion_event(tri: Triangulation, v: int, rng) -> int:
    """A-move produced by v: subdivide a uniform link edge; returns the
    new vertex."""
    g = tri.out_edge(v, int(rng.random() * tri.deg[v]))
    return tri.subdivide(tri.nxt[g])


def _removal_event(tri: Triangulation, v: int, rng) -> Optional[int]:
    """Inverse move produced by v: remove a uniformly chosen admissible
    degree-4 link vertex (merging away from v); returns the removed
    vertex or None if no candidate exists."""
    cands = []
    g = tri.rep[v]
    for _ in range(tri.deg[v]):
        gz = g ^ 1   # out-edge of the link vertex, pointing back to v
        z = tri.org[gz]
        if tri.deg[z] == 4 and tri.merge_ok(gz):
            cands.append(gz)
        g = tri.sigma(g)
    if not cands:
        return None
    gz = cands[int(rng.random() * len(cands))]
    z = tri.org[gz]
    tri.merge(gz)
    return z


def simulate_internal(cfg: InternalConfig) -> InternalTrace:
    """One run of the insertion/removal dynamics, following one tracked
    vertex from its birth until it dies, its degree crosses the
    threshold, the horizon is reached, or a resource cap fires."""
    rng = rng_for(cfg.seed, cfg.replica)
    tri = Triangulation(octahedron(), simplicial=cfg.simplicial)
    lam, mu = cfg.lam, cfg.mu
    t = 0.0
    tracked = -1
    birth = 0.0
    max_q = 0
    ups = downs = 0
    outcome = "censored"
    ev = 0
    while ev < cfg.max_events:
        ev += 1
        total = (lam + mu) * tri.V
        t += rng.exponential(1.0 / total)
        if t > cfg.t_max:
            t = cfg.t_max
            outcome = "survived" if tracked >= 0 else "censored"
            break
        v = tri.random_vertex(rng)
        q_before = tri.deg[tracked] if tracked >= 0 else 0
        if rng.random() * (lam + mu) < lam:
            z = _insertion_event(tri, v, rng)
            if tracked < 0 and ev > cfg.track_after:
                tracked = z
                birth = t
                max_q = 4
                continue
        else:
            z = _removal_event(tri, v, rng)
            if z is not None and z == tracked:
                # the four incident edges vanish with the vertex; without
                # this term the pooled increment is survivorship-biased
                # (completed lives net to zero, long censored runs win)
                downs += q_before
                outcome = "died"
                break
        if tracked >= 0:
            q = tri.deg[tracked]
            if q > q_before:
                ups += 1
            elif q < q_before:
                downs += 1
            if q > max_q:
                max_q = q
            if q > cfg.q_threshold:
                outcome = "exceeded"
                break
        if tri.V >= cfg.max_vertices:
            break
    final_q = tri.deg[tracked] if tracked >= 0 and outcome != "died" else 0
    return InternalTrace(outcome=outcome, birth_time=birth, end_time=t,
                         final_q=final_q, max_q=max_q, n_events=ev,
                         final_vertices=tri.V, increments=(ups, downs),
                         seed=cfg.seed, replica=cfg.replica)


def drift_experiment(cfg: InternalConfig, n_runs: int) -> dict:
    """Aggregate outcome frequencies over independent replicas."""
    counts = {"died": 0, "exceeded": 0, "survived": 0, "censored": 0}
    nets, steps = [], []
    for r in range(n_runs):
        tr = simulate_internal(InternalConfig(
            cfg.lam, cfg.mu, seed=cfg.seed, replica=cfg.replica * n_runs + r,
            simplicial=cfg.simplicial, t_max=cfg.t_max,
            q_threshold=cfg.q_threshold, max_events=cfg.max_events,
            max_vertices=cfg.max_vertices, track_after=cfg.track_after))
        counts[tr.outcome] += 1
        nets.append(tr.increments[0] - tr.increments[1])
        steps.append(sum(tr.increments))
    nets = np.asarray(nets, dtype=float)
    steps = np.asarray(steps, dtype=float)
    n_inc = steps.sum()
    mean_inc = float(nets.sum() / n_inc) if n_inc else 0.0
    # bootstrap over runs (the independent units) for a CI on the drift
    boot_rng = rng_for(cfg.seed, stream=9)
    idx = boot_rng.integers(0, n_runs, size=(400, n_runs))
    ratios = nets[idx].sum(axis=1) / np.maximum(steps[idx].sum(axis=1), 1.0)
    lo, hi = np.quantile(ratios, [0.025, 0.975])
    return {
        "n_runs": n_runs,
        "counts": counts,
        "died_fraction": counts["died"] / n_runs,
        "exceeded_fraction": counts["exceeded"] / n_runs,
        "mean_increment": mean_inc,
        "mean_increment_ci": (float(lo), float(hi)),
        "rates": (cfg.lam, cfg.mu),
        "seed": cfg.seed,
    }


# -- flip-only regime and the limiting degree walk ---------------------------


def exact_walk_transient(q0: int, lam: float, t: float,
                         k_max: int = 80) -> np.ndarray:
    """Law at time t of the birth-death walk on {3, ..., k_max} with
    rates lam*i in both directions (down blocked at 3), started at q0."""
    from scipy.linalg import expm
    n = k_max - 2
    Q = np.zeros((n, n))
    for i in range(n):
        k = i + 3
        if i + 1 < n:
            Q[i, i + 1] = lam * k
        if k > 3:
            Q[i, i - 1] = lam * k
        Q[i, i] = -Q[i].sum()
    p0 = np.zeros(n)
    p0[q0 - 3] = 1.0
    return p0 @ expm(Q * t)


def _random_sphere(n_faces: int, rng, warmup_flips: int = 0) -> Triangulation:
    """A simplicial sphere with n_faces triangles: repeated subdivision
    of random edges from the octahedron, then optional flip warmup."""
    if n_faces < 8 or n_faces % 2:
        raise ValueError("need an even face count >= 8")
    tri = Triangulation(octahedron(), simplicial=True)
    while tri.F < n_faces:
        h = 2 * int(rng.random() * tri.L)
        while min(h, h ^ 1) in tri.free_pairs:
            h = 2 * int(rng.random() * tri.L)
        tri.subdivide(h)
    done = 0
    while done < warmup_flips:
        h = int(rng.random() * len(tri.nxt))
        if tri.flip_ok(h):
            tri.flip(h)
        done += 1
    return tri


def _random_half_edge(tri: Triangulation, rng) -> int:
    dead = set(tri.free_pairs)
    while True:
        h = int(rng.random() * len(tri.nxt))
        if min(h, h ^ 1) not in dead:
            return h


def limiting_walk_compare(N_list=(32, 128, 512), t_small: float = 0.25,
                          lam: float = 1.0, q0: int = 6,
                          replicas: int = 4000, bases: int = 80,
                          seed: int = 0, n_boot: int = 200) -> dict:
    """Flip-only dynamics vs the limiting birth-death walk.

    For each triangulation size, sample q_v(t_small) of a tracked
    degree-q0 vertex under edge flips at rate lam per edge, and report
    the total-variation distance to the exact walk transient with a
    bootstrap confidence interval.  The distance decreases with size.
    """
    exact = exact_walk_transient(q0, lam, t_small)
    out = {"t": t_small, "q0": q0, "sizes": {}, "seed": seed}
    for n_idx, n_faces in enumerate(N_list):
        samples = []
        per_base = replicas // bases
        for b in range(bases):
            rng = rng_for(seed, replica=n_idx * bases + b)
            base = _random_sphere(n_faces, rng,
                                  warmup_flips=10 * (3 * n_faces // 2))
            cand = [v for v in base.order if base.deg[v] == q0]
            if not cand:
                continue
            track = cand[int(rng.random() * len(cand))]
            for _ in range(per_base):
                tri = base.copy()
                t = 0.0
                while True:
                    # attempts at total rate lam * L over 2L half-edges:
                    # each undirected edge is proposed at rate lam
                    t += rng.exponential(1.0 / (lam * tri.L))
                    if t >= t_small:
                        break
                    h = _random_half_edge(tri, rng)
                    if tri.flip_ok(h):
                        tri.flip(h)
                samples.append(tri.deg[track])
        samples = np.array(samples)
        hist = np.bincount(samples, minlength=len(exact) + 3)[3:len(exact) + 3]
        emp = hist / hist.sum()
        tv = 0.5 * float(np.abs(emp - exact).sum())
        # bootstrap CI over multinomial resamples
        boot_rng = rng_for(seed, replica=10_000 + n_idx)
        draws = boot_rng.multinomial(len(samples), emp, size=n_boot)
        tvs = 0.5 * np.abs(draws / len(samples) - exact).sum(axis=1)
        lo, hi = np.quantile(tvs, [0.025, 0.975])
        out["sizes"][n_faces] = {"tv": tv, "ci": (float(lo), float(hi)),
                                 "n_samples": int(len(samples)),
                                 "mean_q": float(samples.mean())}
    tvs = [out["sizes"][n]["tv"] for n in N_list if n in out["sizes"]]
    out["tv_decreasing"] = all(a >= b for a, b in zip(tvs, tvs[1:]))
    return out


# -- flip components and reversibility ---------------------------------------

# combinatorially distinct sphere triangulations by vertex count
sphere_triangulation_counts = {4: 1, 5: 1, 6: 2, 7: 5, 8: 14, 9: 50}


def mirror_map(mp: RootedMap) -> RootedMap:
    """The same triangulation with the opposite orientation: every
    vertex rotation is inverted."""
    n = len(mp.twin)
    sigma_inv = [0] * n
    for h in range(n):
        sigma_inv[mp.nxt[mp.twin[h]]] = h
    nxt_m = [sigma_inv[mp.twin[g]] for g in range(n)]
    return RootedMap(twin=list(mp.twin), nxt=nxt_m, root=mp.root,
                     closed=mp.closed, allow_multi=mp.allow_multi)


def _reflection_code(mp: RootedMap):
    """Canonical code invariant under combinatorial isomorphism
    including reflections (abstract complexes carry no orientation)."""
    return min(unrooted_canonical_code(mp),
               unrooted_canonical_code(mirror_map(mp)))


def _flip_neighbors(mp: RootedMap):
    seen = set()
    for h in range(len(mp.twin)):
        if mp.twin[h] in seen:
            continue
        seen.add(h)
        try:
            yield gv_move(mp, h)
        except ValueError:
            continue


def component_reversibility(N: int, L: Optional[int] = None) -> dict:
    """BFS of the flip move graph at fixed size over canonical codes.

    N is the triangle count; for a sphere V = N/2 + 2 and L = 3N/2.
    Verifies: flips preserve (V, L, N); the neighbor relation is
    symmetric (each move has its inverse, so the uniform law is
    reversible -- checked exactly with rational balance); and, on the
    simplicial class, the component covers all triangulations with
    that vertex count.
    """
    if N < 4 or N % 2:
        raise ValueError("a sphere has an even number >= 4 of triangles")
    V = N // 2 + 2
    if L is not None and L != 3 * N // 2:
        raise ValueError("inconsistent edge count: L must be 3N/2")
    rng = rng_for(0)
    tri = Triangulation(tetrahedron(), simplicial=True)
    while tri.V < V:
        tri.subdivide(_random_half_edge(tri, rng))
    start = tri.to_rooted()
    states = {_reflection_code(start): start}
    adj: dict = {}
    frontier = [_reflection_code(start)]
    while frontier:
        code = frontier.pop()
        mp = states[code]
        nbrs = set()
        for nb in _flip_neighbors(mp):
            c = _reflection_code(nb)
            if c == code:
                continue
            nbrs.add(c)
            if c not in states:
                states[c] = nb
                frontier.append(c)
        adj[code] = nbrs
    symmetric = all(a in adj[b] for a, nbrs in adj.items() for b in nbrs)
    sizes_ok = all(m.V == V and m.L == 3 * N // 2 and m.F == N
                   for m in states.values())
    # exact stationarity of the uniform law: with unit rate per distinct
    # neighbor, net rational flow into each state is zero
    from fractions import Fraction
    pi = Fraction(1, len(states))
    balanced = all(
        sum((pi for b in adj if a in adj[b]), Fraction(0))
        == pi * len(adj[a])
        for a in adj)
    expected = sphere_triangulation_counts.get(V)
    return {
        "n_triangles": N,
        "n_vertices": V,
        "component_size": len(states),
        "expected_total": expected,
        "single_component": expected == len(states) if expected else None,
        "adjacency_symmetric": symmetric,
        "uniform_balanced": balanced,
        "sizes_invariant": sizes_ok,
    }
