"""Boundary-growth dynamics on disk triangulations.

A continuous-time chain: with rate lambda1 per boundary edge a new
triangle is attached over that edge (boundary length m -> m + 1, one
new vertex), and with rate lambda2 per boundary corner a triangle is
laid over two neighboring edges (m -> m - 1, the corner vertex leaves
the boundary).  At m = 3 only lambda1-events are possible, and a state
with m = 3 may be read as a sphere by closing the outer hole.

The boundary length m(t) is itself a Markov birth-death chain with
rates lambda1*m up and lambda2*m down, which gives exact oracles:
the product-form stationary law (subcritical case lambda2 > lambda1),
and the return-time law to m = 3 via iteration of the offspring
generating function f(s) = (lambda2 + lambda1 s^2)/(lambda1+lambda2).

Modes: "boundary-only" evolves the integer m alone; "degrees" also
tracks per-vertex degrees along the boundary (for the local law chi_k,
pair correlations, and curvature CLT); "full-map" maintains the actual
half-edge map, checking Euler bookkeeping and sphere closures.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .map_core import (RootedMap, close_boundary, gauss_bonnet_defect,
                       new_edge_map, tutte_move_1, tutte_move_2, validate)
from .rng import rng_for

__all__ = [
    "GrowthConfig",
    "TraceStats",
    "simulate_growth",
    "stationary_boundary_law",
    "occupation_distribution",
    "tv_distance",
    "return_time_distribution",
    "return_tail_ratio",
    "return_hazard_limit",
    "critical_return_slope",
    "curvature_statistics",
    "CurvatureReport",
    "clt_curvature",
    "attach_edge",
    "attach_corner",
    "delete_boundary_triangle",
    "deletable_boundary_edges",
    "reversible_variant_check",
    "initial_triangle",
]


@dataclass
class GrowthConfig:
    lambda1: float
    lambda2: float
    mu_del: float = 0.0
    seed: int = 0
    events: int = 10_000
    mode: str = "boundary-only"  # "boundary-only" | "degrees" | "full-map"
    replica: int = 0
    # degrees-mode measurement protocol
    panel_age: Optional[float] = None   # read a vertex at birth + this age
    pair_distances: tuple[int, ...] = ()
    # full-map mode
    close_and_reset: bool = True        # on return to m=3: close, then restart
    validate_every: int = 0             # structural check cadence (0 = off)

    def __post_init__(self) -> None:
        if self.lambda1 <= 0 or self.lambda2 <= 0:
            raise ValueError("rates must be positive")
        if self.events <= 0:
            raise ValueError("horizon must be positive")
        if self.mode not in ("boundary-only", "degrees", "full-map"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass
class TraceStats:
    seed: int
    n_events: int
    occupation_time: dict          # m -> total sojourn time
    occupation_events: dict        # m -> number of visits (jump chain)
    returns_to_3: int
    final_m: int
    total_time: float
    # full-map extras
    closure_defects: list = field(default_factory=list)
    final_counters: Optional[tuple] = None  # (N, m, V, L)
    euler_violations: int = 0
    # degrees extras
    panel_degrees: Optional[dict] = None    # k -> count at read age
    pair_tallies: Optional[dict] = None     # d -> (sum qi*qj, sum qi, sum qj, n)
    curvature_series: Optional[list] = None  # read-order degree list


def initial_triangle() -> RootedMap:
    """The one-triangle disk (N = 1, m = 3)."""
    return tutte_move_2(new_edge_map(), new_edge_map())


# -- exact oracles ---------------------------------------------------------


def stationary_boundary_law(lambda1: float, lambda2: float,
                            k_max: int) -> np.ndarray:
    """pi(m = k) on k = 3 .. k_max for the subcritical chain.

    pi(k) is proportional to prod_{i=3}^{k-1} lambda1 i / prod_{i=4}^{k}
    lambda2 i, so pi(k+1)/pi(k) = (lambda1/lambda2) * k/(k+1); the tail
    is ~ C k^{-1} (lambda1/lambda2)^k.
    """
    if lambda2 <= lambda1:
        raise ValueError("stationary law requires lambda2 > lambda1")
    w = np.empty(k_max - 2)
    w[0] = 1.0
    for k in range(3, k_max):
        w[k - 2] = w[k - 3] * (lambda1 / lambda2) * k / (k + 1)
    return w / w.sum()


def occupation_distribution(stats: TraceStats) -> dict:
    """Time-weighted empirical law of m from a trace."""
    tot = sum(stats.occupation_time.values())
    return {k: v / tot for k, v in sorted(stats.occupation_time.items())}


def tv_distance(p: dict, q_vec: np.ndarray, q_offset: int = 3) -> float:
    """Total variation between a dict law and a vector law on k >= 3."""
    keys = set(p) | {q_offset + i for i in range(len(q_vec))}
    s = 0.0
    for k in keys:
        qk = q_vec[k - q_offset] if 0 <= k - q_offset < len(q_vec) else 0.0
        s += abs(p.get(k, 0.0) - qk)
    return 0.5 * s


def return_time_distribution(lambda1: float, lambda2: float,
                             n_max: int) -> np.ndarray:
    """P(first return of the jump chain to m = 3 takes n generations).

    Exact iteration of f(s) = (lambda2 + lambda1 s^2)/(lambda1+lambda2):
    P(n = N) = f_N(0) - f_{N-1}(0), the classical extinction-time law of
    the embedded binary branching process.  Tail ~ C m^N with
    m = (lambda2 - lambda1)/(lambda1 + lambda2) off criticality and
    ~ C/N^2 at lambda1 = lambda2.

    Iterated through the survival probability u_N = 1 - f_N(0), which
    satisfies u_N = (lambda1/(lambda1+lambda2)) u_{N-1} (2 - u_{N-1});
    the direct f-iteration loses the tail to float cancellation.
    """
    c = lambda1 / (lambda1 + lambda2)
    out = np.empty(n_max)
    u = 1.0
    for n in range(n_max):
        nu = c * u * (2.0 - u)
        out[n] = u - nu
        u = nu
    return out


def return_tail_ratio(lambda1: float, lambda2: float,
                      n_max: int = 200) -> float:
    """Limiting ratio P(n = N+1)/P(n = N) of the return-time law;
    equals the mean offspring number 2 lambda1/(lambda1 + lambda2)."""
    p = return_time_distribution(lambda1, lambda2, n_max)
    return float(p[-1] / p[-2])


def return_hazard_limit(lambda1: float, lambda2: float,
                        n_max: int = 200) -> float:
    """Limiting conditional return probability P(n = N | n >= N).

    Exact f-iteration: the survival probabilities satisfy
    u_N / u_{N-1} -> 2 lambda1/(lambda1+lambda2), so the hazard
    1 - u_N/u_{N-1} converges to (lambda2 - lambda1)/(lambda1+lambda2)
    -- the constant usually quoted for the return-time tail.
    """
    c = lambda1 / (lambda1 + lambda2)
    u = 1.0
    for _ in range(n_max):
        u_prev, u = u, c * u * (2.0 - u)
        hazard = 1.0 - u / u_prev
    return float(hazard)


def critical_return_slope(lam: float = 1.0, n_lo: int = 10,
                          n_hi: int = 1000) -> float:
    """Log-log slope of P(n = N) over [n_lo, n_hi] at lambda1 = lambda2."""
    p = return_time_distribution(lam, lam, n_hi)
    ns = np.arange(n_lo, n_hi + 1)
    x = np.log(ns)
    y = np.log(p[n_lo - 1:])
    A = np.stack([np.ones_like(x), x], axis=1)
    coef, *_ = np.linalg.lstsq(A, y, rcond=None)
    return float(coef[1])


# -- simulation ------------------------------------------------------------


def simulate_growth(cfg: GrowthConfig) -> TraceStats:
    rng = rng_for(cfg.seed, cfg.replica)
    if cfg.mode == "boundary-only":
        return _run_boundary_only(cfg, rng)
    if cfg.mode == "degrees":
        return _run_degrees(cfg, rng)
    return _run_full_map(cfg, rng)


def _run_boundary_only(cfg: GrowthConfig, rng) -> TraceStats:
    l1, l2 = cfg.lambda1, cfg.lambda2
    m = 3
    t = 0.0
    occ_t: dict = {}
    occ_n: dict = {}
    returns = 0
    # draw exponentials in blocks; the chain itself is just an integer
    for _ in range(cfg.events):
        up_rate = l1 * m
        down_rate = l2 * m if m > 3 else 0.0
        total = up_rate + down_rate
        dt = rng.exponential(1.0 / total)
        occ_t[m] = occ_t.get(m, 0.0) + dt
        occ_n[m] = occ_n.get(m, 0) + 1
        t += dt
        if rng.random() * total < up_rate:
            m += 1
        else:
            m -= 1
            if m == 3:
                returns += 1
    return TraceStats(seed=cfg.seed, n_events=cfg.events,
                      occupation_time=occ_t, occupation_events=occ_n,
                      returns_to_3=returns, final_m=m, total_time=t)


class _Boundary:
    """Cyclic boundary with per-vertex degrees.

    Uniform position sampling is O(1) via an order list with
    swap-removal; neighbors via dicts.
    """

    __slots__ = ("nxt", "prv", "deg", "order", "pos", "n_vertices")

    def __init__(self) -> None:
        # initial triangle: vertices 0, 1, 2, all of degree 2
        self.nxt = {0: 1, 1: 2, 2: 0}
        self.prv = {0: 2, 1: 0, 2: 1}
        self.deg = [2, 2, 2]
        self.order = [0, 1, 2]
        self.pos = {0: 0, 1: 1, 2: 2}
        self.n_vertices = 3

    @property
    def m(self) -> int:
        return len(self.order)

    def random_vertex(self, rng) -> int:
        return self.order[int(rng.random() * len(self.order))]

    def attach_edge_at(self, u: int) -> int:
        """New triangle over edge (u, nxt[u]); returns the new vertex."""
        v = self.nxt[u]
        x = self.n_vertices
        self.n_vertices += 1
        self.deg.append(2)
        self.deg[u] += 1
        self.deg[v] += 1
        self.nxt[u] = x
        self.nxt[x] = v
        self.prv[v] = x
        self.prv[x] = u
        self.pos[x] = len(self.order)
        self.order.append(x)
        return x

    def attach_corner_at(self, v: int) -> int:
        """New triangle over the corner (prv[v], v, nxt[v]); v leaves the
        boundary with its degree frozen.  Returns v."""
        u = self.prv[v]
        w = self.nxt[v]
        self.deg[u] += 1
        self.deg[w] += 1
        self.nxt[u] = w
        self.prv[w] = u
        del self.nxt[v], self.prv[v]
        i = self.pos.pop(v)
        last = self.order.pop()
        if last != v:
            self.order[i] = last
            self.pos[last] = i
        return v

    def distance_along(self, v: int, d: int) -> int:
        g = v
        for _ in range(d):
            g = self.prv[g]
        return g


def _run_degrees(cfg: GrowthConfig, rng) -> TraceStats:
    l1, l2 = cfg.lambda1, cfg.lambda2
    bd = _Boundary()
    t = 0.0
    occ_t: dict = {}
    occ_n: dict = {}
    returns = 0
    panel_counts: dict = {}
    pair_tallies = {d: [0.0, 0.0, 0.0, 0] for d in cfg.pair_distances}
    series: list = []
    pending: deque = deque()   # (read_time, vertex) in birth order
    pending_pairs: deque = deque()  # (read_time, vi, vj, d)
    lo_ev = int(0.1 * cfg.events)
    hi_ev = int(0.9 * cfg.events)
    age = cfg.panel_age
    for ev in range(cfg.events):
        m = bd.m
        up_rate = l1 * m
        down_rate = l2 * m if m > 3 else 0.0
        total = up_rate + down_rate
        dt = rng.exponential(1.0 / total)
        occ_t[m] = occ_t.get(m, 0.0) + dt
        occ_n[m] = occ_n.get(m, 0) + 1
        t += dt
        # degrees are frozen between events, so a read scheduled before
        # `t` sees the current value as long as we flush before updating
        while pending and pending[0][0] <= t:
            _, v = pending.popleft()
            k = bd.deg[v]
            panel_counts[k] = panel_counts.get(k, 0) + 1
            series.append(k)
        while pending_pairs and pending_pairs[0][0] <= t:
            _, vi, vj, d = pending_pairs.popleft()
            qi, qj = bd.deg[vi], bd.deg[vj]
            acc = pair_tallies[d]
            acc[0] += qi * qj
            acc[1] += qi
            acc[2] += qj
            acc[3] += 1
        if rng.random() * total < up_rate:
            u = bd.random_vertex(rng)
            x = bd.attach_edge_at(u)
            if age is not None and lo_ev <= ev < hi_ev:
                pending.append((t + age, x))
                for d in cfg.pair_distances:
                    if d < m:
                        vi = bd.distance_along(x, d)
                        pending_pairs.append((t + age, vi, x, d))
        else:
            v = bd.random_vertex(rng)
            bd.attach_corner_at(v)
            if bd.m == 3:
                returns += 1
    # Reads still pending at the horizon are dropped.  The cut depends
    # only on the birth time (read = birth + age), never on the vertex's
    # fate, so the censoring cannot bias the recorded degree law.
    return TraceStats(seed=cfg.seed, n_events=cfg.events,
                      occupation_time=occ_t, occupation_events=occ_n,
                      returns_to_3=returns, final_m=bd.m, total_time=t,
                      panel_degrees=panel_counts or None,
                      pair_tallies={d: tuple(v)
                                    for d, v in pair_tallies.items()} or None,
                      curvature_series=series or None)


def _run_full_map(cfg: GrowthConfig, rng) -> TraceStats:
    l1, l2 = cfg.lambda1, cfg.lambda2
    mp = initial_triangle()
    t = 0.0
    occ_t: dict = {}
    occ_n: dict = {}
    returns = 0
    defects: list = []
    euler_bad = 0
    for ev in range(cfg.events):
        boundary = mp.outer_face()
        m = len(boundary)
        up_rate = l1 * m
        down_rate = l2 * m if m > 3 else 0.0
        total = up_rate + down_rate
        dt = rng.exponential(1.0 / total)
        occ_t[m] = occ_t.get(m, 0.0) + dt
        occ_n[m] = occ_n.get(m, 0) + 1
        t += dt
        if rng.random() * total < up_rate:
            h = boundary[int(rng.random() * m)]
            mp = attach_edge(mp, h)
        else:
            h = boundary[int(rng.random() * m)]
            mp = attach_corner(mp, h)
            if mp.m == 3:
                returns += 1
                defects.append(gauss_bonnet_defect(close_boundary(mp)))
                if cfg.close_and_reset:
                    mp = initial_triangle()
        if cfg.validate_every and (ev + 1) % cfg.validate_every == 0:
            validate(mp)
            # disk Euler bookkeeping V - L + F = 2, i.e. V - L_int + N = 1 + m
            N, m_now, V, L = mp.N, mp.m, mp.V, mp.L
            if V - (L - m_now) + N != 1 + m_now:
                euler_bad += 1
    return TraceStats(seed=cfg.seed, n_events=cfg.events,
                      occupation_time=occ_t, occupation_events=occ_n,
                      returns_to_3=returns, final_m=mp.m, total_time=t,
                      closure_defects=defects,
                      final_counters=mp.counters(),
                      euler_violations=euler_bad)


# -- map surgery for the growth and deletion moves -------------------------


def attach_edge(mp: RootedMap, h: int) -> RootedMap:
    """Attach a new triangle over the boundary edge carried by the outer
    half-edge ``h``: (V, L, F, m) -> (V+1, L+2, F+1, m+1)."""
    out = mp.copy()
    boundary = out.outer_face()
    if h not in boundary:
        raise ValueError("h is not an outer half-edge")
    p = boundary[boundary.index(h) - 1]
    s = out.nxt[h]
    a = len(out.twin)       # v -> x
    b = a + 1               # x -> v (outer)
    c = a + 2               # x -> u
    d = a + 3               # u -> x (outer)
    out.twin.extend([b, a, d, c])
    out.nxt.extend([0, 0, 0, 0])
    # new inner triangle h -> a -> c, outer detour p -> d -> b -> s
    out.nxt[h] = a
    out.nxt[a] = c
    out.nxt[c] = h
    out.nxt[p if p != h else c] = d
    out.nxt[d] = b
    out.nxt[b] = s if s != h else d
    if out.root == h:
        out.root = d
    return out


def attach_corner(mp: RootedMap, h: int) -> RootedMap:
    """Attach a triangle over the boundary corner at ``h`` and its outer
    successor (m -> m - 1); the shared vertex leaves the boundary."""
    out = mp.copy()
    if h not in out.outer_face():
        raise ValueError("h is not an outer half-edge")
    out.root = h
    return tutte_move_1(out)


def deletable_boundary_edges(mp: RootedMap) -> list[int]:
    """Outer half-edges whose inner triangle may be deleted keeping the
    complex a disk triangulation (no pinch points), one per triangle."""
    out = []
    seen = set()
    for h in mp.outer_face():
        tri = mp.face_of(mp.twin[h])
        key = min(tri)
        if key in seen:
            continue
        seen.add(key)
        if _classify_deletion(mp, h) is not None:
            out.append(h)
    return out


def _classify_deletion(mp: RootedMap, h: int):
    """None if the triangle behind outer half-edge ``h`` is not
    deletable; otherwise ("corner"|"edge", data)."""
    t = mp.twin[h]
    tri = mp.face_of(t)
    if len(tri) != 3:
        return None
    outer = set(mp.outer_face())
    on_boundary = [g for g in tri if mp.twin[g] in outer]
    if len(on_boundary) == 3:
        return None  # the whole disk is this one triangle
    if len(on_boundary) == 2:
        # inverse of attach_edge: the vertex between the two boundary
        # sides must have degree 2 (no other incident edges)
        g1, g2 = on_boundary
        if mp.nxt[g1] == g2:
            apex_h = g2
        elif mp.nxt[g2] == g1:
            apex_h = g1
        else:
            return None  # the two boundary sides are not consecutive
        if len(mp.vertex_of(apex_h)) != 2:
            return None
        return ("edge", on_boundary)
    if len(on_boundary) == 1:
        # inverse of attach_corner: the opposite vertex returns to the
        # boundary, so it must not already be there (pinch point)
        g = on_boundary[0]
        opp = mp.nxt[mp.nxt[g]]  # half-edge out of the opposite vertex
        for e in mp.vertex_of(opp):
            if e in outer:
                return None
        return ("corner", g)
    return None


def delete_boundary_triangle(mp: RootedMap, h: int) -> RootedMap:
    """Remove the inner triangle behind the outer half-edge ``h``.

    Exact inverse of ``attach_edge`` / ``attach_corner``; raises if the
    deletion would leave the class of disk triangulations.
    """
    kind = _classify_deletion(mp, h)
    if kind is None:
        raise ValueError("triangle is not deletable")
    out = mp.copy()
    boundary = out.outer_face()
    if kind[0] == "edge":
        g1, g2 = kind[1]
        # consecutive boundary sides g1 -> g2 around the triangle (fix order)
        if out.nxt[g2] == g1:
            g1, g2 = g2, g1
        base = out.nxt[g2]          # the side that stays, inner side
        o1, o2 = out.twin[g1], out.twin[g2]   # outer halves to remove
        p = boundary[boundary.index(o2) - 1]
        s = out.nxt[o1]
        out.nxt[p if p != o1 else base] = base
        out.nxt[base] = s if s != o2 else base
        new_root = out.root
        if new_root in (g1, g2, o1, o2):
            new_root = base
        out.root = new_root
        return _drop(out, (g1, g2, o1, o2))
    g = kind[1]
    o = out.twin[g]                 # the outer half-edge covering the base
    e1 = out.nxt[g]                 # the two capped sides return to the
    e2 = out.nxt[e1]                # outer face (nxt[e1] == e2 already)
    p = boundary[boundary.index(o) - 1]
    s = out.nxt[o]
    out.nxt[p if p != o else e2] = e1
    out.nxt[e2] = s if s != o else e1
    if out.root in (g, o):
        out.root = e1
    return _drop(out, (g, o))


def _drop(mp: RootedMap, dead) -> RootedMap:
    keep = [h for h in range(len(mp.twin)) if h not in set(dead)]
    relabel = {h: i for i, h in enumerate(keep)}
    return RootedMap(twin=[relabel[mp.twin[h]] for h in keep],
                     nxt=[relabel[mp.nxt[h]] for h in keep],
                     root=relabel[mp.root], closed=mp.closed,
                     allow_multi=mp.allow_multi)


# -- local curvature statistics ---------------------------------------------


@dataclass
class CurvatureReport:
    chi: dict                      # k -> estimate
    chi_se: dict
    total_mass: float
    tail_rate: float
    tail_rate_ci: tuple
    pair_deviation: dict           # d -> (|cov|, se)
    mean_curvature: float          # k_hat = sum 2 pi (6-q)/q chi_q, in pi units
    n_read: int
    seed: int


def curvature_statistics(cfg: GrowthConfig,
                         batches: int = 20) -> CurvatureReport:
    """Estimate the limiting vertex-degree law chi_k and pair decay.

    Protocol: each vertex enters the panel at its creation and its
    degree is read at age ``cfg.panel_age``; vertices born in the first
    or last 10% of events are excluded.  Pair tallies are collected for
    vertices at the configured boundary distances at birth time; the
    reported deviation is the absolute covariance of the two degree
    reads.
    """
    age = cfg.panel_age if cfg.panel_age is not None else 1.0 / cfg.lambda2
    base = cfg.seed
    chi_counts: dict = {}
    per_batch: list[dict] = []
    pair_batches = {d: [] for d in cfg.pair_distances}
    for b in range(batches):
        sub = GrowthConfig(cfg.lambda1, cfg.lambda2, seed=base,
                           events=cfg.events // batches, mode="degrees",
                           replica=cfg.replica * batches + b,
                           panel_age=age,
                           pair_distances=cfg.pair_distances)
        st = simulate_growth(sub)
        counts = st.panel_degrees or {}
        per_batch.append(counts)
        for k, c in counts.items():
            chi_counts[k] = chi_counts.get(k, 0) + c
        for d, (sxy, sx, sy, n) in (st.pair_tallies or {}).items():
            if n > 1:
                pair_batches[d].append(sxy / n - (sx / n) * (sy / n))
    n_read = sum(chi_counts.values())
    if n_read == 0:
        raise RuntimeError("no panel reads; increase events or lower age")
    chi = {k: c / n_read for k, c in sorted(chi_counts.items())}
    chi_se = {k: math.sqrt(p * (1 - p) / n_read) for k, p in chi.items()}
    rate, ci = _geometric_tail_fit(chi_counts, k_min=4)
    pair_dev = {}
    for d, vals in pair_batches.items():
        if len(vals) >= 2:
            pair_dev[d] = (abs(float(np.mean(vals))),
                           float(np.std(vals, ddof=1) / math.sqrt(len(vals))))
        else:
            pair_dev[d] = (float("nan"), float("nan"))
    k_hat = sum(2.0 * (6 - q) / q * p for q, p in chi.items())
    return CurvatureReport(chi=chi, chi_se=chi_se,
                           total_mass=sum(chi.values()),
                           tail_rate=rate, tail_rate_ci=ci,
                           pair_deviation=pair_dev, mean_curvature=k_hat,
                           n_read=n_read, seed=cfg.seed)


def _geometric_tail_fit(counts: dict, k_min: int = 4):
    tail = {k: v for k, v in counts.items() if k >= k_min}
    n = sum(tail.values())
    if n < 10:
        return float("nan"), (float("nan"), float("nan"))
    mean_excess = sum((k - k_min) * v for k, v in tail.items()) / n
    rho = mean_excess / (1.0 + mean_excess)
    se = math.sqrt(mean_excess * (1 + mean_excess) / n) \
        / (1.0 + mean_excess) ** 2
    return rho, (rho - 1.96 * se, rho + 1.96 * se)


def clt_curvature(cfg: GrowthConfig, region_sizes=(32, 128, 512),
                  max_regions: int = 2000) -> dict:
    """Normality of the centered, scaled curvature sum over regions of
    consecutively created vertices.

    One long trajectory is split into disjoint regions per size; the
    statistic (sum_I R_i - k_hat |I|)/sqrt(|I|) (curvature in pi units)
    is tested against its best-fit Gaussian by Kolmogorov-Smirnov.
    """
    from scipy import stats as sps
    age = cfg.panel_age if cfg.panel_age is not None else 1.0 / cfg.lambda2
    st = simulate_growth(GrowthConfig(
        cfg.lambda1, cfg.lambda2, seed=cfg.seed, events=cfg.events,
        mode="degrees", replica=cfg.replica, panel_age=age))
    series = np.array(st.curvature_series or [], dtype=float)
    if series.size < 4 * max(region_sizes):
        raise RuntimeError("trajectory too short for the region sizes")
    R = 2.0 * (6.0 - series) / series
    k_hat = float(R.mean())
    out = {"k_hat": k_hat, "n_vertices": int(series.size),
           "seed": cfg.seed, "regions": {}}
    for size in region_sizes:
        n_reg = min(series.size // size, max_regions)
        blocks = R[: n_reg * size].reshape(n_reg, size)
        stat = (blocks.sum(axis=1) - k_hat * size) / math.sqrt(size)
        mu, sd = float(stat.mean()), float(stat.std(ddof=1))
        ks = sps.kstest(stat, "norm", args=(mu, sd)).statistic
        out["regions"][size] = {"ks": float(ks), "variance": sd * sd,
                                "n_regions": int(n_reg)}
    return out


# -- reversible variant ------------------------------------------------------


def reversible_variant_check(lam: float, mu: float,
                             n_max: int = 8) -> dict:
    """State-graph analysis of the growth chain with deletions.

    Builds the transition graph over *all* disk triangulations with at
    most ``n_max`` triangles and boundary length >= 3 (enumerated
    through the tree bijection and keyed by canonical unrooted code).
    Additions run at rate ``lam`` per boundary position; each deletable
    boundary triangle is removed at rate ``mu``, where deletable means
    the result is again a disk triangulation of the same class (no
    pinch at a single vertex, boundary stays >= 3).

    Checks reported: every addition has an inverse deletion and vice
    versa; the Kolmogorov criterion (forward and backward rate products
    agree) on every 4-cycle of the transition graph, with rates
    weighted by transition multiplicity; exhaustive search for stuck
    states where no triangle can be deleted.
    """
    from .map_core import unrooted_canonical_code
    from .tree_codec import all_valid_trees, decode
    states: dict = {}
    for _, trees in all_valid_trees(2 * n_max + 1).items():
        for tr in trees:
            mp = decode(tr)
            if mp.N == 0 or mp.N > n_max or mp.m < 3:
                continue
            states.setdefault(unrooted_canonical_code(mp), mp)
    # multiplicity-weighted addition rates from every state
    add_mult: dict = {}   # (from_code, to_code) -> number of positions
    for c_from, mp in states.items():
        if mp.N >= n_max:
            continue
        boundary = mp.outer_face()
        nbrs = [attach_edge(mp, h) for h in boundary]
        if len(boundary) > 3:
            nbrs += [attach_corner(mp, h) for h in boundary]
        for nb in nbrs:
            key = (c_from, unrooted_canonical_code(nb))
            add_mult[key] = add_mult.get(key, 0) + 1
    code0 = unrooted_canonical_code(initial_triangle())
    reachable = {code0}
    frontier = [code0]
    succ: dict = {}
    for a, b in add_mult:
        succ.setdefault(a, []).append(b)
    while frontier:
        c = frontier.pop()
        for b in succ.get(c, ()):
            if b not in reachable:
                reachable.add(b)
                frontier.append(b)
    # deletion rates and stuck states, over the full state set
    del_mult: dict = {}
    non_deletable = []
    for code, mp in states.items():
        dels = []
        for h in mp.outer_face():
            cl = _classify_deletion(mp, h)
            if cl is None:
                continue
            if cl[0] == "edge" and mp.m == 3:
                continue   # result would be a digon, outside the class
            dels.append(h)
        if not dels and mp.N > 1:
            non_deletable.append(code)
        for h in dels:
            sub = delete_boundary_triangle(mp, h)
            key = (code, unrooted_canonical_code(sub))
            del_mult[key] = del_mult.get(key, 0) + 1
    interior = {c for c, mp in states.items() if mp.N < n_max}
    unpaired_adds = [(a, b) for (a, b) in add_mult
                     if (b, a) not in del_mult]
    spurious_dels = [(a, b) for (a, b) in del_mult
                     if b in interior and a in interior
                     and (b, a) not in add_mult]
    # Kolmogorov criterion on every 4-cycle a -> b -> c -> d -> a
    rate: dict = {k: lam * v for k, v in add_mult.items()}
    for k, v in del_mult.items():
        rate[k] = rate.get(k, 0.0) + mu * v
    out_nbrs: dict = {}
    for a, b in rate:
        out_nbrs.setdefault(a, set()).add(b)
    n_cycles = 0
    bad_cycles = 0
    codes = sorted(out_nbrs)
    index = {c: i for i, c in enumerate(codes)}
    for a in codes:
        for c in codes:
            if index[c] <= index[a]:
                continue
            common = [b for b in out_nbrs[a]
                      if b in out_nbrs and c in out_nbrs[b]
                      and b in out_nbrs.get(c, ())
                      and a in out_nbrs[b]]
            for i, b in enumerate(common):
                for d in common[i + 1:]:
                    n_cycles += 1
                    fwd = rate[(a, b)] * rate[(b, c)] \
                        * rate[(c, d)] * rate[(d, a)]
                    bwd = rate[(a, d)] * rate[(d, c)] \
                        * rate[(c, b)] * rate[(b, a)]
                    if not math.isclose(fwd, bwd, rel_tol=1e-9):
                        bad_cycles += 1
    return {
        "n_states": len(states),
        "n_reachable": len(reachable),
        "n_unreachable": len(states) - len(reachable),
        "n_add_edges": len(add_mult),
        "n_del_edges": len(del_mult),
        "unpaired_additions": len(unpaired_adds),
        "spurious_deletions": len(spurious_dels),
        "non_deletable_states": len(non_deletable),
        "non_deletable_found": bool(non_deletable),
        "stuck_states_unreachable": all(c not in reachable
                                        for c in non_deletable),
        "four_cycles_checked": n_cycles,
        "four_cycles_bad": bad_cycles,
        "kolmogorov_cycles_ok": len(unpaired_adds) == 0
        and len(spurious_dels) == 0 and bad_cycles == 0,
        "rates": (lam, mu),
    }
