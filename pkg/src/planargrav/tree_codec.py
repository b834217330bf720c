"""Bijection between rooted disk triangulations and typed planar trees.

A tree vertex of type t in {0, 1, 2} has t ordered children.  Reading
the generation history of a map gives its tree: leaves are edge maps,
type-1 vertices apply the one-triangle move to their child, type-2
vertices glue their (left, right) children -- the left child is the map
carrying the previous root edge.  Valid code trees satisfy, for every
subtree T_v,

    n0(T_v) - n1(T_v) >= 1,

which is the statement that every encoded map has boundary length
m = n0 - n1 + 1 >= 2 (a type-1 vertex needs a child with m >= 3).

Accounting per tree: N = n1 + n2, L = n0 + n1 + n2, V = n0 + 1.
The equilibrium weight of a tree is G(T) = r0**n0 r1**n1 r2**n2.

Trees are plain nested tuples ``(type, children)``; internally the
samplers work on preorder type sequences.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .enumeration import tutte_table
from .map_core import (RootedMap, new_edge_map, peel_root, tutte_move_1,
                       tutte_move_2)
from .rng import rng_for

__all__ = [
    "LEAF",
    "decode",
    "encode",
    "tree_counts",
    "tree_is_valid",
    "tree_weight",
    "tree_to_string",
    "tree_from_string",
    "tree_to_seq",
    "seq_to_tree",
    "all_valid_trees",
    "sample_tree",
    "TreeSampler",
    "degree_statistics",
    "decode_degrees",
    "urn_counts",
    "urn_brute_force",
    "urn_ratio_report",
    "catalan",
]

Tree = tuple  # (type, (children...))
LEAF: Tree = (0, ())


def tree_counts(tree: Tree) -> tuple[int, int, int]:
    """(n0, n1, n2) vertex-type counts."""
    n = [0, 0, 0]
    stack = [tree]
    while stack:
        t, kids = stack.pop()
        n[t] += 1
        stack.extend(kids)
    return (n[0], n[1], n[2])


def tree_is_valid(tree: Tree) -> bool:
    """Every subtree must satisfy n0 - n1 >= 1."""
    try:
        _check(tree)
        return True
    except ValueError:
        return False


def _check(tree: Tree) -> int:
    t, kids = tree
    if t == 0:
        return 1
    if t == 1:
        d = _check(kids[0]) - 1
    else:
        d = _check(kids[0]) + _check(kids[1])
    if d < 1:
        raise ValueError("subtree violates n0 - n1 >= 1")
    return d


def decode(tree: Tree) -> RootedMap:
    """Tree -> rooted map.  Raises on constraint violations."""
    t, kids = tree
    if t == 0:
        return new_edge_map()
    if t == 1:
        return tutte_move_1(decode(kids[0]))
    if t == 2:
        return tutte_move_2(decode(kids[0]), decode(kids[1]))
    raise ValueError(f"bad vertex type {t}")


def encode(mp: RootedMap) -> Tree:
    """Rooted map -> tree; exact inverse of ``decode``."""
    kind, parts = peel_root(mp)
    if kind == "edge":
        return LEAF
    if kind == "move1":
        return (1, (encode(parts[0]),))
    return (2, (encode(parts[0]), encode(parts[1])))


def tree_weight(tree: Tree, r0, r1, r2):
    n0, n1, n2 = tree_counts(tree)
    return r0 ** n0 * r1 ** n1 * r2 ** n2


def tree_to_string(tree: Tree) -> str:
    """Balanced-parenthesis serialization with type digits."""
    t, kids = tree
    if t == 0:
        return "0"
    return str(t) + "(" + "".join(tree_to_string(k) for k in kids) + ")"


def tree_from_string(s: str) -> Tree:
    tree, pos = _parse(s, 0)
    if pos != len(s):
        raise ValueError("trailing characters")
    return tree


def _parse(s: str, pos: int) -> tuple[Tree, int]:
    t = int(s[pos])
    pos += 1
    if t == 0:
        return (LEAF, pos)
    if s[pos] != "(":
        raise ValueError("expected '('")
    pos += 1
    kids = []
    for _ in range(t):
        kid, pos = _parse(s, pos)
        kids.append(kid)
    if s[pos] != ")":
        raise ValueError("expected ')'")
    return ((t, tuple(kids)), pos + 1)


def tree_to_seq(tree: Tree) -> list[int]:
    """Preorder type sequence (root first, children left to right)."""
    out: list[int] = []
    stack = [tree]
    while stack:
        t, kids = stack.pop()
        out.append(t)
        stack.extend(reversed(kids))
    return out


def seq_to_tree(seq: Sequence[int]) -> Tree:
    stack: list[Tree] = []
    for t in reversed(seq):
        if t == 0:
            stack.append(LEAF)
        elif t == 1:
            stack.append((1, (stack.pop(),)))
        else:
            a = stack.pop()
            b = stack.pop()
            stack.append((2, (a, b)))
    if len(stack) != 1:
        raise ValueError("sequence is not a single tree")
    return stack[0]


def all_valid_trees(max_vertices: int) -> dict[int, list[Tree]]:
    """All valid trees grouped by total vertex count <= max_vertices."""
    by_size: dict[int, list[Tree]] = {1: [LEAF]}
    for n in range(2, max_vertices + 1):
        out: list[Tree] = []
        for child in by_size[n - 1]:
            if _check(child) >= 2:
                out.append((1, (child,)))
        for i in range(1, n - 1):
            for left in by_size[i]:
                for right in by_size[n - 1 - i]:
                    out.append((2, (left, right)))
        by_size[n] = out
    return by_size


# -- sampling --------------------------------------------------------------


def sample_tree(r0: float, r1: float, r2: float, seed: int = 0,
                rng=None, max_attempts: int = 100_000) -> Tree:
    """Exact sample proportional to G(T) over valid trees.

    Requires probability-normalized weights (r0 + r1 + r2 = 1): then a
    branching process with offspring law (r0, r1, r2) realizes
    P(T) = G(T) on finite trees, and rejecting constraint violations is
    exactly conditioning on validity.
    """
    if abs(r0 + r1 + r2 - 1.0) > 1e-9:
        raise ValueError("weights must be probability-normalized")
    if r1 + 2 * r2 >= 1.0:
        raise ValueError("supercritical offspring law")
    if rng is None:
        rng = rng_for(seed)
    for _ in range(max_attempts):
        seq = _sample_seq(rng, r0, r1, r2)
        if seq is not None and _seq_valid(seq):
            return seq_to_tree(seq)
    raise RuntimeError("rejection cap exceeded")


def _sample_seq(rng, r0, r1, r2, cap: int = 1_000_000):
    seq = []
    open_slots = 1
    while open_slots:
        u = rng.random()
        t = 0 if u < r0 else (1 if u < r0 + r1 else 2)
        seq.append(t)
        open_slots += t - 1
        if len(seq) > cap:
            return None
    return seq


def _seq_valid(seq: Sequence[int]) -> bool:
    stack: list[int] = []
    for t in reversed(seq):
        if t == 0:
            stack.append(1)
        elif t == 1:
            d = stack.pop() - 1
            if d < 1:
                return False
            stack.append(d)
        else:
            stack.append(stack.pop() + stack.pop())
    return True


# -- degrees of decoded maps, without building the maps --------------------


def decode_degrees(seq: Sequence[int]) -> tuple[list[int], list[int]]:
    """Degrees of the decoded map, computed on the type sequence alone.

    Returns ``(degrees, leaf_vertices)``: ``degrees[v]`` for canonical
    vertex classes, and for each leaf (left to right) the class of the
    rooted (tail) vertex of its edge map -- the marked vertex w(v) at
    which degree statistics are read.  Only the boundary cycle is
    maintained, so this runs in near-linear time; validated against the
    full half-edge decode in the tests.
    """
    parent = list(range(0))
    deg: list[int] = []

    def fresh() -> int:
        parent.append(len(parent))
        deg.append(0)
        return len(parent) - 1

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    leaves_rev: list[int] = []
    stack: list[list[int]] = []  # boundary cycles, root edge B[0] -> B[1]
    for t in reversed(seq):
        if t == 0:
            a, b = fresh(), fresh()
            deg[a] = deg[b] = 1
            leaves_rev.append(a)
            stack.append([a, b])
        elif t == 1:
            B = stack.pop()
            if len(B) < 3:
                raise ValueError("one-triangle move on a 2-gon")
            x0, _, x2 = B[0], B[1], B[2]
            deg[find(x0)] += 1
            deg[find(x2)] += 1
            del B[1]
            stack.append(B)
        else:
            Ba = stack.pop()
            Bb = stack.pop()
            va, vb = find(Ba[1]), find(Bb[0])
            if va != vb:
                parent[va] = vb
                deg[vb] += deg[va]
            u, w = find(Ba[0]), find(Bb[1])
            deg[u] += 1
            deg[w] += 1
            stack.append([Ba[0], Bb[1]] + Bb[2:] + [Bb[0]] + Ba[2:])
    if len(stack) != 1:
        raise ValueError("sequence is not a single tree")
    classes = sorted({find(x) for x in range(len(parent))})
    degrees = [deg[c] for c in classes]
    index = {c: i for i, c in enumerate(classes)}
    leaf_vertices = [index[find(x)] for x in reversed(leaves_rev)]
    return degrees, leaf_vertices


@dataclass
class DegreeLawReport:
    p_hat: dict[int, float]
    p_hat_se: dict[int, float]
    total_mass: float
    tail_rate: float
    tail_rate_ci: tuple[float, float]
    covariances: dict[int, tuple[float, float]]  # distance -> (cov, se)
    n_trees: int
    n_vertices_measured: int


def degree_statistics(r0: float, r1: float, r2: float,
                      n_samples: int = 100_000, seed: int = 0,
                      distances: tuple[int, ...] = (4, 20),
                      min_leaves: int = 8,
                      bulk_fraction: float = 0.25,
                      batches: int = 20,
                      n_cap: int = 120) -> DegreeLawReport:
    """Equilibrium vertex-degree law under the weighted tree measure.

    Samples ``n_samples`` trees with ``TreeSampler`` (weights need not
    be probability-normalized, so near-critical ensembles with heavy
    size tails are reachable); measures degrees q_v at bulk leaf
    vertices (leaf index at least ``bulk_fraction`` of the leaf count
    away from both ends) and pair covariances at the requested
    leaf-index distances.  Standard errors by batch means.
    """
    sampler = TreeSampler(r0, r1, r2, seed=seed, n_cap=n_cap)
    counts: dict[int, int] = {}
    total_q = 0
    n_meas = 0
    n_trees = 0
    batch_of: list[dict[int, int]] = [dict() for _ in range(batches)]
    pair_acc = {d: [np.zeros(3) for _ in range(batches)] for d in distances}
    while n_trees < n_samples:
        seq = sampler.sample_seq()
        degrees, leaf_v = decode_degrees(seq)
        n_trees += 1
        b = n_trees % batches
        n0 = len(leaf_v)
        if n0 < min_leaves:
            continue
        lo = int(math.ceil(bulk_fraction * n0))
        hi = n0 - lo
        if hi <= lo:
            continue
        for i in range(lo, hi):
            q = degrees[leaf_v[i]]
            counts[q] = counts.get(q, 0) + 1
            batch_of[b][q] = batch_of[b].get(q, 0) + 1
            total_q += q
            n_meas += 1
        for d in distances:
            acc = pair_acc[d][b]
            for i in range(lo, hi - d):
                qi = degrees[leaf_v[i]]
                qj = degrees[leaf_v[i + d]]
                acc += (qi * qj, qi + qj, 2)
    if n_meas == 0:
        raise RuntimeError("no vertices measured; relax the selector")
    p_hat = {k: v / n_meas for k, v in sorted(counts.items())}
    p_se = {k: math.sqrt(p * (1 - p) / n_meas) for k, p in p_hat.items()}
    tail_rate, tail_ci = _geometric_tail(counts)
    covs = {}
    for d in distances:
        vals = []
        for b in range(batches):
            sxy, sx_sy, n2 = pair_acc[d][b]
            if n2 >= 2:
                npairs = n2 / 2
                mean = sx_sy / n2
                vals.append(sxy / npairs - mean * mean)
        if len(vals) >= 2:
            covs[d] = (float(np.mean(vals)),
                       float(np.std(vals, ddof=1) / math.sqrt(len(vals))))
        else:
            covs[d] = (float("nan"), float("nan"))
    return DegreeLawReport(p_hat=p_hat, p_hat_se=p_se,
                           total_mass=sum(p_hat.values()),
                           tail_rate=tail_rate, tail_rate_ci=tail_ci,
                           covariances=covs, n_trees=n_trees,
                           n_vertices_measured=n_meas)


def _geometric_tail(counts: dict[int, int],
                    k_min: int = 4) -> tuple[float, tuple[float, float]]:
    """MLE of the ratio of a geometric tail P(q = k) ~ C rho**k for
    k >= k_min, with a delta-method CI."""
    tail = {k: v for k, v in counts.items() if k >= k_min}
    n = sum(tail.values())
    if n < 10:
        return float("nan"), (float("nan"), float("nan"))
    mean_excess = sum((k - k_min) * v for k, v in tail.items()) / n
    rho = mean_excess / (1.0 + mean_excess)
    se = math.sqrt(mean_excess * (1 + mean_excess) / n) \
        / (1.0 + mean_excess) ** 2
    return rho, (rho - 1.96 * se, rho + 1.96 * se)


class TreeSampler:
    """Exact sampler for the measure proportional to G(T) over valid
    trees, for arbitrary positive weights with 27 r0 r1 r2 < 2.

    A tree with counts (n0, n1, n2) encodes a map with N = n1 + n2
    triangles and boundary length m = n0 - n1 + 1, and
    G(T) = (r1/r2) r1**N beta**((N+m)/2) with beta = r0 r2 / r1, so
    the measure is uniform given (N, m).  Sampling therefore draws
    (N, m) from the weighted count law and then unwinds the counting
    recurrence: the root is type 1 with probability
    C(N-1, m+1) / C(N, m), else type 2 with a split (N1, m1) chosen
    proportional to C(N1, m1) C(N-1-N1, m+1-m1).

    Trees are truncated at N <= n_cap (the discarded tail mass is
    reported by ``truncated_fraction``); weight ratios are evaluated
    in log space, exact up to float rounding.
    """

    def __init__(self, r0: float, r1: float, r2: float, seed: int = 0,
                 rng=None, n_cap: int = 120):
        if min(r0, r1, r2) <= 0:
            raise ValueError("weights must be positive")
        if 27.0 * r0 * r1 * r2 >= 2.0:
            raise ValueError("supercritical weights: need 27 r0 r1 r2 < 2")
        self.rng = rng if rng is not None else rng_for(seed)
        self.n_cap = n_cap
        table = tutte_table(n_cap, n_cap + 2)
        logc = np.full((n_cap + 1, n_cap + 3), -np.inf)
        for (N, m), c in table.counts.items():
            if c:
                logc[N, m] = math.log(c)
        self._logc = logc
        beta = r0 * r2 / r1
        Ns, ms = np.nonzero(np.isfinite(logc))
        logw = (math.log(r1 / r2) + Ns * math.log(r1)
                + (Ns + ms) / 2.0 * math.log(beta) + logc[Ns, ms])
        w = np.exp(logw - logw.max())
        # truncation diagnostic: weight fraction sitting in the last
        # few rows of the table; if the measure has not decayed by the
        # cap, samples are biased toward the cap and the weights should
        # be moved further from criticality (or n_cap raised)
        top = float(w[Ns >= n_cap - 5].sum() / w.sum())
        self.truncated_fraction = top
        if top > 0.05:
            raise ValueError(
                f"{top:.1%} of the sampling mass is within 5 rows of the "
                f"size cap {n_cap}; weights too close to criticality for "
                "this truncation")
        self._nm = np.stack([Ns, ms], axis=1)
        self._cum = np.cumsum(w / w.sum())
        self._splits: dict[tuple[int, int], tuple] = {}

    def _split_table(self, N: int, m: int):
        key = (N, m)
        hit = self._splits.get(key)
        if hit is not None:
            return hit
        logc = self._logc
        a = logc[0:N, 2:m]                      # left part (N1, m1)
        b = logc[N - 1::-1, m - 1:1:-1]         # right part, reversed
        lw = (a + b).ravel()
        top = lw.max() if lw.size else -np.inf
        if not np.isfinite(top):
            entry = None                        # no admissible split
        else:
            w = np.exp(lw - top)
            entry = (np.cumsum(w / w.sum()), m - 2)
        self._splits[key] = entry
        return entry

    def sample_nm(self) -> tuple[int, int]:
        i = int(np.searchsorted(self._cum, self.rng.random()))
        N, m = self._nm[min(i, len(self._nm) - 1)]
        return int(N), int(m)

    def sample_seq(self) -> list[int]:
        """One tree as a preorder type sequence."""
        out: list[int] = []
        stack = [self.sample_nm()]
        logc = self._logc
        while stack:
            N, m = stack.pop()
            if N == 0:
                out.append(0)
                continue
            p1 = math.exp(logc[N - 1, m + 1] - logc[N, m]) \
                if np.isfinite(logc[N - 1, m + 1]) else 0.0
            entry = self._split_table(N, m)
            if entry is None or self.rng.random() < p1:
                out.append(1)
                stack.append((N - 1, m + 1))
            else:
                out.append(2)
                cum, width = entry
                i = int(np.searchsorted(cum, self.rng.random()))
                i = min(i, len(cum) - 1)
                n1, m1 = i // width, i % width + 2
                stack.append((N - 1 - n1, m + 1 - m1))  # right, popped last
                stack.append((n1, m1))                  # left, popped first
        return out

    def sample(self) -> Tree:
        return seq_to_tree(self.sample_seq())


# -- urn model and Catalan counts ------------------------------------------


def urn_counts(n: int, m: int) -> int:
    """Admissible ball arrangements: c(n, m) counts nonnegative arrays
    (a_1, ..., a_n) with sum m and prefix sums bounded by position,
    sum_{i <= k} a_i <= k.

    Removing the last urn gives c(n, m) = sum_k c(n-1, m-k), hence the
    two-term recurrence c(n, m) = c(n, m-1) + c(n-1, m), with
    c(k, 1) = k and c(n, m) = 0 for m > n.  (A frequently reprinted
    variant has c(n-1, m-1) as the second term; it disagrees with the
    constraint already at c(2, 2) and is not used.)
    """
    if not 1 <= m <= n:
        raise ValueError("need 1 <= m <= n")
    # c[k] = c(k, mm) for the current ball count mm
    col = list(range(n + 1))  # c(k, 1) = k
    for mm in range(2, m + 1):
        new = [0] * (n + 1)
        for k in range(mm, n + 1):
            new[k] = col[k] + new[k - 1]
        col = new
    return col[n]


def urn_brute_force(n: int, m: int, variant: str = "abstract") -> int:
    """Direct enumeration of admissible nonnegative integer arrays
    (a_1, ..., a_n) with sum m and prefix constraint

        sum_{i <= k} a_i <= k            (variant="abstract")
        sum_{i <= k} a_i <= k - 2        (variant="tree")

    The two printed variants of the constraint are both provided; the
    default matches the recurrence (checked exhaustively in tests).
    """
    off = 0 if variant == "abstract" else 2
    total = 0
    stack = [(0, 0)]  # (index k, prefix sum)
    while stack:
        k, s = stack.pop()
        if k == n:
            total += (s == m)
            continue
        for a in range(0, m - s + 1):
            if s + a <= k + 1 - off:
                stack.append((k + 1, s + a))
    return total


def urn_ratio_report(n: int) -> list[tuple[int, float]]:
    """Measured ratios c(n, m) / c(n, m-1) for 2 <= m <= n."""
    return [(m, urn_counts(n, m) / urn_counts(n, m - 1))
            for m in range(2, n + 1)]


def catalan(n: int) -> int:
    """The n-th Catalan number binom(2n, n) / (n + 1)."""
    if n < 0:
        raise ValueError("n >= 0")
    return math.comb(2 * n, n) // (n + 1)
