"""Quadratic quasi-process on measures over the (N, m) quarter-lattice.

One step maps a nonnegative measure q to

    q' = r1 * L q  +  r2 * (q * q) K  +  (1 - r1 - r2) * delta_(0,2)

where L shifts (N, m) -> (N+1, m-1) (the one-triangle move, only
defined for m >= 3: the r1-portion of mass sitting at m = 2 has no
legal move and is annihilated, which is exactly the boundary
subtraction -x/y S of the functional equation), and K glues ordered
pairs, (N1, m1) + (N2, m2) -> (N1+N2+1, m1+m2-1).

The fixed point reproduces the weighted counts: with
beta = (1 - r1 - r2) r2 / r1,

    q*(N, m) = (r1 / r2) * r1**N * beta**((N+m)/2) * C(N, m).

Iterates from the zero measure increase monotonically, and entries at
(N, m) depend only on strictly smaller N, so a truncated grid is exact
below its N cap.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import convolve2d

from .enumeration import tutte_table

__all__ = [
    "MeasureGrid",
    "ProcessParams",
    "step",
    "fixed_point",
    "canonical_prediction",
    "contraction_estimate",
    "criticality_scan",
    "per_column_finite_predictor",
    "total_mass_finite_predictor",
]


@dataclass
class ProcessParams:
    r1: float
    r2: float

    def __post_init__(self) -> None:
        if self.r1 < 0 or self.r2 < 0 or self.r1 + self.r2 > 1:
            raise ValueError("need r1, r2 >= 0 and r1 + r2 <= 1")

    @property
    def r0(self) -> float:
        return 1.0 - self.r1 - self.r2

    @property
    def beta(self) -> float:
        """Immigration-to-rates ratio of the canonical equation."""
        if self.r1 == 0:
            raise ZeroDivisionError("beta undefined at r1 = 0")
        return self.r0 * self.r2 / self.r1


@dataclass
class MeasureGrid:
    """values[N, k] is the mass at (N, m = k + 2)."""

    n_max: int
    m_max: int
    values: np.ndarray = field(default=None)  # type: ignore[assignment]
    truncated_mass: float = 0.0

    def __post_init__(self) -> None:
        if self.values is None:
            self.values = np.zeros((self.n_max + 1, self.m_max - 1))
        assert self.values.shape == (self.n_max + 1, self.m_max - 1)

    def get(self, N: int, m: int) -> float:
        return float(self.values[N, m - 2])

    def total(self) -> float:
        return float(self.values.sum())


def step(q: MeasureGrid, p: ProcessParams) -> MeasureGrid:
    v = q.values
    out = np.zeros_like(v)
    lost = 0.0
    # linear kernel: (N, m) -> (N+1, m-1) on the m >= 3 part
    out[1:, :-1] += p.r1 * v[:-1, 1:]
    lost += p.r1 * float(v[:, 0].sum())          # no move from m = 2
    lost += p.r1 * float(v[-1, 1:].sum())        # fell off the N cap
    # quadratic kernel: self-convolution shifted to (N1+N2+1, m1+m2-1)
    if p.r2 and v.any():
        conv = convolve2d(v, v)
        nn, mm = out.shape
        placed = conv[: nn - 1, : mm - 1]
        out[1:, 1:] += p.r2 * placed
        lost += p.r2 * (float(conv.sum()) - float(placed.sum()))
        # column m1+m2-1 = 2 cannot occur (m1, m2 >= 2 gives m >= 3),
        # and conv[:, 0] lands at k = 1, so out[:, 0] is untouched: good
    out[0, 0] += p.r0
    return MeasureGrid(q.n_max, q.m_max, out,
                       truncated_mass=q.truncated_mass + lost)


def fixed_point(p: ProcessParams, tol: float = 1e-12,
                n_max: int = 40, m_max: int = 40,
                max_iter: int = 100_000) -> MeasureGrid:
    """Iterate from the zero measure until the sup-norm change < tol.

    Monotone convergence (all kernel weights are nonnegative); failure
    to converge within the cap is reported with growth diagnostics,
    which signals a supercritical parameter pair.
    """
    q = MeasureGrid(n_max, m_max)
    last_total = 0.0
    for it in range(max_iter):
        nxt = step(q, p)
        delta = float(np.max(np.abs(nxt.values - q.values)))
        nxt.truncated_mass = 0.0  # only the stationary loss matters
        q = nxt
        if delta < tol:
            q.truncated_mass = step(q, p).truncated_mass
            return q
        last_total = q.total()
    raise RuntimeError(
        f"no convergence in {max_iter} iterations; total mass {last_total:.3g}"
        " is still moving (supercritical?)")


def canonical_prediction(p: ProcessParams, n_max: int, m_max: int
                         ) -> np.ndarray:
    """(r1/r2) r1**N beta**((N+m)/2) C(N, m) on the grid."""
    table = tutte_table(n_max, m_max)
    beta = p.beta
    out = np.zeros((n_max + 1, m_max - 1))
    for (N, m), c in table.counts.items():
        if m <= m_max:
            out[N, m - 2] = (p.r1 / p.r2) * p.r1 ** N \
                * beta ** ((N + m) // 2) * c
    return out


def contraction_estimate(p: ProcessParams, trials: int = 1000,
                         seed: int = 0, n_max: int = 12,
                         m_max: int = 12) -> dict:
    """Empirical L1 contraction factor of one step over random pairs of
    probability measures; theoretical bound r1 + 2 r2 (both kernels are
    deterministic maps, k1 = k2 = 1)."""
    from .rng import rng_for
    rng = rng_for(seed)
    bound = p.r1 + 2.0 * p.r2
    worst = 0.0
    for _ in range(trials):
        a = _random_measure(rng, n_max, m_max)
        b = _random_measure(rng, n_max, m_max)
        d0 = float(np.abs(a.values - b.values).sum())
        if d0 == 0.0:
            continue
        d1 = float(np.abs(step(a, p).values - step(b, p).values).sum())
        worst = max(worst, d1 / d0)
    return {"measured_factor": worst, "bound": bound,
            "within_bound": worst <= bound + 1e-12, "trials": trials}


def _random_measure(rng, n_max: int, m_max: int) -> MeasureGrid:
    shape = (n_max + 1, m_max - 1)
    mask = rng.random(shape) < 0.3
    v = rng.random(shape) * mask
    s = v.sum()
    if s == 0.0:
        v[0, 0] = 1.0
        s = 1.0
    return MeasureGrid(n_max, m_max, v / s)


def per_column_finite_predictor(r1: float, r2: float) -> bool:
    """Finiteness of every column sum_N q*(N, m): the canonical series
    has x-radius x1(beta), and the scaling puts the evaluation point at
    x = r1, so the condition is r1 <= x1(beta), i.e.

        27 r1 r2 (1 - r1 - r2) <= 2.

    (Attained maximum over the parameter simplex is 1, so every
    admissible pair is per-column finite; the scan verifies this.)
    """
    return 27.0 * r1 * r2 * (1.0 - r1 - r2) <= 2.0


def total_mass_finite_predictor(r1: float, r2: float) -> bool:
    """Total-mass finiteness: the y-radius of the double expansion at
    x = r1 must exceed 1 (the canonical y variable is summed at 1)."""
    from .gf_algebraic import y_radius
    p = ProcessParams(r1, r2)
    try:
        return y_radius(p.beta, r1) > 1.0
    except ValueError:
        return False


def criticality_scan(r1_values, r2_values, n_max: int = 60,
                     m_max: int = 16, ratio_cut: float = 0.999) -> dict:
    """Empirical vs predicted per-column finiteness over a grid.

    Empirical classification: tail ratio of the fixed point along N in
    the m = 3 column; a limiting step ratio < 1 certifies a convergent
    column (the N -> N+2 ratio approaches (r1/x1)**2).
    """
    agree = True
    points = []
    for r1 in r1_values:
        for r2 in r2_values:
            if r1 + r2 >= 1.0 or r1 <= 0 or r2 <= 0:
                continue
            predicted = per_column_finite_predictor(r1, r2)
            p = ProcessParams(r1, r2)
            q = fixed_point(p, tol=1e-13, n_max=n_max, m_max=m_max)
            col = q.values[:, 1]  # m = 3 column: odd N support
            tail = [col[N] for N in range(1, n_max + 1, 2) if col[N] > 0]
            if len(tail) >= 4:
                ratio = (tail[-1] / tail[-3]) ** 0.5
            else:
                ratio = 0.0
            empirical = ratio < ratio_cut
            agree &= (empirical == predicted)
            points.append({"r1": r1, "r2": r2, "predicted": predicted,
                           "empirical": empirical, "tail_ratio": ratio,
                           "total_finite_pred":
                               total_mass_finite_predictor(r1, r2)})
    return {"agree": agree, "points": points}
