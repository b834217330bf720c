"""Exact counting of rooted disk triangulations.

``tutte_table`` fills C(N, m) from the recurrence

    C(N, m) = C(N-1, m+1)
              + sum_{N1+N2 = N-1, m1+m2 = m+1} C(N1, m1) C(N2, m2)

with C(0, 2) = 1 and C(0, m) = 0 for m > 2.  The recurrence is stated
for m >= 3; at m = 2 the convolution is empty and the linear term gives
C(N, 2) = C(N-1, 3), which we adopt as the m = 2 extension (validated
against brute force).

``brute_force_counts`` is the independent oracle: exhaustive generation
by the two moves with canonical-code deduplication.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, asdict
from fractions import Fraction
from typing import Sequence

import numpy as np

from .map_core import (RootedMap, canonical_code, new_edge_map,
                       tutte_move_1, tutte_move_2)

__all__ = [
    "CountTable",
    "AsymptoticFit",
    "tutte_table",
    "closed_form_rooted",
    "brute_force_counts",
    "generate_all_maps",
    "fit_growth",
    "unrooted_estimate",
    "table_to_csv",
    "fit_to_json",
]

#: guard against accidentally huge tables
MAX_TABLE_CELLS = 2_000_000


@dataclass
class CountTable:
    """Exact counts C(N, m) for 0 <= N <= n_max, 2 <= m <= m_max."""

    n_max: int
    m_max: int
    counts: dict[tuple[int, int], int] = field(default_factory=dict)

    def __getitem__(self, key: tuple[int, int]) -> int:
        return self.counts.get(key, 0)

    def column(self, m: int) -> list[int]:
        return [self[(N, m)] for N in range(self.n_max + 1)]

    def row_sum(self, N: int) -> int:
        return sum(v for (n, _), v in self.counts.items() if n == N)


@dataclass
class AsymptoticFit:
    """Fitted parameters of C(N) ~ c1 * N**alpha * c**N."""

    growth_constant: float
    exponent: float
    stderr_growth: float
    stderr_exponent: float
    window: tuple[int, int]
    residual_rms: float


def tutte_table(n_max: int, m_max: int) -> CountTable:
    """Exact arbitrary-precision table of C(N, m)."""
    if n_max < 0 or m_max < 2:
        raise ValueError("need n_max >= 0 and m_max >= 2")
    # any disk triangulation with N inner faces has m <= N + 2, so an
    # internal width of n_max + 2 makes every requested column exact
    m_hi = max(m_max, n_max + 2)
    if (n_max + 1) * (m_hi + 1) > MAX_TABLE_CELLS:
        raise ResourceWarning("table cell cap exceeded")
    C: dict[tuple[int, int], int] = {(0, 2): 1}

    def get(N: int, m: int) -> int:
        return C.get((N, m), 0)

    for N in range(1, n_max + 1):
        for m in range(2, m_hi + 1):
            if (N - m) % 2:
                continue
            total = get(N - 1, m + 1)
            for m1 in range(2, m - 1 + 1):
                m2 = m + 1 - m1
                for N1 in range(N):
                    a = get(N1, m1)
                    if a:
                        b = get(N - 1 - N1, m2)
                        if b:
                            total += a * b
            if total:
                C[(N, m)] = total
    counts = {(N, m): v for (N, m), v in C.items() if m <= m_max}
    return CountTable(n_max=n_max, m_max=m_max, counts=counts)


def closed_form_rooted(m: int, j: int) -> int:
    """Closed-form count of rooted disk triangulations at N = m + 2j.

    C0(N, m) = 2**(j+2) (2m+3j-1)! (2m-3)! / ((j+1)! (2m+2j)! ((m-2)!)**2)
    """
    if m < 2 or j < 0:
        raise ValueError("need m >= 2 and j >= 0")
    num = 2 ** (j + 2) * math.factorial(2 * m + 3 * j - 1) \
        * math.factorial(2 * m - 3)
    den = math.factorial(j + 1) * math.factorial(2 * m + 2 * j) \
        * math.factorial(m - 2) ** 2
    q, r = divmod(num, den)
    if r:
        raise ArithmeticError("closed form did not divide exactly")
    return q


def generate_all_maps(n_max: int) -> dict[int, dict[bytes, RootedMap]]:
    """All rooted disk triangulations with N <= n_max, by exhaustive
    application of the two moves, keyed by canonical code.

    Raises if any map is produced twice: the moves are a bijection onto
    (predecessor, move) pairs, so a duplicate signals a broken move
    convention.
    """
    if n_max > 10:
        raise ResourceWarning("exhaustive generation capped at n_max = 10")
    levels: dict[int, dict[bytes, RootedMap]] = {
        0: {canonical_code(new_edge_map()): new_edge_map()}
    }
    for N in range(1, n_max + 1):
        level: dict[bytes, RootedMap] = {}
        for mp in levels[N - 1].values():
            if mp.m >= 3:
                child = tutte_move_1(mp)
                code = canonical_code(child)
                if code in level:
                    raise AssertionError("duplicate from move 1")
                level[code] = child
        for N1 in range(N):
            N2 = N - 1 - N1
            for a in levels[N1].values():
                for b in levels[N2].values():
                    child = tutte_move_2(a, b)
                    code = canonical_code(child)
                    if code in level:
                        raise AssertionError("duplicate from move 2")
                    level[code] = child
        levels[N] = level
    return levels


def brute_force_counts(n_max: int) -> CountTable:
    """Counts by exhaustive generation; the oracle for ``tutte_table``."""
    levels = generate_all_maps(n_max)
    counts: dict[tuple[int, int], int] = {}
    m_max = 2
    for N, level in levels.items():
        for mp in level.values():
            m = mp.m
            m_max = max(m_max, m)
            counts[(N, m)] = counts.get((N, m), 0) + 1
    return CountTable(n_max=n_max, m_max=m_max, counts=counts)


def _log(value) -> float:
    if isinstance(value, Fraction):
        return _log_int(value.numerator) - _log_int(value.denominator)
    if isinstance(value, int):
        return _log_int(value)
    return math.log(value)


def _log_int(n: int) -> float:
    return math.log(n)


def fit_growth(sequence: Sequence, min_terms: int = 50,
               window_fraction: float = 0.5) -> AsymptoticFit:
    """Estimate (c, alpha) in a_N ~ c1 * N**alpha * c**N.

    The nonzero support (an arithmetic progression for parity-restricted
    sequences) is fitted by least squares in the exact model

        log a_N = log c1 + alpha * log N + N * log c + b1/N + b2/N**2

    over the tail window; the 1/N and 1/N**2 regressors play the role of
    Richardson extrapolation levels for the subleading corrections.
    """
    support = [(N, v) for N, v in enumerate(sequence) if N > 0 and v > 0]
    if len(support) < min_terms:
        raise ValueError(f"need at least {min_terms} nonzero terms")
    start = int(len(support) * (1.0 - window_fraction))
    tail = support[start:]
    Ns = np.array([N for N, _ in tail], dtype=float)
    logs = np.array([_log(v) for _, v in tail])
    X = np.column_stack([
        np.ones_like(Ns), np.log(Ns), Ns, 1.0 / Ns, 1.0 / Ns ** 2,
    ])
    coef, *_ = np.linalg.lstsq(X, logs, rcond=None)
    resid = logs - X @ coef
    dof = max(len(tail) - X.shape[1], 1)
    sigma2 = float(resid @ resid) / dof
    cov = sigma2 * np.linalg.inv(X.T @ X)
    log_c = coef[2]
    alpha = coef[1]
    c = math.exp(log_c)
    return AsymptoticFit(
        growth_constant=c,
        exponent=float(alpha),
        stderr_growth=c * math.sqrt(max(cov[2, 2], 0.0)),
        stderr_exponent=math.sqrt(max(cov[1, 1], 0.0)),
        window=(int(Ns[0]), int(Ns[-1])),
        residual_rms=math.sqrt(float(resid @ resid) / len(tail)),
    )


def unrooted_estimate(N: int, rooted_count: int) -> Fraction:
    """Asymptotic unrooted count: rooted / (3N).

    Exact only in the large-N limit (automorphisms are trivial for
    almost all triangulations); at small N it is just the formula value.
    """
    if N < 1:
        raise ValueError("N >= 1 required")
    return Fraction(rooted_count, 3 * N)


def table_to_csv(table: CountTable) -> str:
    lines = ["N,m,count"]
    for N in range(table.n_max + 1):
        for m in range(2, table.m_max + 1):
            v = table[(N, m)]
            if v:
                lines.append(f"{N},{m},{v}")
    return "\n".join(lines) + "\n"


def fit_to_json(fit: AsymptoticFit) -> str:
    return json.dumps(asdict(fit), indent=2, sort_keys=True)
