"""Algebraic analysis of the canonical counting functional equation

    W = beta + x y W**2 + x y**-1 (W - S),        S(x) = W(x, 0),

whose double series W(x, y) = sum q(N, m) x**N y**(m-2) carries the
weighted counts q(N, m) = beta**((N+m)/2) C(N, m).

Eliminating W yields the parametrization x = y (1 - 2 beta y**2) for the
branch y(0) = 0 and, after eliminating S from the double-root system,

    S = beta (1 - 3 beta y**2) / (1 - 2 beta y**2)**2.

All series arithmetic is exact rational; coefficient magnitudes grow
like x1**-N, so floating point is only used at the reporting boundary
(via exact big-integer logarithms), never inside the algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from scipy.optimize import brentq

from .enumeration import tutte_table

__all__ = [
    "SeriesCoeffs",
    "CriticalData",
    "y_series",
    "s_series",
    "critical_data",
    "u_expansion",
    "y_branch",
    "y_radius",
    "coefficient_asymptotics_check",
    "canonical_coefficients",
    "functional_equation_residual",
    "quadratic_form_residual",
    "cubic_discriminant",
    "series_to_csv",
]


@dataclass
class SeriesCoeffs:
    """Truncated power series; ``coefficients[k]`` multiplies x**k."""

    coefficients: list
    order: int
    variable: str = "x"

    def __post_init__(self) -> None:
        assert len(self.coefficients) == self.order + 1

    def __getitem__(self, k: int):
        return self.coefficients[k]

    def log_abs(self) -> list[float]:
        """Overflow-safe natural logs of the nonzero coefficients."""
        out = []
        for c in self.coefficients:
            if c == 0:
                out.append(float("-inf"))
            else:
                f = Fraction(c)
                out.append(math.log(abs(f.numerator)) -
                           math.log(f.denominator))
        return out


@dataclass
class CriticalData:
    beta: float
    x1: float
    y_at_x1: float
    radius_R: float


# -- exact series helpers --------------------------------------------------


def _mul(a: Sequence, b: Sequence, order: int) -> list:
    out = [Fraction(0)] * (order + 1)
    for i, ai in enumerate(a):
        if ai == 0 or i > order:
            continue
        for j, bj in enumerate(b):
            if i + j > order:
                break
            if bj:
                out[i + j] += ai * bj
    return out


def _recip(a: Sequence, order: int) -> list:
    """1 / a for a series with nonzero constant term (triangular solve)."""
    if a[0] == 0:
        raise ZeroDivisionError("series has no reciprocal")
    inv0 = Fraction(1, 1) / a[0]
    out = [inv0] + [Fraction(0)] * order
    for k in range(1, order + 1):
        acc = Fraction(0)
        for i in range(1, min(k, len(a) - 1) + 1):
            if a[i]:
                acc += a[i] * out[k - i]
        out[k] = -inv0 * acc
    return out


def y_series(beta, order: int) -> SeriesCoeffs:
    """Branch with y(0) = 0 of x = y (1 - 2 beta y**2).

    From y = x + 2 beta y**3, Lagrange inversion gives the explicit odd
    coefficients  [x**(2k+1)] y = binom(3k, k) / (2k + 1) * (2 beta)**k,
    all positive.
    """
    if order < 1:
        raise ValueError("order >= 1 required")
    beta = Fraction(beta)
    coeffs = [Fraction(0)] * (order + 1)
    k = 0
    while 2 * k + 1 <= order:
        coeffs[2 * k + 1] = (Fraction(math.comb(3 * k, k), 2 * k + 1)
                             * (2 * beta) ** k)
        k += 1
    return SeriesCoeffs(coeffs, order, "x")


def s_series(beta, order: int) -> SeriesCoeffs:
    """S(x) = beta (1 - 3 beta y**2) / (1 - 2 beta y**2)**2 as a series.

    At beta = 1 this is the C(N, 2) column: 1 + x**2 + 4 x**4 + 24 x**6 + ...
    """
    beta = Fraction(beta)
    y = y_series(beta, order).coefficients
    y2 = _mul(y, y, order)
    num = [Fraction(beta)] + [Fraction(0)] * order
    den = [Fraction(1)] + [Fraction(0)] * order
    for k in range(order + 1):
        if y2[k]:
            num[k] -= 3 * beta * beta * y2[k]
            den[k] -= 2 * beta * y2[k]
    den2 = _mul(den, den, order)
    coeffs = _mul(num, _recip(den2, order), order)
    return SeriesCoeffs(coeffs, order, "x")


def critical_data(beta: float) -> CriticalData:
    """Ramification point x1, the double root y(x1), and the radius
    constant R = (27/32) x1."""
    if beta <= 0:
        raise ValueError("beta > 0 required")
    x1 = math.sqrt(2.0 / (27.0 * beta))
    # double root of y**3 - y/(2 beta) + x/(2 beta): y = (x1/(4 beta))**(1/3),
    # equivalently 1/sqrt(6 beta) (the zero of dx/dy)
    y_at = (x1 / (4.0 * beta)) ** (1.0 / 3.0)
    return CriticalData(beta=beta, x1=x1, y_at_x1=y_at,
                        radius_R=27.0 * x1 / 32.0)


def y_branch(beta: float, x: float) -> float:
    """Numeric value of the y(0) = 0 branch at 0 <= x <= x1.

    The branch is tracked by monotonicity on [0, 1/sqrt(6 beta)] rather
    than by a radical formula, so no principal-branch surprises.
    """
    cd = critical_data(beta)
    if not 0.0 <= x <= cd.x1 * (1 + 1e-12):
        raise ValueError("x outside [0, x1]")
    top = 1.0 / math.sqrt(6.0 * beta)
    if x == 0.0:
        return 0.0
    f = lambda y: y * (1.0 - 2.0 * beta * y * y) - x
    hi = min(top, cd.x1 * 4)  # f(top) <= 0 at x = x1 only marginally
    return float(brentq(f, 0.0, top, xtol=1e-14, rtol=1e-15))


def _ab(beta: float, x: float) -> tuple[float, float, float]:
    y0 = y_branch(beta, x)
    t = 1.0 - 2.0 * beta * y0 * y0
    return y0, t * t, -4.0 * beta * y0 * t


def y_radius(beta: float, x: float) -> float:
    """Zero of a(x) + b(x) y: radius in y of the double expansion."""
    y0, a, b = _ab(beta, x)
    if b == 0.0:
        return math.inf
    return -a / b


def u_expansion(beta: float, x: float, y: float) -> float:
    """U(x, y) = sum q(N, m) x**N y**m inside the bidisk of convergence.

    U = [(y - x) + (y0 - y) sqrt(a + b y)] / (2 x), the branch with
    U(x, 0) = 0; D = (y - y0)**2 (a + b y) is the discriminant of the
    quadratic form of the functional equation.
    """
    if not 0.0 < x:
        raise ValueError("x > 0 required")
    y0, a, b = _ab(beta, x)
    rad = a + b * y
    if y < 0 or rad <= 0.0:
        raise ValueError("y outside the convergence domain")
    return ((y - x) + (y0 - y) * math.sqrt(rad)) / (2.0 * x)


# -- exact bivariate residuals ---------------------------------------------


def canonical_coefficients(beta, n_order: int) -> list[list[Fraction]]:
    """q(N, m) = beta**((N+m)/2) C(N, m) as W-polynomials.

    Returns ``w`` with ``w[N][k]`` the coefficient of x**N y**k in
    W(x, y), where k = m - 2.  Computed from the enumeration table, so
    residual checks below are genuine cross-validations.
    """
    beta = Fraction(beta)
    table = tutte_table(n_order, n_order + 2)
    w: list[list[Fraction]] = []
    for N in range(n_order + 1):
        row = [Fraction(0)] * (N + 1)
        for m in range(2, N + 3):
            c = table[(N, m)]
            if c:
                row[m - 2] = beta ** ((N + m) // 2) * c
        w.append(row)
    return w


def _poly_mul(p: Sequence, q: Sequence, cap: int) -> list:
    out = [Fraction(0)] * min(len(p) + len(q) - 1, cap + 1)
    for i, a in enumerate(p):
        if a == 0:
            continue
        for j, b in enumerate(q):
            if i + j > cap:
                break
            if b:
                out[i + j] += a * b
    return out


def functional_equation_residual(beta, order: int) -> Fraction:
    """Max |coefficient| of W - beta - x y W**2 - x (W - S)/y through
    x**order.  Exactly zero when the table counts satisfy the canonical
    equation."""
    w = canonical_coefficients(beta, order)
    beta = Fraction(beta)
    worst = Fraction(0)
    for N in range(order + 1):
        # residual polynomial in y at x**N
        res = list(w[N])
        if N == 0:
            res[0] -= beta
        else:
            # y * sum_{N1+N2=N-1} W_N1 W_N2
            quad = [Fraction(0)]
            for N1 in range(N):
                quad_part = _poly_mul(w[N1], w[N - 1 - N1], N)
                for k, v in enumerate(quad_part):
                    while len(quad) <= k + 1:
                        quad.append(Fraction(0))
                    quad[k + 1] -= v
            for k, v in enumerate(quad):
                if k < len(res):
                    res[k] += v
            # (W_{N-1} - W_{N-1}(0)) / y
            prev = w[N - 1]
            for k in range(1, len(prev)):
                if k - 1 < len(res):
                    res[k - 1] -= prev[k]
        worst = max(worst, max((abs(v) for v in res), default=Fraction(0)))
    return worst


def quadratic_form_residual(beta, order: int) -> Fraction:
    """Max |coefficient| of (2xU + x - y)**2 - [4 x**2 y**2 S
    + (x - y)**2 - 4 beta x y**3] through x**order, with U = y**2 W
    built from the enumeration table."""
    beta = Fraction(beta)
    w = canonical_coefficients(beta, order)
    s = s_series(beta, order).coefficients
    ycap = order + 4
    # lhs_N(y) coefficients of x**N in (2xU + x - y)**2
    # 2xU + x - y = -y + x(1 + 2 U_{N-1}-shift ...): assemble A_N(y)
    A: list[list[Fraction]] = []
    for N in range(order + 1):
        row = [Fraction(0)] * (ycap + 1)
        if N == 0:
            row[1] = Fraction(-1)
        elif N == 1:
            row[0] = Fraction(1)
        if N >= 1:
            # 2 x U contributes 2 * u[N-1] where u[N][m] = w[N][m-2]
            for k, v in enumerate(w[N - 1]):
                if v and k + 2 <= ycap:
                    row[k + 2] += 2 * v
        A.append(row)
    worst = Fraction(0)
    for N in range(order + 1):
        lhs = [Fraction(0)] * (ycap + 1)
        for N1 in range(N + 1):
            part = _poly_mul(A[N1], A[N - N1], ycap)
            for k, v in enumerate(part):
                lhs[k] += v
        rhs = [Fraction(0)] * (ycap + 1)
        if N >= 2:
            rhs[2] += 4 * s[N - 2]
        if N == 0:
            rhs[2] += 1
        elif N == 1:
            rhs[1] -= 2
            rhs[3] -= 4 * beta
        elif N == 2:
            rhs[0] += 1
        diff = max(abs(l - r) for l, r in zip(lhs, rhs))
        worst = max(worst, diff)
    return worst


def cubic_discriminant(beta, x) -> Fraction:
    """Discriminant of y**3 + p y + q, p = -1/(2 beta), q = x/(2 beta):
    Delta = p**2 (2/beta - 27 x**2); zero exactly at x = +-x1."""
    beta = Fraction(beta)
    x = Fraction(x)
    p = Fraction(-1) / (2 * beta)
    return p * p * (Fraction(2) / beta - 27 * x * x)


@dataclass
class TailFlatnessReport:
    constant: float
    sup_relative_deviation: float
    window: tuple[int, int]
    n_points: int


def coefficient_asymptotics_check(series: SeriesCoeffs, x1: float,
                                  exponent_b: float,
                                  tail_fraction: float = 0.25,
                                  ) -> TailFlatnessReport:
    """Flatness of c_n * x1**n * n**(b+1) over the tail of the support.

    Works in log space so x1**-n coefficient growth cannot overflow.
    """
    logs = series.log_abs()
    support = [n for n in range(1, series.order + 1)
               if logs[n] != float("-inf")]
    if len(support) < 100:
        raise ValueError("need at least 100 nonzero coefficients")
    t = [logs[n] + n * math.log(x1) + (exponent_b + 1.0) * math.log(n)
         for n in support]
    k = max(2, int(len(support) * tail_fraction))
    tail_n = support[-k:]
    tail_t = t[-k:]
    mean = sum(tail_t) / len(tail_t)
    sup_dev = max(abs(math.exp(v - mean) - 1.0) for v in tail_t)
    return TailFlatnessReport(constant=math.exp(mean),
                              sup_relative_deviation=sup_dev,
                              window=(tail_n[0], tail_n[-1]),
                              n_points=len(tail_n))


def series_to_csv(series: SeriesCoeffs) -> str:
    """CSV dump: rational mode emits numerator/denominator columns."""
    rational = all(isinstance(c, (int, Fraction))
                   for c in series.coefficients)
    if rational:
        lines = ["order,numerator,denominator"]
        for k, c in enumerate(series.coefficients):
            f = Fraction(c)
            lines.append(f"{k},{f.numerator},{f.denominator}")
    else:
        lines = ["order,value"]
        for k, c in enumerate(series.coefficients):
            lines.append(f"{k},{float(c)!r}")
    return "\n".join(lines) + "\n"
