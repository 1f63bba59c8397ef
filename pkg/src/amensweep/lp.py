"""Exact rational linear programming: a dense two-phase simplex method
with Bland's anti-cycling rule.

Solves  min c.x  subject to  A x <= b, x >= 0  over the rationals.
Small and deliberately simple; every pivot is exact, so optima can be
compared bit for bit.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class LPResult:
    value: Fraction
    x: tuple[Fraction, ...]
    pivots: int


class Unbounded(DomainError):
    pass


class Infeasible(DomainError):
    pass


def solve_min(c: Sequence[Fraction], A: Sequence[Sequence[Fraction]],
              b: Sequence[Fraction], max_pivots: int = 200000) -> LPResult:
    """Minimize c.x over {A x <= b, x >= 0}, exactly."""
    m, n = len(A), len(c)
    if any(len(row) != n for row in A) or len(b) != m:
        raise DomainError("LP dimensions are inconsistent")
    c = [Fraction(v) for v in c]
    b = [Fraction(v) for v in b]

    # rows with negative rhs get sign-flipped and an artificial variable
    need_art = [i for i in range(m) if b[i] < 0]
    n_art = len(need_art)
    width = n + m + n_art + 1  # vars, slacks, artificials, rhs
    rows: list[list[Fraction]] = []
    basis: list[int] = []
    art_col = {}
    for k, i in enumerate(need_art):
        art_col[i] = n + m + k
    for i in range(m):
        row = [ZERO] * width
        flip = -ONE if b[i] < 0 else ONE
        for j in range(n):
            row[j] = flip * Fraction(A[i][j])
        row[n + i] = flip
        row[-1] = flip * b[i]
        if i in art_col:
            row[art_col[i]] = ONE
            basis.append(art_col[i])
        else:
            basis.append(n + i)
        rows.append(row)

    pivots = 0

    def pivot(rows, obj, r, col):
        piv = rows[r][col]
        inv = ONE / piv
        rows[r] = [v * inv for v in rows[r]]
        prow = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * p for a, p in zip(rows[i], prow)]
        if obj[col] != 0:
            f = obj[col]
            obj[:] = [a - f * p for a, p in zip(obj, prow)]
        basis[r] = col

    def run_phase(obj, allowed: int) -> None:
        nonlocal pivots
        while True:
            # Bland: entering = smallest index with negative reduced cost
            col = next((j for j in range(allowed) if obj[j] < 0), None)
            if col is None:
                return
            best = None
            for i in range(m):
                a = rows[i][col]
                if a > 0:
                    ratio = rows[i][-1] / a
                    key = (ratio, basis[i])
                    if best is None or key < best[0]:
                        best = (key, i)
            if best is None:
                raise Unbounded("LP is unbounded")
            pivots += 1
            if pivots > max_pivots:
                raise DomainError(f"simplex exceeded {max_pivots} pivots")
            pivot(rows, obj, best[1], col)

    if n_art:
        # Phase I: minimize the sum of artificials, priced out of the
        # objective row because every artificial starts basic
        obj = [ZERO] * width
        for i in range(m):
            if basis[i] >= n + m:
                obj = [o - v for o, v in zip(obj, rows[i])]
        for k in range(n_art):
            obj[n + m + k] += ONE
        run_phase(obj, width - 1)
        if -_phase_value(obj) != 0:
            raise Infeasible("LP is infeasible")
        # drive any artificial still basic (at zero) out of the basis
        for i in range(m):
            if basis[i] >= n + m:
                col = next((j for j in range(n + m)
                            if rows[i][j] != 0), None)
                if col is None:
                    continue  # redundant row
                pivots += 1
                pivot(rows, obj, i, col)

    obj = [ZERO] * width
    for j in range(n):
        obj[j] = c[j]
    for i in range(m):
        j = basis[i]
        if j < n and c[j] != 0:
            f = c[j]
            obj = [o - f * v for o, v in zip(obj, rows[i])]
    run_phase(obj, n + m)  # artificials stay out in phase II

    x = [ZERO] * n
    for i in range(m):
        if basis[i] < n:
            x[basis[i]] = rows[i][-1]
    value = sum((ci * xi for ci, xi in zip(c, x)), ZERO)
    return LPResult(value, tuple(x), pivots)


def _phase_value(obj: list[Fraction]) -> Fraction:
    return obj[-1]


def enumerate_basic_solutions(c, A, b):
    """Brute-force oracle: optimum over all basic feasible points of
    {A x <= b, x >= 0}, by enumerating slack/variable bases.  Exponential;
    for cross-checking tiny LPs only."""
    from itertools import combinations

    m, n = len(A), len(c)
    if n + m > 18:
        raise DomainError("brute-force oracle limited to tiny LPs")
    full = [[Fraction(A[i][j]) for j in range(n)]
            + [ONE if k == i else ZERO for k in range(m)]
            for i in range(m)]
    rhs = [Fraction(v) for v in b]
    best = None
    for cols in combinations(range(n + m), m):
        M = [[full[i][j] for j in cols] for i in range(m)]
        sol = _solve_square(M, rhs)
        if sol is None or any(v < 0 for v in sol):
            continue
        x = [ZERO] * n
        for j, v in zip(cols, sol):
            if j < n:
                x[j] = v
        val = sum((ci * xi for ci, xi in zip(c, x)), ZERO)
        if best is None or val < best:
            best = val
    if best is None:
        raise Infeasible("no basic feasible point")
    return best


def _solve_square(M, rhs):
    n = len(M)
    aug = [list(row) + [rhs[i]] for i, row in enumerate(M)]
    for col in range(n):
        piv = next((r for r in range(col, n) if aug[r][col] != 0), None)
        if piv is None:
            return None
        aug[col], aug[piv] = aug[piv], aug[col]
        inv = ONE / aug[col][col]
        aug[col] = [v * inv for v in aug[col]]
        for r in range(n):
            if r != col and aug[r][col] != 0:
                f = aug[r][col]
                aug[r] = [a - f * p for a, p in zip(aug[r], aug[col])]
    return [aug[i][-1] for i in range(n)]
