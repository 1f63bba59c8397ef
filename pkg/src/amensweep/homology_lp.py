"""Exact simplicial homology of a multicomplex over the rationals, and an
exact LP oracle for the quotient seminorm of a homology class:

    seminorm([z]) = min ||z - boundary(b)||_1  over (degree+1)-chains b.

Both run over the full algebraic-simplex bases (degenerate tuples
included), so they match the chain modules exactly.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .chains import Chain
from .errors import DomainError
from .lp import solve_min
from .multicomplex import AlgebraicSimplex, Multicomplex

ZERO = Fraction(0)


# -- exact linear algebra -----------------------------------------------------

def row_reduce(rows: list[list[Fraction]]) -> tuple[list[list[Fraction]], list[int]]:
    """In-place RREF; returns (rows, pivot column indices)."""
    if not rows:
        return rows, []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = Fraction(1) / rows[r][col]
        rows[r] = [v * inv for v in rows[r]]
        prow = rows[r]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                f = rows[i][col]
                rows[i] = [a - f * p for a, p in zip(rows[i], prow)]
        pivots.append(col)
        r += 1
        if r == len(rows):
            break
    return rows, pivots


def boundary_matrix(K: Multicomplex, n: int, cap: int | None = None
                    ) -> tuple[list[list[Fraction]], list[AlgebraicSimplex],
                               list[AlgebraicSimplex]]:
    """Matrix of the boundary map from degree n to degree n-1 in the
    deterministic bases; returns (columns-as-rows?, no): (matrix, rows, cols)
    with matrix[i][j] = coefficient of rows[i] in boundary(cols[j])."""
    cols = K.algebraic_simplices(n, cap=cap)
    rows = K.algebraic_simplices(n - 1, cap=cap) if n >= 1 else []
    index = {sigma: i for i, sigma in enumerate(rows)}
    mat = [[ZERO] * len(cols) for _ in rows]
    for j, sigma in enumerate(cols):
        bnd = Chain.single(K, sigma).boundary()
        for tau, coeff in bnd.items():
            mat[index[tau]][j] += coeff
    return mat, rows, cols


def _kernel_basis(mat: list[list[Fraction]], ncols: int) -> list[list[Fraction]]:
    """Basis of the null space of mat (ncols columns)."""
    work = [row[:] for row in mat]
    work, pivots = row_reduce(work)
    pivot_set = set(pivots)
    free = [j for j in range(ncols) if j not in pivot_set]
    basis = []
    for f in free:
        vec = [ZERO] * ncols
        vec[f] = Fraction(1)
        for r, p in enumerate(pivots):
            vec[p] = -work[r][f]
        basis.append(vec)
    return basis


def _independent_columns(mat: list[list[Fraction]]) -> list[int]:
    work = [row[:] for row in mat]
    _, pivots = row_reduce(work)
    return pivots


@dataclass(frozen=True)
class HomologyBasis:
    """Cycle and boundary space data for one degree."""

    degree: int
    cycle_basis: tuple[Chain, ...]
    boundary_basis: tuple[Chain, ...]
    quotient_reps: tuple[Chain, ...]

    @property
    def dimension(self) -> int:
        return len(self.quotient_reps)


def _vec_to_chain(K: Multicomplex, basis: list[AlgebraicSimplex],
                  vec: list[Fraction], degree: int) -> Chain:
    return Chain(K, degree,
                 _trusted={basis[i]: v for i, v in enumerate(vec) if v != 0})


def homology(K: Multicomplex, n: int, cap: int | None = None) -> HomologyBasis:
    """Exact Gaussian elimination on the degree-n and degree-(n+1) boundary
    matrices; quotient representatives extend the boundary space to the
    cycle space."""
    if n < 0:
        raise DomainError("degree must be nonnegative")
    basis_n = K.algebraic_simplices(n, cap=cap)
    dim_n = len(basis_n)
    if n == 0:
        kernel = [[Fraction(1) if i == j else ZERO for i in range(dim_n)]
                  for j in range(dim_n)]
    else:
        mat_n, _, _ = boundary_matrix(K, n, cap=cap)
        kernel = _kernel_basis(mat_n, dim_n)
    mat_up, _, cols_up = boundary_matrix(K, n + 1, cap=cap)
    image_vectors = []
    if cols_up:
        # independent boundary vectors, as columns in the degree-n basis
        cols_as_vectors = [[mat_up[i][j] for i in range(dim_n)]
                           for j in range(len(cols_up))]
        for j in _independent_columns(mat_up):
            image_vectors.append(cols_as_vectors[j])
    # extend image to the kernel: RREF over [image | kernel] columns
    combined = image_vectors + kernel
    if combined:
        as_rows = [[combined[k][i] for k in range(len(combined))]
                   for i in range(dim_n)]
        pivots = _independent_columns(as_rows)
    else:
        pivots = []
    quotient = [combined[p] for p in pivots if p >= len(image_vectors)]
    return HomologyBasis(
        degree=n,
        cycle_basis=tuple(_vec_to_chain(K, basis_n, v, n) for v in kernel),
        boundary_basis=tuple(_vec_to_chain(K, basis_n, v, n)
                             for v in image_vectors),
        quotient_reps=tuple(_vec_to_chain(K, basis_n, v, n) for v in quotient),
    )


def class_of(K: Multicomplex, z: Chain, basis: HomologyBasis | None = None,
             cap: int | None = None) -> tuple[Fraction, ...]:
    """Coordinates of [z] in the quotient basis; the zero vector iff z is a
    boundary."""
    if z.degree >= 1 and not z.is_cycle():
        raise DomainError("class_of needs a cycle")
    if basis is None:
        basis = homology(K, z.degree, cap=cap)
    basis_n = K.algebraic_simplices(z.degree, cap=cap)
    index = {sigma: i for i, sigma in enumerate(basis_n)}
    span = list(basis.boundary_basis) + list(basis.quotient_reps)
    # solve span . lam = z by RREF on the augmented system
    rows = [[ZERO] * len(span) + [ZERO] for _ in range(len(basis_n))]
    for k, chain in enumerate(span):
        for sigma, coeff in chain.items():
            rows[index[sigma]][k] = coeff
    for sigma, coeff in z.items():
        rows[index[sigma]][-1] = coeff
    work, pivots = row_reduce(rows)
    lam = [ZERO] * len(span)
    for r, p in enumerate(pivots):
        if p == len(span):
            raise DomainError("cycle does not lie in the computed cycle space")
        lam[p] = work[r][-1]
    n_bound = len(basis.boundary_basis)
    return tuple(lam[n_bound:])


@dataclass(frozen=True)
class SeminormResult:
    value: Fraction
    minimizer: Chain       # b* of degree n+1
    optimal_rep: Chain     # z - boundary(b*)

    def replay(self, z: Chain) -> bool:
        """Exactness: the minimizer reproduces the optimum bit for bit."""
        rep = z - self.minimizer.boundary()
        return rep == self.optimal_rep and rep.l1_norm() == self.value


def seminorm_lp(K: Multicomplex, z: Chain, cap: int | None = None
                ) -> SeminormResult:
    """Exact minimum of ||z - boundary(b)||_1 via the rational simplex
    method, over an independent subset of boundary columns."""
    if z.degree >= 1 and not z.is_cycle():
        raise DomainError("seminorm_lp needs a cycle")
    n = z.degree
    basis_n = K.algebraic_simplices(n, cap=cap)
    index = {sigma: i for i, sigma in enumerate(basis_n)}
    mat_up, _, cols_up = boundary_matrix(K, n + 1, cap=cap)
    chosen = _independent_columns(mat_up) if cols_up else []
    zvec = [ZERO] * len(basis_n)
    for sigma, coeff in z.items():
        zvec[index[sigma]] = coeff

    # rows where every chosen column vanishes contribute |z_i| outright
    active = [i for i in range(len(basis_n))
              if any(mat_up[i][j] != 0 for j in chosen)]
    fixed = sum((abs(zvec[i]) for i in range(len(basis_n))
                 if i not in set(active)), ZERO)
    r = len(chosen)
    m = len(active)
    if r == 0 or m == 0:
        return SeminormResult(z.l1_norm(), Chain.zero(K, n + 1), z)

    # variables: y+ (r), y- (r), t (m); minimize sum t
    # constraints: +(D y) - t <= z_active ; -(D y) - t <= -z_active
    nvars = 2 * r + m
    c = [ZERO] * (2 * r) + [Fraction(1)] * m
    A: list[list[Fraction]] = []
    b: list[Fraction] = []
    for sign in (1, -1):
        for a, i in enumerate(active):
            row = [ZERO] * nvars
            for k, j in enumerate(chosen):
                v = sign * mat_up[i][j]
                row[k] = v
                row[r + k] = -v
            row[2 * r + a] = Fraction(-1)
            A.append(row)
            b.append(sign * zvec[i])
    res = solve_min(c, A, b)
    y = [res.x[k] - res.x[r + k] for k in range(r)]
    minimizer = Chain(K, n + 1,
                      _trusted={cols_up[j]: y[k]
                                for k, j in enumerate(chosen) if y[k] != 0})
    rep = z - minimizer.boundary()
    value = res.value + fixed
    if rep.l1_norm() != value:
        raise DomainError("LP optimum does not replay; solver bug")
    return SeminormResult(value, minimizer, rep)
