"""Exact linear algebra over polynomials and rational functions.

Matrices are lists of rows of sympy scalars. Everything is kept in canonical
form after each elimination step, so zero tests are syntactic.
"""

from functools import reduce
from typing import List, Sequence, Tuple

import sympy

from .errors import NotInSpan, RankDeficient, ShapeError, SingularMatrix
from .scalars import ONE, ZERO, as_fraction, canonical, is_zero

Matrix = List[List[sympy.Expr]]


def _check_square(M: Sequence[Sequence]) -> int:
    n = len(M)
    if any(len(row) != n for row in M):
        raise ShapeError(f"Expected a square matrix, got {n} rows of lengths {[len(r) for r in M]}")
    return n


def identity(n: int) -> Matrix:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def zeros(rows: int, cols: int) -> Matrix:
    return [[ZERO] * cols for _ in range(rows)]


def transpose(M: Sequence[Sequence]) -> Matrix:
    if not M:
        return []
    return [list(col) for col in zip(*M)]


def matmul(A: Sequence[Sequence], B: Sequence[Sequence]) -> Matrix:
    if A and B and len(A[0]) != len(B):
        raise ShapeError(f"Cannot multiply {len(A)}x{len(A[0])} by {len(B)}x{len(B[0])}")
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [
        [canonical(sum((A[i][k] * B[k][j] for k in range(inner)), ZERO)) for j in range(cols)]
        for i in range(len(A))
    ]


def matadd(A: Sequence[Sequence], B: Sequence[Sequence], sign: int = 1) -> Matrix:
    return [[canonical(a + sign * b) for a, b in zip(ra, rb)] for ra, rb in zip(A, B)]


def scale(c, A: Sequence[Sequence]) -> Matrix:
    return [[canonical(c * a) for a in row] for row in A]


def matrices_equal(A: Sequence[Sequence], B: Sequence[Sequence]) -> bool:
    if len(A) != len(B):
        return False
    return all(
        len(ra) == len(rb) and all(is_zero(a - b) for a, b in zip(ra, rb))
        for ra, rb in zip(A, B)
    )


def is_antisymmetric(M: Sequence[Sequence]) -> bool:
    n = len(M)
    return all(is_zero(M[i][j] + M[j][i]) for i in range(n) for j in range(i, n))


def determinant(M: Sequence[Sequence]) -> sympy.Expr:
    """Bareiss fraction-free determinant; every division is exact."""
    n = _check_square(M)
    if n == 0:
        return ONE
    A = [[canonical(x) for x in row] for row in M]
    sign, prev = 1, ONE
    for k in range(n - 1):
        if is_zero(A[k][k]):
            swap = next((i for i in range(k + 1, n) if not is_zero(A[i][k])), None)
            if swap is None:
                return ZERO
            A[k], A[swap] = A[swap], A[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = canonical((A[k][k] * A[i][j] - A[i][k] * A[k][j]) / prev)
        prev = A[k][k]
    return canonical(sign * A[n - 1][n - 1])


def invert_matrix(M: Sequence[Sequence]) -> Matrix:
    """Inverse by fraction-free Gauss-Jordan on ``[M | I]``.

    Raises:
        SingularMatrix: if the determinant is identically zero
    """
    n = _check_square(M)
    A = [[canonical(x) for x in row] + unit for row, unit in zip(M, identity(n))]
    prev = ONE
    for k in range(n):
        pivot = next((i for i in range(k, n) if not is_zero(A[i][k])), None)
        if pivot is None:
            raise SingularMatrix("Matrix determinant vanishes identically")
        A[k], A[pivot] = A[pivot], A[k]
        for i in range(n):
            if i == k:
                continue
            factor = A[i][k]
            A[i] = [
                canonical((A[k][k] * A[i][j] - factor * A[k][j]) / prev)
                for j in range(2 * n)
            ]
        prev = A[k][k]
    return [[canonical(A[i][n + j] / A[i][i]) for j in range(n)] for i in range(n)]


def _pivot_row(R: Matrix, start: int, col: int):
    candidates = [i for i in range(start, len(R)) if not is_zero(R[i][col])]
    if not candidates:
        return None
    return min(candidates, key=lambda i: (sympy.count_ops(R[i][col]), i))


def row_reduce(rows: Sequence[Sequence], ncols: int = None) -> Tuple[Matrix, List[int]]:
    """Reduced row echelon form over rational functions.

    Args:
        rows: Matrix rows
        ncols: Only pivot within the first ``ncols`` columns (all by default)

    Returns:
        (reduced rows, pivot column indices)
    """
    R = [[canonical(x) for x in row] for row in rows]
    if not R:
        return R, []
    width = len(R[0]) if ncols is None else ncols
    pivots: List[int] = []
    r = 0
    for c in range(width):
        if r == len(R):
            break
        p = _pivot_row(R, r, c)
        if p is None:
            continue
        R[r], R[p] = R[p], R[r]
        piv = R[r][c]
        R[r] = [canonical(x / piv) for x in R[r]]
        for i in range(len(R)):
            if i != r and not is_zero(R[i][c]):
                factor = R[i][c]
                R[i] = [canonical(a - factor * b) for a, b in zip(R[i], R[r])]
        pivots.append(c)
        r += 1
    return R, pivots


def generic_rank(vectors: Sequence[Sequence]) -> int:
    if not vectors:
        return 0
    return len(row_reduce(vectors)[1])


def solve_in_span(v: Sequence, S: Sequence[Sequence]) -> List[sympy.Expr]:
    """Coefficients c with sum(c_i S_i) = v.

    Raises:
        RankDeficient: if S is generically dependent
        NotInSpan: if v is not a rational-function combination of S
    """
    k = len(S)
    if any(len(s) != len(v) for s in S):
        raise ShapeError("All vectors must have the same length")
    augmented = [[S[j][i] for j in range(k)] + [v[i]] for i in range(len(v))]
    R, pivots = row_reduce(augmented, k + 1)
    basis_pivots = [p for p in pivots if p < k]
    if len(basis_pivots) < k:
        raise RankDeficient(f"Spanning set of {k} vectors has generic rank {len(basis_pivots)}")
    if k in pivots:
        raise NotInSpan("Vector is not in the span")
    return [R[row][k] for row in range(k)]


def clear_denominators(vec: Sequence) -> List[sympy.Expr]:
    """Scale a rational-function vector by the lcm of its denominators."""
    dens = [as_fraction(x)[1] for x in vec]
    lcm = reduce(sympy.lcm, dens, ONE)
    return [canonical(x * lcm) for x in vec]


def kernel(rows: Sequence[Sequence], width: int) -> List[List[sympy.Expr]]:
    """Basis of the right null space, one polynomial vector per free column."""
    if not rows:
        return [[ONE if i == j else ZERO for i in range(width)] for j in range(width)]
    R, pivots = row_reduce(rows, width)
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for f in free:
        vec = [ZERO] * width
        vec[f] = ONE
        for r, c in enumerate(pivots):
            vec[c] = canonical(-R[r][f])
        basis.append(clear_denominators(vec))
    return basis


def span_basis(vectors: Sequence[Sequence], width: int = None) -> List[List[sympy.Expr]]:
    """Reduced echelon basis of a span, one polynomial vector per pivot."""
    if not vectors:
        return []
    R, pivots = row_reduce(vectors, width)
    return [clear_denominators(R[i]) for i in range(len(pivots))]


def same_span(U: Sequence[Sequence], V: Sequence[Sequence]) -> bool:
    rank = generic_rank(list(U) + list(V))
    return generic_rank(U) == rank == generic_rank(V)
