"""
Exact Linear Algebra over Q(zeta_n)
Fraction-free (Bareiss) elimination for rank and null space of CycNum matrices
"""

import logging
from typing import List, Sequence

from cyclotomic import CycNum, ONE, ZERO

logger = logging.getLogger(__name__)

Matrix = List[List[CycNum]]


def as_cyc(value) -> CycNum:
    if isinstance(value, CycNum):
        return value
    return CycNum.from_rational(value)


def to_matrix(rows: Sequence[Sequence]) -> Matrix:
    return [[as_cyc(x) for x in row] for row in rows]


def shape(matrix: Matrix):
    return len(matrix), (len(matrix[0]) if matrix else 0)


def matmul(a: Matrix, b: Matrix) -> Matrix:
    rows, inner = shape(a)
    inner_b, cols = shape(b)
    if inner != inner_b:
        raise ValueError(f"shape mismatch: {rows}x{inner} times {inner_b}x{cols}")
    result = []
    for i in range(rows):
        row = []
        for j in range(cols):
            total = ZERO
            for k in range(inner):
                if not a[i][k].is_zero() and not b[k][j].is_zero():
                    total = total + a[i][k] * b[k][j]
            row.append(total)
        result.append(row)
    return result


def conj_transpose(matrix: Matrix) -> Matrix:
    rows, cols = shape(matrix)
    return [[matrix[i][j].conj() for i in range(rows)] for j in range(cols)]


def _bareiss(matrix: Matrix):
    """Echelon form with fraction-free updates; returns (rows, pivot columns)"""
    work = [list(row) for row in matrix]
    n_rows, n_cols = shape(work)
    previous = ONE
    pivots = []
    r = 0
    for c in range(n_cols):
        if r == n_rows:
            break
        pivot = next((i for i in range(r, n_rows) if not work[i][c].is_zero()), None)
        if pivot is None:
            continue
        work[r], work[pivot] = work[pivot], work[r]
        head = work[r][c]
        for i in range(r + 1, n_rows):
            factor = work[i][c]
            for j in range(c + 1, n_cols):
                work[i][j] = (head * work[i][j] - factor * work[r][j]) / previous
            work[i][c] = ZERO
        previous = head
        pivots.append(c)
        r += 1
    return work, pivots


def rank(matrix: Matrix) -> int:
    if not matrix:
        return 0
    return len(_bareiss(matrix)[1])


def nullspace(matrix: Matrix) -> Matrix:
    """Basis of {x : matrix x = 0}, one vector per free column"""
    n_rows, n_cols = shape(matrix)
    echelon, pivots = _bareiss(matrix)
    # back substitution from the echelon rows
    basis = []
    free_columns = [c for c in range(n_cols) if c not in pivots]
    for free in free_columns:
        x = [ZERO] * n_cols
        x[free] = ONE
        for r in range(len(pivots) - 1, -1, -1):
            c = pivots[r]
            total = ZERO
            for j in range(c + 1, n_cols):
                if not echelon[r][j].is_zero() and not x[j].is_zero():
                    total = total + echelon[r][j] * x[j]
            x[c] = -total / echelon[r][c]
        basis.append(x)
    return basis
