"""Small exact linear algebra over the rationals and over Laurent polynomials."""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from typing import List, Sequence

from .laurent import LaurentPoly


def int_det(rows: Sequence[Sequence[int]]) -> int:
    """Exact integer determinant via fraction-free Bareiss elimination."""
    a = [list(map(int, r)) for r in rows]
    n = len(a)
    if any(len(r) != n for r in a):
        raise ValueError("matrix must be square")
    if n == 0:
        return 1
    sign, prev = 1, 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def nullspace(rows: List[List[Fraction]], ncols: int) -> List[List[Fraction]]:
    """Basis of the right nullspace of a rational matrix (reduced row echelon form)."""
    a = [list(r) for r in rows]
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][c] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][c]
        a[r] = [v * inv for v in a[r]]
        for i in range(len(a)):
            if i != r and a[i][c] != 0:
                f = a[i][c]
                ar = a[r]
                a[i] = [x - f * y for x, y in zip(a[i], ar)]
        pivots.append(c)
        r += 1
        if r == len(a):
            break
    free = [c for c in range(ncols) if c not in set(pivots)]
    basis = []
    for f in free:
        v = [Fraction(0)] * ncols
        v[f] = Fraction(1)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][f]
        basis.append(v)
    return basis


def poly_det(matrix: Sequence[Sequence[LaurentPoly]]) -> LaurentPoly:
    """Determinant of a square matrix of Laurent polynomials.

    Laplace expansion along rows with memoisation over the set of columns
    still available, so the cost is ``O(n 2^n)`` polynomial products.
    """
    n = len(matrix)
    if any(len(r) != n for r in matrix):
        raise ValueError("matrix must be square")
    dim = matrix[0][0].dim

    @lru_cache(maxsize=None)
    def minor(row: int, cols: int) -> LaurentPoly:
        # determinant of rows row.. against the column set encoded in bitmask cols
        if row == n:
            return LaurentPoly.constant(1, dim)
        out = LaurentPoly.zero(dim)
        sign = 1
        for c in range(n):
            if not cols >> c & 1:
                continue
            entry = matrix[row][c]
            if entry:
                term = entry * minor(row + 1, cols & ~(1 << c))
                out = out + term if sign > 0 else out - term
            sign = -sign
        return out

    return minor(0, (1 << n) - 1)
