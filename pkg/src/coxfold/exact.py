"""Small dense linear algebra over Q[tau].

Matrices are tuples of row tuples of :class:`GoldenRat`. Sizes here never
exceed 10x10, so plain Gaussian elimination is adequate.
"""
from __future__ import annotations

from typing import Sequence

from .golden import ONE, ZERO, GoldenRat, as_golden

Matrix = tuple[tuple[GoldenRat, ...], ...]
Vector = tuple[GoldenRat, ...]


class SingularMatrixError(ValueError):
    pass


def to_matrix(rows) -> Matrix:
    return tuple(tuple(as_golden(x) for x in row) for row in rows)


def to_vector(values) -> Vector:
    return tuple(as_golden(x) for x in values)


def identity(n: int) -> Matrix:
    return tuple(tuple(ONE if i == j else ZERO for j in range(n)) for i in range(n))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m))


def matmul(x: Matrix, y: Matrix) -> Matrix:
    cols = transpose(y)
    return tuple(tuple(dot(row, col) for col in cols) for row in x)


def matvec(m: Matrix, v: Sequence[GoldenRat]) -> Vector:
    return tuple(dot(row, v) for row in m)


def dot(u: Sequence[GoldenRat], v: Sequence[GoldenRat]) -> GoldenRat:
    total = ZERO
    for a, b in zip(u, v):
        if a and b:
            total = total + a * b
    return total


def bilinear(u, g: Matrix, v) -> GoldenRat:
    """``u^T g v``."""
    return dot(u, matvec(g, v))


def conj_matrix(m: Matrix) -> Matrix:
    return tuple(tuple(x.conj() for x in row) for row in m)


def det(m: Matrix) -> GoldenRat:
    n = len(m)
    if n == 0:
        return ONE
    a = [list(row) for row in m]
    result = ONE
    for k in range(n):
        pivot = next((i for i in range(k, n) if a[i][k]), None)
        if pivot is None:
            return ZERO
        if pivot != k:
            a[k], a[pivot] = a[pivot], a[k]
            result = -result
        p = a[k][k]
        result = result * p
        inv = p.inverse()
        for i in range(k + 1, n):
            if not a[i][k]:
                continue
            f = a[i][k] * inv
            row_k = a[k]
            a[i] = [a[i][j] - f * row_k[j] if j > k else ZERO for j in range(n)]
    return result


def solve(m: Matrix, b: Sequence[GoldenRat]) -> Vector:
    """Solve ``m x = b`` for square non-singular ``m``."""
    n = len(m)
    aug = [list(m[i]) + [as_golden(b[i])] for i in range(n)]
    for k in range(n):
        pivot = next((i for i in range(k, n) if aug[i][k]), None)
        if pivot is None:
            raise SingularMatrixError("matrix is singular")
        aug[k], aug[pivot] = aug[pivot], aug[k]
        inv = aug[k][k].inverse()
        aug[k] = [x * inv for x in aug[k]]
        for i in range(n):
            if i != k and aug[i][k]:
                f = aug[i][k]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[k])]
    return tuple(aug[i][n] for i in range(n))


def inverse(m: Matrix) -> Matrix:
    n = len(m)
    cols = [solve(m, [ONE if i == j else ZERO for i in range(n)]) for j in range(n)]
    return transpose(tuple(cols))


def minor(m: Matrix, rows: Sequence[int], cols: Sequence[int] | None = None) -> Matrix:
    cols = rows if cols is None else cols
    return tuple(tuple(m[i][j] for j in cols) for i in rows)


def adjugate(m: Matrix) -> Matrix:
    """Classical adjoint, valid for singular matrices too."""
    n = len(m)
    if n == 1:
        return ((ONE,),)
    out = [[ZERO] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            rows = [r for r in range(n) if r != j]
            cols = [c for c in range(n) if c != i]
            cof = det(minor(m, rows, cols))
            out[i][j] = cof if (i + j) % 2 == 0 else -cof
    return tuple(tuple(row) for row in out)


def is_symmetric(m: Matrix) -> bool:
    n = len(m)
    return all(m[i][j] == m[j][i] for i in range(n) for j in range(i + 1, n))


def format_matrix(m: Matrix) -> str:
    cells = [[str(x) for x in row] for row in m]
    width = max((len(c) for row in cells for c in row), default=1)
    return "\n".join("[" + "  ".join(c.rjust(width) for c in row) + "]" for row in cells)
