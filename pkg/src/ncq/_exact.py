"""Exact rational helpers: small dense matrices of Fractions and integer
tensors with a shared denominator.

The tensor type backs coordinate expansion, where thousands of words of
length up to six have to be summed exactly.  Entries live in an ``int64``
array while a float upper bound says the result cannot overflow; past that
the array is promoted to Python integers (``dtype=object``).
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Sequence

import numpy as np

from .errors import SingularTransform

_LIMIT = float(2**62)

Matrix = tuple[tuple[Fraction, ...], ...]


def frac(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("floats are not exact; pass a Fraction, int or 'p/q' string")
    return Fraction(value)


def as_matrix(rows) -> Matrix:
    return tuple(tuple(frac(v) for v in row) for row in rows)


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


def zeros(n: int, m: int | None = None) -> Matrix:
    return tuple(tuple(Fraction(0) for _ in range(n if m is None else m)) for _ in range(n))


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    cols = list(zip(*b))
    return tuple(tuple(sum((x * y for x, y in zip(row, col)), Fraction(0)) for col in cols) for row in a)


def vec_mat(v: Sequence[Fraction], m: Matrix) -> tuple[Fraction, ...]:
    """Row vector times matrix."""
    return tuple(sum((v[i] * m[i][j] for i in range(len(v))), Fraction(0)) for j in range(len(m[0])))


def mat_inv(a: Matrix) -> Matrix:
    a = as_matrix(a)
    n = len(a)
    if any(len(row) != n for row in a):
        raise SingularTransform("matrix is not square")
    work = [list(row) + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((r for r in range(col, n) if work[r][col] != 0), None)
        if pivot is None:
            raise SingularTransform("matrix is singular")
        work[col], work[pivot] = work[pivot], work[col]
        p = work[col][col]
        work[col] = [v / p for v in work[col]]
        for r in range(n):
            if r != col and work[r][col] != 0:
                factor = work[r][col]
                work[r] = [v - factor * w for v, w in zip(work[r], work[col])]
    return tuple(tuple(row[n:]) for row in work)


def solve_canonical(system: Sequence[Sequence[Fraction]], rhs: Sequence[Fraction]):
    """Solve ``system @ u = rhs`` by Gauss-Jordan elimination.

    Pivots are taken left to right, so the free unknowns are the rightmost
    non-pivot columns; they are set to zero.  Returns ``(solution, residuals)``
    where ``residuals`` lists the right-hand sides of the inconsistent
    ``0 = r`` rows (empty when the system is solvable, and then
    ``solution`` is not None).
    """
    rows = [list(map(frac, row)) + [frac(b)] for row, b in zip(system, rhs)]
    n_unknowns = len(rows[0]) - 1 if rows else 0
    pivots = []
    r = 0
    for col in range(n_unknowns):
        pivot = next((i for i in range(r, len(rows)) if rows[i][col] != 0), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        p = rows[r][col]
        rows[r] = [v / p for v in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] != 0:
                factor = rows[i][col]
                rows[i] = [v - factor * w for v, w in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    residuals = [row[-1] for row in rows[r:] if row[-1] != 0]
    if residuals:
        return None, residuals
    solution = [Fraction(0)] * n_unknowns
    for i, col in enumerate(pivots):
        solution[col] = rows[i][-1]
    return solution, []


# ---------------------------------------------------------------------------
# integer tensors with a common denominator


def _bound(arr: np.ndarray) -> float:
    if arr.size == 0:
        return 0.0
    if arr.dtype == object:
        return float(max(abs(int(v)) for v in arr.ravel()))
    # entries stay below 2**62, so abs cannot overflow
    return float(max(arr.max(), -arr.min()))


def _promote(arr: np.ndarray) -> np.ndarray:
    return arr.astype(object) if arr.dtype != object else arr


def _normalize_dtype(arr: np.ndarray) -> np.ndarray:
    if arr.dtype == object and _bound(arr) < _LIMIT:
        return arr.astype(np.int64)
    return arr


def scaled_vector(values: Sequence[Fraction]) -> tuple[np.ndarray, int]:
    """Numerators over the least common denominator of ``values``."""
    den = 1
    for v in values:
        den = lcm(den, v.denominator)
    nums = [v.numerator * (den // v.denominator) for v in values]
    arr = np.array(nums, dtype=object)
    return _normalize_dtype(arr), den


def checked_add(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if a.dtype == object or b.dtype == object or _bound(a) + _bound(b) >= _LIMIT:
        return _promote(a) + _promote(b)
    return a + b


def checked_scale(a: np.ndarray, k: int) -> np.ndarray:
    if k == 1:
        return a
    if a.dtype == object or _bound(a) * abs(k) >= _LIMIT:
        return _promote(a) * k
    return a * k


def checked_tensordot(a: np.ndarray, b: np.ndarray, axes) -> np.ndarray:
    """``np.tensordot`` that never silently wraps around."""
    if a.dtype != object and b.dtype != object:
        bound = np.tensordot(np.abs(a.astype(float)), np.abs(b.astype(float)), axes=axes)
        if bound.size == 0 or float(np.max(bound)) < _LIMIT:
            return np.tensordot(a, b, axes=axes)
    return np.tensordot(_promote(a), _promote(b), axes=axes)


def array_gcd(a: np.ndarray) -> int:
    if a.size == 0:
        return 0
    if a.dtype != object:
        return int(np.gcd.reduce(np.abs(a).ravel()))
    g = 0
    for v in a.ravel():
        g = gcd(g, int(v))
        if g == 1:
            break
    return g
