"""Representations of linear maps of an algebra onto itself.

* ``PairRep``        f(x) = sum_s l_s x r_s
* ``StdComponents``  f(x) = f^{ij} e_i x e_j
* ``CoordMatrix``    f(a^i e_i) = a^i m[i][j] e_j   (row = input coordinate)
* ``GeneratedMap``   f(x) = f_G^{kr} e_k G(x) e_r with G given by its coordinate matrix

Matrices are tuples of tuples of Fractions and serialize as row-major
lists of ``"p/q"`` strings.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

import numpy as np

from . import _exact
from ._exact import Matrix
from .algebra import QUATERNION, AlgebraSpec, Element, format_rational
from .errors import DimensionError, NotRealizable, UnsupportedOperation


@dataclass(frozen=True)
class PairRep:
    pairs: tuple[tuple[Element, Element], ...]

    def __post_init__(self):
        object.__setattr__(self, "pairs", tuple((l, r) for l, r in self.pairs))


@dataclass(frozen=True)
class StdComponents:
    matrix: Matrix

    def __post_init__(self):
        object.__setattr__(self, "matrix", _exact.as_matrix(self.matrix))

    @property
    def dim(self):
        return len(self.matrix)


@dataclass(frozen=True)
class CoordMatrix:
    matrix: Matrix

    def __post_init__(self):
        object.__setattr__(self, "matrix", _exact.as_matrix(self.matrix))

    @property
    def dim(self):
        return len(self.matrix)


@dataclass(frozen=True)
class GeneratedMap:
    generator_matrix: Matrix
    components: Matrix

    def __post_init__(self):
        object.__setattr__(self, "generator_matrix", _exact.as_matrix(self.generator_matrix))
        object.__setattr__(self, "components", _exact.as_matrix(self.components))


Rep = Union[PairRep, StdComponents, CoordMatrix, GeneratedMap]


def _check_square(m: Matrix, n: int, what: str):
    if len(m) != n or any(len(row) != n for row in m):
        raise DimensionError(f"{what} must be {n}x{n}")


def apply(rep: Rep, x: Element, alg: AlgebraSpec | None = None) -> Element:
    if isinstance(rep, CoordMatrix):
        if x.dim != rep.dim:
            raise DimensionError(f"map acts on dimension {rep.dim}, element has {x.dim}")
        return Element(_exact.vec_mat(x.coords, rep.matrix))
    if alg is None:
        raise TypeError(f"applying a {type(rep).__name__} needs the algebra")
    alg._check(x)
    if isinstance(rep, PairRep):
        total = alg.zero()
        for left, right in rep.pairs:
            total = total + alg.mul(alg.mul(left, x), right)
        return total
    if isinstance(rep, StdComponents):
        _check_square(rep.matrix, alg.dim, "standard components")
        return _sandwich(rep.matrix, x, alg)
    if isinstance(rep, GeneratedMap):
        _check_square(rep.components, alg.dim, "generated map components")
        gx = Element(_exact.vec_mat(x.coords, rep.generator_matrix))
        return _sandwich(rep.components, gx, alg)
    raise TypeError(f"not a linear map representation: {rep!r}")


def _sandwich(f: Matrix, x: Element, alg: AlgebraSpec) -> Element:
    total = alg.zero()
    n = alg.dim
    for i in range(n):
        left = None
        for j in range(n):
            if f[i][j]:
                if left is None:
                    left = alg.mul(alg.basis(i), x)
                total = total + alg.mul(left, alg.basis(j)) * f[i][j]
    return total


def pair_to_std(rep: PairRep, alg: AlgebraSpec) -> StdComponents:
    """Expand every pair over the basis: f^{ij} = sum_s l_s^i r_s^j."""
    n = alg.dim
    f = [[Fraction(0)] * n for _ in range(n)]
    for left, right in rep.pairs:
        alg._check(left, right)
        for i, li in enumerate(left.coords):
            if li:
                for j, rj in enumerate(right.coords):
                    f[i][j] += li * rj
    return StdComponents(f)


def std_to_pairs(f: StdComponents, alg: AlgebraSpec) -> PairRep:
    n = alg.dim
    return PairRep(
        tuple(
            (alg.basis(i) * f.matrix[i][j], alg.basis(j))
            for i in range(n)
            for j in range(n)
            if f.matrix[i][j]
        )
    )


def _contraction_table(alg: AlgebraSpec):
    """T[(i, j)][(k, r)] = sum_p B[k][i][p] B[p][r][j]."""
    cached = alg.__dict__.get("_contraction_table")
    if cached is not None:
        return cached
    b = alg.structural_constants
    n = alg.dim
    table = {}
    for i in range(n):
        for j in range(n):
            row = {}
            for k in range(n):
                for r in range(n):
                    s = sum((b[k][i][p] * b[p][r][j] for p in range(n)), Fraction(0))
                    if s:
                        row[(k, r)] = s
            table[(i, j)] = row
    alg.__dict__["_contraction_table"] = table
    return table


def std_to_coord(f: StdComponents, alg: AlgebraSpec) -> CoordMatrix:
    n = alg.dim
    _check_square(f.matrix, n, "standard components")
    table = _contraction_table(alg)
    return CoordMatrix(
        tuple(
            tuple(sum((c * f.matrix[k][r] for (k, r), c in table[(i, j)].items()), Fraction(0)) for j in range(n))
            for i in range(n)
        )
    )


# Quaternion tables.  Keys are (row, column) of the coordinate matrix or of
# the standard components; values list (sign, index pair) of the other side.
_Q_FORWARD = {
    (0, 0): [(1, (0, 0)), (-1, (1, 1)), (-1, (2, 2)), (-1, (3, 3))],
    (1, 1): [(1, (0, 0)), (-1, (1, 1)), (1, (2, 2)), (1, (3, 3))],
    (2, 2): [(1, (0, 0)), (1, (1, 1)), (-1, (2, 2)), (1, (3, 3))],
    (3, 3): [(1, (0, 0)), (1, (1, 1)), (1, (2, 2)), (-1, (3, 3))],
    (0, 1): [(1, (0, 1)), (1, (1, 0)), (1, (2, 3)), (-1, (3, 2))],
    (1, 0): [(-1, (0, 1)), (-1, (1, 0)), (1, (2, 3)), (-1, (3, 2))],
    (2, 3): [(-1, (0, 1)), (1, (1, 0)), (-1, (2, 3)), (-1, (3, 2))],
    (3, 2): [(1, (0, 1)), (-1, (1, 0)), (-1, (2, 3)), (-1, (3, 2))],
    (0, 2): [(1, (0, 2)), (-1, (1, 3)), (1, (2, 0)), (1, (3, 1))],
    (1, 3): [(1, (0, 2)), (-1, (1, 3)), (-1, (2, 0)), (-1, (3, 1))],
    (2, 0): [(-1, (0, 2)), (-1, (1, 3)), (-1, (2, 0)), (1, (3, 1))],
    (3, 1): [(-1, (0, 2)), (-1, (1, 3)), (1, (2, 0)), (-1, (3, 1))],
    (0, 3): [(1, (0, 3)), (1, (1, 2)), (-1, (2, 1)), (1, (3, 0))],
    (1, 2): [(-1, (0, 3)), (-1, (1, 2)), (-1, (2, 1)), (1, (3, 0))],
    (2, 1): [(1, (0, 3)), (-1, (1, 2)), (-1, (2, 1)), (-1, (3, 0))],
    (3, 0): [(-1, (0, 3)), (1, (1, 2)), (-1, (2, 1)), (-1, (3, 0))],
}

# 4 f^{kr} = sum sign * m[i][j]
_Q_INVERSE = {
    (0, 0): [(1, (0, 0)), (1, (1, 1)), (1, (2, 2)), (1, (3, 3))],
    (1, 1): [(-1, (0, 0)), (-1, (1, 1)), (1, (2, 2)), (1, (3, 3))],
    (2, 2): [(-1, (0, 0)), (1, (1, 1)), (-1, (2, 2)), (1, (3, 3))],
    (3, 3): [(-1, (0, 0)), (1, (1, 1)), (1, (2, 2)), (-1, (3, 3))],
    (1, 0): [(-1, (1, 0)), (1, (0, 1)), (-1, (3, 2)), (1, (2, 3))],
    (0, 1): [(-1, (1, 0)), (1, (0, 1)), (1, (3, 2)), (-1, (2, 3))],
    (3, 2): [(-1, (1, 0)), (-1, (0, 1)), (-1, (3, 2)), (-1, (2, 3))],
    (2, 3): [(1, (1, 0)), (1, (0, 1)), (-1, (3, 2)), (-1, (2, 3))],
    (2, 0): [(-1, (2, 0)), (1, (3, 1)), (1, (0, 2)), (-1, (1, 3))],
    (3, 1): [(1, (2, 0)), (-1, (3, 1)), (1, (0, 2)), (-1, (1, 3))],
    (0, 2): [(-1, (2, 0)), (-1, (3, 1)), (1, (0, 2)), (1, (1, 3))],
    (1, 3): [(-1, (2, 0)), (-1, (3, 1)), (-1, (0, 2)), (-1, (1, 3))],
    (3, 0): [(-1, (3, 0)), (-1, (2, 1)), (1, (1, 2)), (1, (0, 3))],
    (2, 1): [(-1, (3, 0)), (-1, (2, 1)), (-1, (1, 2)), (-1, (0, 3))],
    (1, 2): [(1, (3, 0)), (-1, (2, 1)), (-1, (1, 2)), (1, (0, 3))],
    (0, 3): [(-1, (3, 0)), (1, (2, 1)), (-1, (1, 2)), (1, (0, 3))],
}


def _apply_table(table, source: Matrix, scale: Fraction) -> Matrix:
    out = [[Fraction(0)] * 4 for _ in range(4)]
    for (a, b), terms in table.items():
        out[a][b] = scale * sum((s * source[i][j] for s, (i, j) in terms), Fraction(0))
    return tuple(tuple(row) for row in out)


def quaternion_std_to_coord(f: StdComponents) -> CoordMatrix:
    """The sixteen closed-form quaternion relations, coordinates from components."""
    return CoordMatrix(_apply_table(_Q_FORWARD, f.matrix, Fraction(1)))


def quaternion_coord_to_std(m: CoordMatrix) -> StdComponents:
    """The four explicit 4x4 inversions, components from coordinates."""
    return StdComponents(_apply_table(_Q_INVERSE, m.matrix, Fraction(1, 4)))


def quaternion_relations_report(m: CoordMatrix, f: StdComponents) -> list[dict]:
    """Check all 32 closed-form relations between a quaternion coordinate
    matrix and standard components; one record per relation."""
    forward = quaternion_std_to_coord(f).matrix
    inverse = quaternion_coord_to_std(m).matrix
    checks = []
    for a, b in _Q_FORWARD:
        checks.append(
            {
                "name": f"coord[{a}][{b}] from components",
                "pass": forward[a][b] == m.matrix[a][b],
                "detail": f"{format_rational(forward[a][b])} vs {format_rational(m.matrix[a][b])}",
            }
        )
    for a, b in _Q_INVERSE:
        checks.append(
            {
                "name": f"component[{a}][{b}] from coordinates",
                "pass": inverse[a][b] == f.matrix[a][b],
                "detail": f"{format_rational(inverse[a][b])} vs {format_rational(f.matrix[a][b])}",
            }
        )
    return checks


@dataclass(frozen=True)
class CRResult:
    satisfied: bool
    residuals: tuple[Fraction, Fraction]

    def __bool__(self):
        return self.satisfied


def cauchy_riemann_check(m: CoordMatrix) -> CRResult:
    """Residuals (m00 - m11, m01 + m10); both zero iff the real-linear map
    of the plane is complex-linear."""
    if m.dim != 2 or any(len(r) != 2 for r in m.matrix):
        raise DimensionError("the Cauchy-Riemann check applies to 2x2 coordinate matrices")
    a = m.matrix
    residuals = (a[0][0] - a[1][1], a[0][1] + a[1][0])
    return CRResult(not any(residuals), residuals)


def _is_quaternion(alg: AlgebraSpec) -> bool:
    return alg.dim == 4 and alg.structural_constants == QUATERNION.structural_constants


def coord_to_std(m: CoordMatrix, alg: AlgebraSpec) -> StdComponents:
    n = alg.dim
    _check_square(m.matrix, n, "coordinate matrix")
    if _is_quaternion(alg):
        return quaternion_coord_to_std(m)
    if alg.name == "complex":
        cr = cauchy_riemann_check(m)
        if not cr.satisfied:
            raise NotRealizable(
                "coordinate matrix violates the Cauchy-Riemann equations", residuals=cr.residuals
            )
    table = _contraction_table(alg)
    unknowns = [(k, r) for k in range(n) for r in range(n)]
    system = [[table[(i, j)].get(u, Fraction(0)) for u in unknowns] for i in range(n) for j in range(n)]
    rhs = [m.matrix[i][j] for i in range(n) for j in range(n)]
    solution, residuals = _exact.solve_canonical(system, rhs)
    if solution is None:
        raise NotRealizable("coordinate matrix is not induced by any standard components", residuals)
    return StdComponents(tuple(tuple(solution[k * n : (k + 1) * n]) for k in range(n)))


def compose(g: PairRep, f: PairRep, alg: AlgebraSpec) -> PairRep:
    """Pairs of g o f: (g_l f_l, f_r g_r) for every pair of pairs."""
    return PairRep(
        tuple(
            (alg.mul(gl, fl), alg.mul(fr, gr))
            for gl, gr in g.pairs
            for fl, fr in f.pairs
        )
    )


def compose_std(g: StdComponents, f: StdComponents, alg: AlgebraSpec) -> StdComponents:
    """h^{pr} = g^{ij} f^{kl} B[i][k][p] B[l][j][r]."""
    n = alg.dim
    _check_square(g.matrix, n, "standard components")
    _check_square(f.matrix, n, "standard components")
    b = alg.structural_constants
    h = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            gij = g.matrix[i][j]
            if not gij:
                continue
            for k in range(n):
                for l in range(n):
                    fkl = f.matrix[k][l]
                    if not fkl:
                        continue
                    w = gij * fkl
                    for p in range(n):
                        if b[i][k][p]:
                            for r in range(n):
                                if b[l][j][r]:
                                    h[p][r] += w * b[i][k][p] * b[l][j][r]
    return StdComponents(h)


def coord_compose(g: CoordMatrix, f: CoordMatrix) -> CoordMatrix:
    """Coordinate matrix of g o f; coordinates are row vectors, so f comes first."""
    return CoordMatrix(_exact.mat_mul(f.matrix, g.matrix))


def transform_coords(m: CoordMatrix, a: Sequence[Sequence]) -> CoordMatrix:
    """Coordinates of the same map in the basis e'_i = A[i][j] e_j: A m A^-1."""
    a = _exact.as_matrix(a)
    _check_square(a, m.dim, "basis change")
    return CoordMatrix(_exact.mat_mul(_exact.mat_mul(a, m.matrix), _exact.mat_inv(a)))


def generated_coords(gm: GeneratedMap, alg: AlgebraSpec) -> CoordMatrix:
    """m[i][j] = G[i][l] f_G^{kr} B[k][l][p] B[p][r][j]."""
    n = alg.dim
    _check_square(gm.generator_matrix, n, "generator matrix")
    _check_square(gm.components, n, "generated map components")
    # contraction over l reuses the G = identity table
    base = std_to_coord(StdComponents(gm.components), alg).matrix
    return CoordMatrix(_exact.mat_mul(gm.generator_matrix, base))


def map_norm(m: CoordMatrix, alg: AlgebraSpec | None = None, rtol: float = 1e-9, max_iter: int = 100_000) -> float:
    """sup |f(u)| over |u| = 1 for the Euclidean absolute value.

    Power iteration on M^T M; stops once successive estimates agree to
    well below ``rtol``.
    """
    if alg is not None and (
        alg.norm_signature is None or any(s != 1 for s in alg.norm_signature)
    ):
        raise UnsupportedOperation(f"map norm needs a Euclidean absolute value; {alg.name} has none")
    a = np.array([[float(v) for v in row] for row in m.matrix])
    gram = a @ a.T  # u -> u M for row vectors, so |uM|^2 = u (M M^T) u^T
    if not np.any(gram):
        return 0.0
    n = gram.shape[0]
    v = np.ones(n) + np.arange(1, n + 1) / (7.0 * n)
    v /= np.linalg.norm(v)
    estimate = 0.0
    for _ in range(max_iter):
        w = gram @ v
        norm_w = np.linalg.norm(w)
        if norm_w == 0.0:
            # started in the kernel; restart along a column of the Gram matrix
            v = gram[:, int(np.argmax(np.abs(gram).sum(axis=0)))]
            v = v / np.linalg.norm(v)
            continue
        v = w / norm_w
        new = float(v @ gram @ v)
        if abs(new - estimate) <= rtol * 1e-4 * max(new, 1e-300):
            estimate = new
            break
        estimate = new
    return float(np.sqrt(max(estimate, 0.0)))


# serialization --------------------------------------------------------------


def matrix_to_json(m: Matrix) -> list[list[str]]:
    return [[format_rational(v) for v in row] for row in m]


def matrix_from_json(data) -> Matrix:
    if isinstance(data, str):
        data = json.loads(data)
    return _exact.as_matrix([[Fraction(v) for v in row] for row in data])
