import json
import random
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncq.algebra import COMPLEX, QUATERNION, AlgebraSpec, Element, efab
from ncq.errors import DimensionError, NotRealizable, SingularTransform, UnsupportedOperation
from ncq.linear_maps import (
    CoordMatrix,
    GeneratedMap,
    PairRep,
    StdComponents,
    apply,
    cauchy_riemann_check,
    compose,
    compose_std,
    coord_compose,
    coord_to_std,
    generated_coords,
    map_norm,
    matrix_from_json,
    matrix_to_json,
    pair_to_std,
    quaternion_relations_report,
    std_to_coord,
    std_to_pairs,
    transform_coords,
)
from strategies import elements, hamilton, random_element, small_rationals

Q = QUATERNION
one, i, j, k = (Q.basis(n) for n in range(4))


def std_matrices(n):
    return st.lists(st.lists(small_rationals, min_size=n, max_size=n), min_size=n, max_size=n).map(StdComponents)


def brute_coords(f: StdComponents) -> list[list[Fraction]]:
    # evaluate sum f^{ij} e_i x e_j at each basis vector with an independent product
    basis = [Q.basis(n) for n in range(4)]
    rows = []
    for x in basis:
        total = Q.zero()
        for a in range(4):
            for b in range(4):
                if f.matrix[a][b]:
                    total = total + hamilton(hamilton(basis[a], x), basis[b]) * f.matrix[a][b]
        rows.append(list(total.coords))
    return rows


def diag(*d):
    return [[d[r] if r == c else 0 for c in range(len(d))] for r in range(len(d))]


def test_apply_examples():
    ident = StdComponents(diag(1, 0, 0, 0))
    x = Q.element(1, 2, 3, 4)
    assert apply(ident, x, Q) == x
    assert apply(PairRep([(i, j)]), one + k, Q) == hamilton(hamilton(i, one + k), j)
    conj_m = CoordMatrix(diag(1, -1, -1, -1))
    assert apply(conj_m, x) == Q.conj(x)


def test_apply_dimension_mismatch():
    with pytest.raises(DimensionError):
        apply(CoordMatrix(diag(1, 1)), one)
    with pytest.raises(DimensionError):
        apply(StdComponents(diag(1, 1)), one, Q)


def test_std_to_coord_examples():
    assert std_to_coord(StdComponents(diag(1, 0)), COMPLEX).matrix == CoordMatrix(diag(1, 1)).matrix
    half = Fraction(-1, 2)
    assert std_to_coord(StdComponents(diag(half, half, half, half)), Q).matrix == CoordMatrix(diag(1, -1, -1, -1)).matrix
    assert std_to_coord(StdComponents(diag(0, 0, 0, 0)), Q).matrix == CoordMatrix(diag(0, 0, 0, 0)).matrix


@settings(max_examples=60)
@given(std_matrices(4))
def test_std_to_coord_matches_brute_force(f):
    assert [list(r) for r in std_to_coord(f, Q).matrix] == brute_coords(f)


@settings(max_examples=60)
@given(std_matrices(4), elements())
def test_coord_matrix_reproduces_map(f, x):
    assert apply(std_to_coord(f, Q), x) == apply(f, x, Q)


def test_coord_to_std_examples():
    assert coord_to_std(CoordMatrix(diag(1, 1, 1, 1)), Q).matrix == StdComponents(diag(1, 0, 0, 0)).matrix
    h = Fraction(-1, 2)
    assert coord_to_std(CoordMatrix(diag(1, -1, -1, -1)), Q).matrix == StdComponents(diag(h, h, h, h)).matrix
    # x -> x i over the complex numbers
    assert coord_to_std(CoordMatrix([[0, 1], [-1, 0]]), COMPLEX).matrix == StdComponents([[0, 1], [0, 0]]).matrix


@settings(max_examples=100)
@given(std_matrices(4))
def test_quaternion_round_trip(f):
    assert coord_to_std(std_to_coord(f, Q), Q) == f


@settings(max_examples=100)
@given(std_matrices(4))
def test_quaternion_relations_all_hold(f):
    report = quaternion_relations_report(std_to_coord(f, Q), f)
    assert len(report) == 32 and all(r["pass"] for r in report)


@given(std_matrices(2))
def test_complex_image_is_cauchy_riemann(f):
    m = std_to_coord(f, COMPLEX)
    assert cauchy_riemann_check(m).satisfied
    back = coord_to_std(m, COMPLEX)
    assert std_to_coord(back, COMPLEX) == m
    # canonical choice: second row of components is zero
    assert back.matrix[1] == (0, 0)


@given(small_rationals, small_rationals)
def test_every_cr_matrix_has_preimage(a, b):
    m = CoordMatrix([[a, b], [-b, a]])
    assert std_to_coord(coord_to_std(m, COMPLEX), COMPLEX) == m


def test_cauchy_riemann_examples():
    assert cauchy_riemann_check(CoordMatrix(diag(1, 1))).satisfied
    bad = cauchy_riemann_check(CoordMatrix(diag(1, -1)))
    assert not bad.satisfied and bad.residuals == (2, 0)
    assert cauchy_riemann_check(CoordMatrix([[0, 1], [-1, 0]])).satisfied
    with pytest.raises(DimensionError):
        cauchy_riemann_check(CoordMatrix(diag(1, 1, 1, 1)))


def test_conjugation_not_realizable_over_complex():
    with pytest.raises(NotRealizable) as err:
        coord_to_std(CoordMatrix(diag(1, -1)), COMPLEX)
    assert tuple(err.value.residuals) == (2, 0)


def dual_numbers() -> AlgebraSpec:
    # 1, e with e^2 = 0: commutative, so e_i x e_j only gives multiplications
    b = [[[1, 0], [0, 1]], [[0, 1], [0, 0]]]
    return AlgebraSpec(name="dual", dim=2, structural_constants=b, unit=(1, 0))


def test_degenerate_algebra_reports_not_realizable():
    alg = dual_numbers()
    with pytest.raises(NotRealizable) as err:
        coord_to_std(CoordMatrix(diag(1, -1)), alg)
    assert any(r != 0 for r in err.value.residuals)
    m = std_to_coord(StdComponents([[2, 1], [3, 0]]), alg)
    assert std_to_coord(coord_to_std(m, alg), alg) == m


def test_split_quaternions_round_trip():
    alg = efab(1, 1)
    f = StdComponents([[1, 0, 2, 0], [0, 0, 0, 1], [0, 3, 0, 0], [1, 0, 0, 0]])
    assert coord_to_std(std_to_coord(f, alg), alg) == f


def test_compose_example():
    f = StdComponents([[0, 0, 0, 0], [1, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])  # i x
    g = StdComponents([[0, 0, 1, 0], [0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0]])  # x j
    h = compose_std(g, f, Q)
    expected = [[0] * 4 for _ in range(4)]
    expected[1][2] = 1
    assert h == StdComponents(expected)


def test_compose_identity():
    ident = StdComponents(diag(1, 0, 0, 0))
    f = StdComponents([[1, 2, 0, 0], [0, 0, 3, 0], [0, 0, 0, 0], [0, 0, 0, Fraction(1, 2)]])
    assert compose_std(ident, f, Q) == f
    assert compose_std(f, ident, Q) == f


@settings(max_examples=40)
@given(std_matrices(4), std_matrices(4), elements())
def test_compose_std_evaluates_composition(g, f, x):
    h = compose_std(g, f, Q)
    assert apply(h, x, Q) == apply(g, apply(f, x, Q), Q)
    assert std_to_coord(h, Q) == coord_compose(std_to_coord(g, Q), std_to_coord(f, Q))


def test_compose_pairs():
    rng = random.Random(5)
    for _ in range(20):
        g = PairRep([(random_element(rng), random_element(rng)) for _ in range(2)])
        f = PairRep([(random_element(rng), random_element(rng)) for _ in range(3)])
        x = random_element(rng)
        h = compose(g, f, Q)
        assert apply(h, x, Q) == apply(g, apply(f, x, Q), Q)
        assert pair_to_std(h, Q) == compose_std(pair_to_std(g, Q), pair_to_std(f, Q), Q)


def test_pairs_to_std_and_back():
    rng = random.Random(6)
    p = PairRep([(random_element(rng), random_element(rng)) for _ in range(3)])
    f = pair_to_std(p, Q)
    x = random_element(rng)
    assert apply(std_to_pairs(f, Q), x, Q) == apply(p, x, Q)


def test_transform_coords():
    m = CoordMatrix([[1, 2, 0, 0], [0, 1, 3, 0], [1, 0, 0, 1], [0, 0, 2, 5]])
    eye = diag(1, 1, 1, 1)
    assert transform_coords(m, eye) == m
    a = [[1, 1, 0, 0], [0, 1, 0, 2], [0, 0, 1, 0], [3, 0, 0, 1]]
    from ncq._exact import mat_inv, vec_mat

    moved = transform_coords(m, a)
    assert transform_coords(moved, mat_inv(a)) == m
    rng = random.Random(8)
    a_inv = mat_inv(a)
    for _ in range(10):
        x = random_element(rng)
        # the same vector in new coordinates is x A^-1; images must correspond
        new_x = Element(vec_mat(x.coords, a_inv))
        assert Element(vec_mat(apply(moved, new_x).coords, a)) == apply(m, x)


def test_transform_singular():
    with pytest.raises(SingularTransform):
        transform_coords(CoordMatrix(diag(1, 1)), [[1, 1], [1, 1]])


def test_generated_coords():
    f = StdComponents([[1, 0], [0, 0]])
    assert generated_coords(GeneratedMap(diag(1, 1), f.matrix), COMPLEX) == std_to_coord(f, COMPLEX)
    conj_gen = generated_coords(GeneratedMap(diag(1, -1), f.matrix), COMPLEX).matrix
    assert conj_gen[0][0] == -conj_gen[1][1] and conj_gen[0][1] == conj_gen[1][0]
    rng = random.Random(9)
    fq = StdComponents([[Fraction(rng.randint(-3, 3)) for _ in range(4)] for _ in range(4)])
    assert generated_coords(GeneratedMap(diag(1, 1, 1, 1), fq.matrix), Q) == std_to_coord(fq, Q)
    g = [[1, 0, 2, 0], [0, -1, 0, 0], [0, 0, 1, 0], [1, 0, 0, 1]]
    gm = GeneratedMap(g, fq.matrix)
    for _ in range(5):
        x = random_element(rng)
        assert apply(generated_coords(gm, Q), x) == apply(gm, x, Q)


def test_map_norm_examples():
    assert map_norm(CoordMatrix(diag(1, 1, 1, 1)), Q) == pytest.approx(1.0, rel=1e-12)
    assert map_norm(CoordMatrix(diag(2, 2, 2, 2)), Q) == pytest.approx(2.0, rel=1e-12)
    ixj = std_to_coord(StdComponents([[0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 0], [0, 0, 0, 0]]), Q)
    assert map_norm(ixj, Q) == pytest.approx(1.0, rel=1e-12)
    with pytest.raises(UnsupportedOperation):
        map_norm(ixj, efab(-2, -1))


def test_map_norm_matches_svd_and_bounds_samples():
    rng = np.random.default_rng(11)
    for _ in range(10):
        m = [[Fraction(int(v)) for v in row] for row in rng.integers(-5, 6, size=(4, 4))]
        est = map_norm(CoordMatrix(m), Q)
        a = np.array(m, dtype=float)
        assert est == pytest.approx(np.linalg.norm(a, 2), rel=1e-9)
        u = rng.normal(size=(10_000, 4))
        u /= np.linalg.norm(u, axis=1, keepdims=True)
        images = np.linalg.norm(u @ a, axis=1)
        assert images.max() <= est * (1 + 1e-12)


def test_json_round_trip():
    m = ((Fraction(1, 2), Fraction(-3)), (Fraction(0), Fraction(7, 5)))
    text = json.dumps(matrix_to_json(m))
    assert json.loads(text) == [["1/2", "-3"], ["0", "7/5"]]
    assert matrix_from_json(text) == m
