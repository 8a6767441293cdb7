import json
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ncq import cli
from ncq.algebra import COMPLEX, QUATERNION
from ncq.errors import ParseError, SemanticError, UnsupportedOperation
from ncq.nc_poly import NcPoly, eval_poly, poly_mul, semantic_eq
from ncq.parser import (
    Conj,
    Literal,
    Neg,
    Power,
    Product,
    Sum,
    Var,
    parse,
    parse_element,
    parse_poly,
    to_text,
)

Q = QUATERNION
one, i, j, k = (Q.basis(n) for n in range(4))


def test_element_literal():
    assert parse_element("1+2i-3j+1/2k", Q) == Q.element(1, 2, -3, Fraction(1, 2))
    assert parse_element("-(i*j)", Q) == -k
    assert parse_element("(1+i)^2", Q) == i * 2


def test_coefficient_must_touch_unit():
    assert parse("2i") == Literal(Fraction(2), "i")
    with pytest.raises(ParseError):
        parse("2 i")


def test_precedence():
    assert parse("x*h^2") == Product((Var("x"), Power(Var("h"), 2)))
    assert parse("-x^2") == Neg(Power(Var("x"), 2))
    assert parse("x - h + 1") == Sum(((1, Var("x")), (-1, Var("h")), (1, Literal(Fraction(1))))) 


def test_polynomial_meaning():
    p = parse_poly("i*x*j + x^2 - conj(x)", Q)
    x = Q.element(1, 2, 3, 4)
    assert eval_poly(p, {"x": x}, Q) == Q.product([i, x, j]) + Q.mul(x, x) - Q.conj(x)


@pytest.mark.parametrize(
    "text, line, col",
    [("x +", 1, 4), ("x * * h", 1, 5), ("x\n+ )", 2, 3), ("foo", 1, 1), ("x ^ h", 1, 5), ("1/0", 1, 3), ("x $ h", 1, 3)],
)
def test_errors_carry_position(text, line, col):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert (info.value.line, info.value.column) == (line, col)


def test_alphabet_limit_is_a_parse_error():
    with pytest.raises(ParseError):
        parse("h33")


def test_negative_power_is_semantic_error():
    ast = parse("x^-1")
    assert ast == Power(Var("x"), -1)
    with pytest.raises(SemanticError):
        parse_poly("x^-1", Q)


def test_conj_needs_quaternion():
    with pytest.raises(UnsupportedOperation):
        parse_poly("conj(x)", COMPLEX)


def test_element_rejects_variables():
    with pytest.raises(SemanticError):
        parse_element("x + 1", Q)


variables = st.sampled_from(["x", "y", "h", "h1", "h2"]).map(Var)
literals = st.builds(
    Literal,
    st.fractions(min_value=0, max_value=20, max_denominator=6),
    st.sampled_from(["1", "i", "j", "k"]),
)


def _extend(children):
    non_product = children.filter(lambda n: not isinstance(n, Product))
    return st.one_of(
        children.map(Neg),
        children.map(Conj),
        st.builds(Power, children, st.integers(-3, 4)),
        st.lists(non_product, min_size=2, max_size=3).map(tuple).map(Product),
        st.lists(st.tuples(st.sampled_from([1, -1]), children), min_size=2, max_size=3).map(tuple).map(Sum),
    )


asts = st.recursive(st.one_of(variables, literals), _extend, max_leaves=8)


@settings(max_examples=200)
@given(asts)
def test_print_parse_round_trip(ast):
    assert parse(to_text(ast)) == ast


@settings(max_examples=50, deadline=None)
@given(asts.filter(lambda a: "^-" not in to_text(a)))
def test_printing_keeps_polynomial(ast):
    text = to_text(ast)
    assert semantic_eq(parse_poly(text, Q), parse_poly(to_text(parse(text)), Q), Q)


# ---------------------------------------------------------------------------
# command line


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_derive_square(capsys):
    code, out, _ = run(capsys, "derive", "x^2")
    assert code == 0
    assert out.splitlines()[0] == "x*h1 + h1*x"


def test_derive_algorithms_agree(capsys):
    _, a, _ = run(capsys, "derive", "--order", "2", "i*x*j*x^2")
    _, b, _ = run(capsys, "derive", "--order", "2", "--algorithm", "injections", "i*x*j*x^2")
    pa = parse_poly(a.splitlines()[0], Q)
    pb = parse_poly(b.splitlines()[0], Q)
    assert semantic_eq(pa, pb, Q)


def test_json_schema(capsys):
    code, out, _ = run(capsys, "jacobian", "--json", "--at", "x=i", "x^2")
    doc = json.loads(out)
    assert code == 0
    assert set(doc) == {"algebra", "canonical", "coordinates", "checks"}
    assert doc["algebra"] == "quaternion"
    assert doc["coordinates"][1] == ["-2", "0", "0", "0"]
    assert all(set(c) == {"name", "pass", "detail"} for c in doc["checks"])


def test_solve_ode_cli(capsys):
    code, out, _ = run(capsys, "solve-ode", "--rhs", "h*x^2 + x*h*x + x^2*h")
    assert code == 0 and out.splitlines()[0] == "y = x^3"
    code, out, _ = run(capsys, "solve-ode", "--rhs", "3*h*x^2")
    assert code == 3 and "order 2" in out
    code, out, _ = run(capsys, "solve-ode", "--rhs", "3*h*x^2", "--algebra", "complex")
    assert code == 0 and "y = x^3" in out


def test_solve_ode_truncated(capsys):
    code, _, _ = run(capsys, "solve-ode", "--rhs", "h*x^2 + x*h*x + x^2*h", "--max-order", "1")
    assert code == 3


def test_solve_ode_bad_rhs(capsys):
    code, _, err = run(capsys, "solve-ode", "--rhs", "x^2")
    assert code == 2 and "exactly once" in err


def test_taylor_cli(capsys):
    code, out, _ = run(capsys, "taylor", "--at", "x=1+i", "x^3")
    assert code == 0
    assert "assembled: x^3" in out


def test_exp_cli(capsys):
    code, out, _ = run(capsys, "exp", "--json", "--at", "i")
    doc = json.loads(out)
    assert code == 0
    assert abs(float(doc["coordinates"][0][1]) - 0.8414709848078965) < 1e-12


def test_check_cr(capsys):
    code, _, _ = run(capsys, "check-cr", "--algebra", "complex", "--matrix", "1,2;-2,1")
    assert code == 0
    code, out, _ = run(capsys, "check-cr", "--algebra", "complex", "--matrix", "1,0;0,-1")
    assert code == 1 and "(2, 0)" in out


def test_exit_codes(capsys):
    assert run(capsys, "derive", "x +")[0] == 2
    assert run(capsys, "derive", "x^-1")[0] == 2
    assert run(capsys, "derive", "--algebra", "complex", "conj(x)")[0] == 4
    assert run(capsys, "derive", "--algebra", "octonion", "x")[0] == 2


def test_parse_error_goes_to_stderr(capsys):
    code, out, err = run(capsys, "derive", "x * * h")
    assert code == 2 and out == ""
    assert "line 1, column 5" in err


def test_default_algebra_from_environment(capsys, monkeypatch):
    monkeypatch.setenv("NCQ_ALGEBRA", "complex")
    code, out, _ = run(capsys, "derive", "--json", "x^2")
    assert json.loads(out)["algebra"] == "complex"


def test_norm(capsys):
    code, out, _ = run(capsys, "norm", "--coord-matrix", "3,0;0,4", "--algebra", "complex")
    assert code == 0
    assert abs(float(out.split("=")[1]) - 4.0) < 1e-9


def test_verify_table_reproducible(capsys):
    code, a, _ = run(capsys, "verify-table", "--points", "10")
    assert code == 0
    _, b, _ = run(capsys, "verify-table", "--points", "10")
    assert a == b
    _, c, _ = run(capsys, "verify-table", "--points", "10", "--seed", "7")
    assert c != a
