"""Expression front-end: text -> AST -> NcPoly (or a float callable).

Grammar::

    expr    := ["-"] term { ("+" | "-") term }
    term    := unary { "*" unary }
    unary   := "-" unary | factor
    factor  := primary [ "^" ["-"] integer ]
    primary := "x" | "y" | "h" [digits] | literal | "(" expr ")" | "conj" "(" expr ")"
    literal := rational [unit] | unit
    unit    := "1" | "i" | "j" | "k"
    rational:= integer [ "/" positive-integer ]

A unit written directly after a rational (``2i``, ``1/2k``) is a
coefficient literal.  Whitespace is insignificant elsewhere.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Mapping

import numpy as np

from .algebra import QUATERNION, AlgebraSpec, Element, format_rational
from .errors import ParseError, SemanticError, UnsupportedOperation
from .nc_poly import NcPoly, check_variable, eval_poly, poly_mul, sum_polys
from .numeric import FloatOps, as_float

UNITS = ("i", "j", "k")


# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Literal:
    coeff: Fraction
    unit: str = "1"  # "1", "i", "j" or "k"


@dataclass(frozen=True)
class Neg:
    arg: object


@dataclass(frozen=True)
class Sum:
    terms: tuple  # ((sign, node), ...)


@dataclass(frozen=True)
class Product:
    factors: tuple


@dataclass(frozen=True)
class Power:
    base: object
    exponent: int


@dataclass(frozen=True)
class Conj:
    arg: object


Node = Var | Literal | Neg | Sum | Product | Power | Conj


# ---------------------------------------------------------------------------
# tokens


@dataclass(frozen=True)
class Token:
    kind: str  # "int", "name", "op", "end"
    text: str
    pos: int
    line: int
    col: int

    @property
    def end(self) -> int:
        return self.pos + len(self.text)


_TOKEN_RE = re.compile(r"\s*(?:(?P<int>[0-9]+)|(?P<name>[a-z][a-z0-9]*)|(?P<op>[-+*/^()]))")


def _line_col(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    start = text.rfind("\n", 0, pos) + 1
    return line, pos - start + 1


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos == len(text):
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == pos:
            line, col = _line_col(text, pos)
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        start = m.start(kind)
        tokens.append(Token(kind, m.group(kind), start, *_line_col(text, start)))
        pos = m.end()
    line, col = _line_col(text, len(text))
    tokens.append(Token("end", "", len(text), line, col))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def error(self, message: str, tok: Token | None = None):
        tok = tok or self.tok
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"{message}, found {found}", tok.line, tok.col)

    def accept(self, text: str) -> Token | None:
        if self.tok.kind in ("op", "name") and self.tok.text == text:
            t = self.tok
            self.i += 1
            return t
        return None

    def expect(self, text: str) -> Token:
        t = self.accept(text)
        if t is None:
            self.error(f"expected {text!r}")
        return t

    def parse(self):
        node = self.expr()
        if self.tok.kind != "end":
            self.error("unexpected input")
        return node

    def expr(self):
        terms = []
        sign = -1 if self.accept("-") else 1
        terms.append((sign, self.term()))
        while True:
            if self.accept("+"):
                terms.append((1, self.term()))
            elif self.accept("-"):
                terms.append((-1, self.term()))
            else:
                break
        if len(terms) == 1 and terms[0][0] == 1:
            return terms[0][1]
        if len(terms) == 1:
            return Neg(terms[0][1])
        return Sum(tuple(terms))

    def term(self):
        factors = [self.unary()]
        while self.accept("*"):
            factors.append(self.unary())
        return factors[0] if len(factors) == 1 else Product(tuple(factors))

    def unary(self):
        if self.accept("-"):
            return Neg(self.unary())
        return self.factor()

    def factor(self):
        base = self.primary()
        if self.accept("^"):
            negative = self.accept("-") is not None
            if self.tok.kind != "int":
                self.error("expected an integer exponent")
            n = int(self.tok.text)
            self.i += 1
            return Power(base, -n if negative else n)
        return base

    def primary(self):
        tok = self.tok
        if tok.kind == "int":
            return self.literal()
        if tok.kind == "name":
            name = tok.text
            if name == "conj":
                self.i += 1
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Conj(arg)
            if name in UNITS:
                self.i += 1
                return Literal(Fraction(1), name)
            if name in ("x", "y", "h") or re.fullmatch(r"h[1-9][0-9]*", name):
                self.i += 1
                try:
                    check_variable(name)
                except Exception as exc:
                    raise ParseError(str(exc), tok.line, tok.col) from None
                return Var(name)
            self.error("unknown name")
        if self.accept("("):
            node = self.expr()
            self.expect(")")
            return node
        self.error("expected a variable, literal or '('")

    def literal(self):
        num_tok = self.tok
        self.i += 1
        value = Fraction(int(num_tok.text))
        end = num_tok.end
        if self.tok.kind == "op" and self.tok.text == "/":
            self.i += 1
            if self.tok.kind != "int":
                self.error("expected a positive integer denominator")
            den = int(self.tok.text)
            if den == 0:
                self.error("denominator must be positive")
            end = self.tok.end
            self.i += 1
            value = value / den
        nxt = self.tok
        if nxt.kind == "name" and nxt.text in UNITS and nxt.pos == end:
            self.i += 1
            return Literal(value, nxt.text)
        return Literal(value)


def parse(text: str):
    """Parse text into an AST; raises ParseError with line and column."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# printing


def _atomic(node) -> bool:
    return isinstance(node, (Var, Conj)) or (isinstance(node, Literal) and (node.unit == "1" or node.coeff == 1))


def to_text(node) -> str:
    """Canonical text of an AST; parse(to_text(a)) == a."""
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Literal):
        if node.unit == "1":
            return format_rational(node.coeff)
        return node.unit if node.coeff == 1 else format_rational(node.coeff) + node.unit
    if isinstance(node, Conj):
        return f"conj({to_text(node.arg)})"
    if isinstance(node, Neg):
        inner = to_text(node.arg)
        return "-" + (f"({inner})" if isinstance(node.arg, (Sum, Neg)) else inner)
    if isinstance(node, Power):
        base = to_text(node.base)
        if not _atomic(node.base):
            base = f"({base})"
        return f"{base}^{node.exponent}"
    if isinstance(node, Product):
        return "*".join(f"({to_text(f)})" if isinstance(f, (Sum, Neg)) else to_text(f) for f in node.factors)
    if isinstance(node, Sum):
        out = ""
        for n, (sign, t) in enumerate(node.terms):
            text = to_text(t)
            if isinstance(t, (Sum, Neg)):
                text = f"({text})"
            if n == 0:
                out = ("-" if sign < 0 else "") + text
            else:
                out += (" - " if sign < 0 else " + ") + text
        return out
    raise TypeError(f"not an expression node: {node!r}")


# ---------------------------------------------------------------------------
# lowering


def _literal_value(node: Literal, alg: AlgebraSpec) -> Element:
    if node.unit == "1":
        return alg.scalar(node.coeff)
    labels = list(alg.basis_labels)
    if node.unit not in labels:
        raise SemanticError(f"algebra {alg.name!r} has no basis element {node.unit!r}")
    return alg.basis(labels.index(node.unit)) * node.coeff


def _conj_supported(alg: AlgebraSpec) -> bool:
    return alg.structural_constants == QUATERNION.structural_constants


def conj_polynomial(p: NcPoly, alg: AlgebraSpec) -> NcPoly:
    """-1/2 (p + i p i + j p j + k p k), the conjugate of p over quaternions."""
    if not _conj_supported(alg):
        raise UnsupportedOperation(f"conj is not a polynomial map over {alg.name!r}")
    parts = [p]
    for n in range(1, 4):
        e = NcPoly.constant(alg.basis(n))
        parts.append(poly_mul(poly_mul(e, p, alg), e, alg))
    return sum_polys(parts).scale(Fraction(-1, 2))


def lower(node, alg: AlgebraSpec) -> NcPoly:
    """AST -> NcPoly.  Negative powers are rejected here."""
    if isinstance(node, Var):
        return NcPoly.var(node.name, alg)
    if isinstance(node, Literal):
        return NcPoly.constant(_literal_value(node, alg))
    if isinstance(node, Neg):
        return lower(node.arg, alg).scale(-1)
    if isinstance(node, Sum):
        return sum_polys(lower(t, alg).scale(sign) for sign, t in node.terms)
    if isinstance(node, Product):
        out = lower(node.factors[0], alg)
        for f in node.factors[1:]:
            out = poly_mul(out, lower(f, alg), alg)
        return out
    if isinstance(node, Power):
        if node.exponent < 0:
            raise SemanticError("negative powers are only allowed in numeric (oracle) commands")
        base = lower(node.base, alg)
        out = NcPoly.constant(alg.one())
        for _ in range(node.exponent):
            out = poly_mul(out, base, alg)
        return out
    if isinstance(node, Conj):
        return conj_polynomial(lower(node.arg, alg), alg)
    raise TypeError(f"not an expression node: {node!r}")


def parse_poly(text: str, alg: AlgebraSpec) -> NcPoly:
    return lower(parse(text), alg)


def parse_element(text: str, alg: AlgebraSpec) -> Element:
    """A constant such as ``1+2i-3j+1/2k``."""
    p = parse_poly(text, alg)
    if p.variables():
        raise SemanticError(f"expected a constant, got variables {sorted(p.variables())}")
    return eval_poly(p, {}, alg)


def float_function(node, alg: AlgebraSpec) -> Callable[[Mapping[str, np.ndarray]], np.ndarray]:
    """Floating-point evaluator of an AST; unlike ``lower`` it accepts
    negative powers of x (through the algebra inverse)."""
    ops = FloatOps(alg)

    def ev(n, env):
        if isinstance(n, Var):
            try:
                return as_float(env[n.name])
            except KeyError:
                raise SemanticError(f"variable {n.name!r} is not bound") from None
        if isinstance(n, Literal):
            return _literal_value(n, alg).to_float()
        if isinstance(n, Neg):
            return -ev(n.arg, env)
        if isinstance(n, Sum):
            return sum((sign * ev(t, env) for sign, t in n.terms), np.zeros(alg.dim))
        if isinstance(n, Product):
            return ops.mul(*[ev(f, env) for f in n.factors])
        if isinstance(n, Power):
            if n.exponent < 0 and n.base != Var("x"):
                raise SemanticError("negative powers are only allowed on x")
            base = ev(n.base, env)
            if n.exponent < 0:
                base = ops.inv(base)
            out = alg.one().to_float()
            for _ in range(abs(n.exponent)):
                out = ops.mul(out, base)
            return out
        if isinstance(n, Conj):
            if not alg.has_involution:
                raise UnsupportedOperation(f"conj is not defined over {alg.name!r}")
            v = ev(n.arg, env)
            u = alg.unit_index
            out = -v
            out[u] = v[u]
            return out
        raise TypeError(f"not an expression node: {n!r}")

    return lambda env: ev(node, env)


def has_negative_power(node) -> bool:
    if isinstance(node, Power):
        return node.exponent < 0 or has_negative_power(node.base)
    if isinstance(node, (Neg, Conj)):
        return has_negative_power(node.arg)
    if isinstance(node, Sum):
        return any(has_negative_power(t) for _, t in node.terms)
    if isinstance(node, Product):
        return any(has_negative_power(f) for f in node.factors)
    return False
