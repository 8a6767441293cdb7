"""Gateaux derivatives of noncommutative polynomials.

Two independent symbolic routes are provided:

* ``derive`` applies the product rule once per call: every occurrence of x
  in a word is replaced, one at a time, by a fresh increment variable.
* ``derive_by_injections`` builds the k-th derivative in one step by placing
  h1..hk on every ordered choice of k distinct x positions.

``numeric_gateaux`` is the floating-point limit oracle both are checked
against, and ``closed_form_table`` lists the classical derivatives of
non-polynomial maps (inverse, conjugation by x, ...).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Callable, Mapping, Sequence

import numpy as np

from .algebra import AlgebraSpec, Element
from .errors import DivisionByZero, EvaluationError, NotRealizable, OrderTooHigh
from .linear_maps import CoordMatrix, StdComponents, coord_to_std
from .nc_poly import MAX_H, NcPoly, NcWord, eval_poly, h_index, h_name, splice, sum_polys
from .numeric import ExactOps, FloatOps, as_float


@dataclass(frozen=True)
class DerivativeResult:
    order: int
    poly: NcPoly

    @property
    def increments(self) -> list[str]:
        return [h_name(i) for i in range(1, self.order + 1)]


def _next_index(p: NcPoly) -> int:
    return max((h_index(v) for v in p.variables()), default=0) + 1


def derive(
    p: NcPoly | DerivativeResult,
    var: str = "x",
    rule: Callable[[str], NcPoly] | None = None,
    alg: AlgebraSpec | None = None,
) -> DerivativeResult:
    """One more Gateaux derivative, in a new increment variable.

    Without ``rule`` each occurrence of ``var`` is replaced by the new
    increment.  ``rule(h)`` may instead supply the derivative of ``var``
    itself as a polynomial in ``h`` (e.g. for an unknown function y with a
    prescribed first derivative); then ``alg`` is required to splice it in.
    """
    poly = p.poly if isinstance(p, DerivativeResult) else p
    index = _next_index(poly)
    if index > MAX_H:
        raise OrderTooHigh(f"derivatives above order {MAX_H} are not supported")
    new = h_name(index)
    image = rule(new) if rule is not None else None
    if image is not None and alg is None:
        raise TypeError("a derivative rule needs the algebra")
    words: list[NcWord] = []
    for w in poly.words:
        # last occurrence first, so x^2 gives x*h1 + h1*x
        for pos in reversed(range(len(w.vars))):
            if w.vars[pos] != var:
                continue
            if image is None:
                words.append(NcWord.relabel(w, w.vars[:pos] + (new,) + w.vars[pos + 1 :]))
            else:
                words.extend(splice(w, pos, image, alg).words)
    return DerivativeResult(index, NcPoly._nonzero(words) if image is None else NcPoly(words))


def derivative(p: NcPoly, order: int, var: str = "x") -> DerivativeResult:
    """``order``-fold application of ``derive``."""
    if order > MAX_H:
        raise OrderTooHigh(f"derivatives above order {MAX_H} are not supported")
    result = DerivativeResult(_next_index(p) - 1, p)
    for _ in range(order):
        result = derive(result, var)
    return result


def derive_by_injections(p: NcPoly, k: int, var: str = "x") -> DerivativeResult:
    if k > MAX_H:
        raise OrderTooHigh(f"derivatives above order {MAX_H} are not supported")
    start = _next_index(p)
    if start + k - 1 > MAX_H:
        raise OrderTooHigh(f"derivatives above order {MAX_H} are not supported")
    names = [h_name(start + i) for i in range(k)]
    words: list[NcWord] = []
    for w in p.words:
        positions = [i for i, v in enumerate(w.vars) if v == var]
        for chosen in itertools.permutations(positions, k):
            vars_ = list(w.vars)
            for name, pos in zip(names, chosen):
                vars_[pos] = name
            words.append(NcWord.relabel(w, tuple(vars_)))
    return DerivativeResult(start + k - 1, NcPoly._nonzero(words))


def derive_all_equal(p: NcPoly, n: int, h: str = "h", var: str = "x") -> NcPoly:
    """n-th derivative with every increment set to the same variable ``h``."""
    d = derivative(p, n, var)
    start = _next_index(p)
    return d.poly.rename({h_name(i): h for i in range(start, start + n)})


# ---------------------------------------------------------------------------
# evaluation of first-order differentials


def _increment(df: DerivativeResult) -> str:
    return h_name(df.order)


def differential_at(df: DerivativeResult, x: Element, a: Element, alg: AlgebraSpec, extra=None) -> Element:
    bindings = {"x": x, _increment(df): a}
    if extra:
        bindings.update(extra)
    return eval_poly(df.poly, bindings, alg)


def d_star(df: DerivativeResult, x: Element, a: Element, alg: AlgebraSpec) -> Element:
    """a^-1 df(x)(a)."""
    if a.is_zero():
        raise DivisionByZero("the D-star derivative is undefined in direction 0")
    return alg.mul(alg.inverse(a), differential_at(df, x, a, alg))


def star_d(df: DerivativeResult, x: Element, a: Element, alg: AlgebraSpec) -> Element:
    """df(x)(a) a^-1."""
    if a.is_zero():
        raise DivisionByZero("the star-D derivative is undefined in direction 0")
    return alg.mul(differential_at(df, x, a, alg), alg.inverse(a))


def jacobian(df: DerivativeResult, x0: Element, alg: AlgebraSpec) -> CoordMatrix:
    """Row i holds the coordinates of df(x0)(e_i)."""
    return CoordMatrix(tuple(differential_at(df, x0, alg.basis(i), alg).coords for i in range(alg.dim)))


def differential_std_components(df: DerivativeResult, x0: Element, alg: AlgebraSpec) -> StdComponents:
    try:
        return coord_to_std(jacobian(df, x0, alg), alg)
    except NotRealizable as exc:
        raise RuntimeError(
            f"differential of a polynomial is not representable by standard components: {exc.residuals}"
        ) from exc


# ---------------------------------------------------------------------------
# numeric limit oracle


def numeric_gateaux(
    f: Callable[[np.ndarray], np.ndarray],
    x,
    a,
    t: float = 1e-4,
) -> np.ndarray:
    """Central difference at t and t/2 combined by one Richardson step."""
    x = as_float(x)
    a = as_float(a)

    def central(step):
        try:
            plus = np.asarray(f(x + step * a), dtype=float)
            minus = np.asarray(f(x - step * a), dtype=float)
        except (ZeroDivisionError, ArithmeticError, ValueError) as exc:
            raise EvaluationError(f"map cannot be evaluated near the point: {exc}") from exc
        if not (np.all(np.isfinite(plus)) and np.all(np.isfinite(minus))):
            raise EvaluationError("map is not finite near the point")
        return (plus - minus) / (2.0 * step)

    coarse = central(t)
    fine = central(t / 2.0)
    return (4.0 * fine - coarse) / 3.0


def relative_error(estimate, exact) -> float:
    exact = as_float(exact)
    return float(np.linalg.norm(as_float(estimate) - exact) / (1.0 + np.linalg.norm(exact)))


# ---------------------------------------------------------------------------
# table of classical derivatives


@dataclass(frozen=True)
class ClosedFormEntry:
    """One row of the derivative table.

    ``function(ops, x, **params)`` and ``derivative(ops, x, h, **params)``
    are written against an arithmetic backend (``ExactOps`` or
    ``FloatOps``) so one definition serves exact and floating evaluation.
    ``star`` is the D-star derivative h^-1 df(x)(h) where the table lists it.
    """

    name: str
    params: tuple[str, ...]
    function: Callable
    derivative: Callable
    star: Callable | None = None
    singular_at_zero: bool = False

    def exact_derivative(self, x: Element, h: Element, alg: AlgebraSpec, **params) -> Element:
        return self.derivative(ExactOps(alg), x, h, **params)

    def exact_star(self, x: Element, h: Element, alg: AlgebraSpec, **params) -> Element:
        if self.star is None:
            raise NotImplementedError(f"no D-star entry for {self.name}")
        return self.star(ExactOps(alg), x, h, **params)

    def float_function(self, alg: AlgebraSpec, **params) -> Callable[[np.ndarray], np.ndarray]:
        ops = FloatOps(alg)
        fparams = {k: as_float(v) for k, v in params.items()}
        return lambda x: self.function(ops, x, **fparams)


def _inner_square(ops, x):
    return ops.mul(x, x)


def _inner_square_derivative(ops, x, h):
    return ops.mul(x, h) + ops.mul(h, x)


def closed_form_table() -> list[ClosedFormEntry]:
    return [
        ClosedFormEntry(
            "constant",
            ("b",),
            lambda ops, x, b: b,
            lambda ops, x, h, b: ops.zero(),
        ),
        ClosedFormEntry(
            "wrapped",  # b f(x) c with f(x) = x^2
            ("b", "c"),
            lambda ops, x, b, c: ops.mul(b, _inner_square(ops, x), c),
            lambda ops, x, h, b, c: ops.mul(b, _inner_square_derivative(ops, x, h), c),
        ),
        ClosedFormEntry(
            "bxc",
            ("b", "c"),
            lambda ops, x, b, c: ops.mul(b, x, c),
            lambda ops, x, h, b, c: ops.mul(b, h, c),
            star=lambda ops, x, h, b, c: ops.mul(ops.inv(h), b, h, c),
        ),
        ClosedFormEntry(
            "commutator",
            ("b",),
            lambda ops, x, b: ops.mul(x, b) - ops.mul(b, x),
            lambda ops, x, h, b: ops.mul(h, b) - ops.mul(b, h),
        ),
        ClosedFormEntry(
            "square",
            (),
            lambda ops, x: ops.mul(x, x),
            lambda ops, x, h: ops.mul(x, h) + ops.mul(h, x),
            star=lambda ops, x, h: ops.mul(ops.inv(h), x, h) + x,
        ),
        ClosedFormEntry(
            "inverse",
            (),
            lambda ops, x: ops.inv(x),
            lambda ops, x, h: -ops.mul(ops.inv(x), h, ops.inv(x)),
            star=lambda ops, x, h: -ops.mul(ops.inv(h), ops.inv(x), h, ops.inv(x)),
            singular_at_zero=True,
        ),
        ClosedFormEntry(
            "conjugation_by_x",  # x a x^-1
            ("a",),
            lambda ops, x, a: ops.mul(x, a, ops.inv(x)),
            lambda ops, x, h, a: ops.mul(h, a, ops.inv(x)) - ops.mul(x, a, ops.inv(x), h, ops.inv(x)),
            star=lambda ops, x, h, a: ops.mul(a, ops.inv(x))
            - ops.mul(ops.inv(h), x, a, ops.inv(x), h, ops.inv(x)),
            singular_at_zero=True,
        ),
    ]


def table_entry(name: str) -> ClosedFormEntry:
    for entry in closed_form_table():
        if entry.name == name:
            return entry
    raise KeyError(name)


def polynomial_function(p: NcPoly, alg: AlgebraSpec, var: str = "x", fixed: Mapping[str, Element] | None = None):
    """Float callable x -> p(x) for the numeric oracle."""
    from .numeric import eval_float

    fixed_f = {k: as_float(v) for k, v in (fixed or {}).items()}

    def f(x):
        return eval_float(p, {**fixed_f, var: x}, alg)

    return f
