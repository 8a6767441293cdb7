"""Taylor polynomials, ODE solving by repeated differentiation, and the
noncommutative exponent."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, sqrt
from typing import Sequence

import numpy as np

from .algebra import AlgebraSpec, Element
from .errors import OrderTooHigh, Truncated
from .gateaux import DerivativeResult, derive, derive_all_equal
from .nc_poly import (
    MAX_H,
    CoordinateForm,
    NcPoly,
    NcWord,
    eval_poly,
    expand,
    h_name,
    semantic_eq,
    simplify,
    substitute,
    symmetry_witness,
)
from .numeric import FloatOps

DISPLACEMENT = "h"


def _shift(x0: Element, alg: AlgebraSpec) -> NcPoly:
    """The polynomial x - x0."""
    return NcPoly.var("x", alg) + NcPoly.constant(-x0)


@dataclass(frozen=True)
class TaylorPoly:
    """Terms are polynomials in the displacement ``h`` = x - x0; term n is
    (1/n!) times the n-th derivative at x0 with every increment equal to h."""

    center: Element
    terms: tuple[NcPoly, ...]

    @property
    def order(self) -> int:
        return len(self.terms) - 1

    def truncate(self, n: int) -> "TaylorPoly":
        return TaylorPoly(self.center, self.terms[: n + 1])

    def assembled(self, alg: AlgebraSpec) -> NcPoly:
        """The polynomial in x obtained by substituting h = x - x0."""
        shift = {DISPLACEMENT: _shift(self.center, alg)}
        words: list[NcWord] = []
        for term in self.terms:
            words.extend(substitute(term, shift, alg).words)
        return simplify(NcPoly(words), alg)

    def evaluate(self, x: Element, alg: AlgebraSpec) -> Element:
        h = x - self.center
        total = alg.zero()
        for term in self.terms:
            total = total + eval_poly(term, {DISPLACEMENT: h}, alg)
        return total


def taylor_expand(f: NcPoly, x0: Element, alg: AlgebraSpec, degree: int | None = None) -> TaylorPoly:
    """Taylor polynomial of f at x0, up to ``degree`` (default: deg f)."""
    n_max = f.degree("x") if degree is None else degree
    at_x0 = {"x": NcPoly.constant(x0)}
    terms = []
    for n in range(n_max + 1):
        d = derive_all_equal(f, n, DISPLACEMENT) if n else f
        term = substitute(d, at_x0, alg).scale(Fraction(1, factorial(n)))
        terms.append(simplify(term, alg))
    return TaylorPoly(x0, tuple(terms))


@dataclass(frozen=True)
class ConvergenceProbe:
    samples: tuple[tuple[float, float], ...]

    def ratios(self) -> list[float]:
        return [r for _, r in self.samples]

    def decay_factors(self) -> list[float]:
        """ratio(t_k) / ratio(t_{k+1}) along the schedule."""
        r = self.ratios()
        return [a / b if b else float("inf") for a, b in zip(r, r[1:])]


DEFAULT_SCHEDULE = (Fraction(1, 10), Fraction(1, 100), Fraction(1, 1000), Fraction(1, 10000))


def _norm(x: Element, alg: AlgebraSpec) -> float:
    if alg.norm_signature is not None and all(s == 1 for s in alg.norm_signature):
        return sqrt(alg.abs_sq(x))
    return float(np.linalg.norm(x.to_float()))


def remainder_probe(
    f: NcPoly,
    taylor: TaylorPoly,
    h: Element,
    alg: AlgebraSpec,
    schedule: Sequence = DEFAULT_SCHEDULE,
) -> ConvergenceProbe:
    """|f(x0 + t h) - T(x0 + t h)| / t^n for each t, n = taylor.order.

    The difference is computed exactly; only the final norm is a float.
    """
    n = taylor.order
    samples = []
    for t in schedule:
        t = Fraction(t) if not isinstance(t, float) else Fraction(repr(t))
        x = taylor.center + h * t
        diff = eval_poly(f, {"x": x}, alg) - taylor.evaluate(x, alg)
        samples.append((float(t), _norm(diff, alg) / float(t) ** n))
    return ConvergenceProbe(tuple(samples))


# ---------------------------------------------------------------------------
# ODE  y'(x)(h) = F(x; h)


@dataclass(frozen=True)
class OdeProblem:
    rhs: NcPoly
    x0: Element
    y0: Element

    def __post_init__(self):
        for w in self.rhs.words:
            if w.vars.count(DISPLACEMENT) != 1:
                raise ValueError("the right-hand side must contain h exactly once in every word")
            if set(w.vars) - {"x", DISPLACEMENT}:
                raise ValueError("the right-hand side may only use x and h")


@dataclass(frozen=True)
class Witness:
    """Why no solution exists: the derivative of order ``order`` changes
    under ``transposition``, by the nonzero ``difference``."""

    order: int
    transposition: tuple[str, str] | None
    difference: CoordinateForm = field(compare=False)
    reason: str = "asymmetric derivative"


@dataclass(frozen=True)
class OdeOutcome:
    solution: TaylorPoly | None = None
    polynomial: NcPoly | None = None
    witness: Witness | None = None
    derivatives: tuple[DerivativeResult, ...] = ()

    @property
    def solved(self) -> bool:
        return self.solution is not None


def solve_ode(problem: OdeProblem, alg: AlgebraSpec, max_order: int = MAX_H) -> OdeOutcome:
    """Integrate y' = rhs by differentiating the right-hand side repeatedly.

    Every iterated derivative of a genuine derivative is symmetric in its
    increments, so the first asymmetric one proves there is no solution.
    """
    current = DerivativeResult(1, problem.rhs.rename({DISPLACEMENT: h_name(1)}))
    derivatives = []
    while True:
        form = expand(current.poly, alg)
        if form.is_zero():
            break
        witness = symmetry_witness(form, current.increments)
        if witness is not None:
            pair, diff = witness
            return OdeOutcome(witness=Witness(current.order, pair, diff), derivatives=tuple(derivatives + [current]))
        derivatives.append(current)
        if current.order >= max_order:
            raise Truncated(f"derivative of order {current.order} is still nonzero")
        current = derive(current)

    at_x0 = {"x": NcPoly.constant(problem.x0)}
    terms = [NcPoly.constant(problem.y0)]
    for d in derivatives:
        k = d.order
        equal = d.poly.rename({name: DISPLACEMENT for name in d.increments})
        terms.append(simplify(substitute(equal, at_x0, alg).scale(Fraction(1, factorial(k))), alg))
    taylor = TaylorPoly(problem.x0, tuple(terms))
    y = taylor.assembled(alg)

    check = derive(y).poly
    target = problem.rhs.rename({DISPLACEMENT: h_name(1)})
    if not semantic_eq(check, target, alg):
        diff = expand(check, alg) - expand(target, alg)
        return OdeOutcome(
            witness=Witness(1, None, diff, "assembled polynomial does not satisfy the equation"),
            derivatives=tuple(derivatives),
        )
    return OdeOutcome(solution=taylor, polynomial=y, derivatives=tuple(derivatives))


# ---------------------------------------------------------------------------
# exponent: y' (h) = (yh + hy)/2


MAX_EXPONENT_ORDER = 20


def exponent_rule(alg: AlgebraSpec):
    """First derivative of y as a function of its increment name."""
    half = Fraction(1, 2)

    def rule(h: str) -> NcPoly:
        one = alg.one()
        return NcPoly(
            [
                NcWord((one * half, one, one), ("y", h)),
                NcWord((one * half, one, one), (h, "y")),
            ]
        )

    return rule


def exponent_derivative(n: int, alg: AlgebraSpec) -> NcPoly:
    """n-th derivative of the exponent: 2^-n times the sum over subsets S of
    {1..n} of [h_i, i in S ascending] y [h_i, i not in S descending]."""
    if n > MAX_EXPONENT_ORDER:
        raise OrderTooHigh(f"exponent derivatives are limited to order {MAX_EXPONENT_ORDER}")
    if n < 0:
        raise ValueError("order must be non-negative")
    one = alg.one()
    coeff = one * Fraction(1, 2**n)
    words = []
    indices = range(1, n + 1)
    for mask in itertools.product((True, False), repeat=n):
        left = [h_name(i) for i, take in zip(indices, mask) if take]
        right = [h_name(i) for i, take in zip(indices, mask) if not take][::-1]
        vars_ = tuple(left + ["y"] + right)
        words.append(NcWord((coeff,) + (one,) * len(vars_), vars_))
    return NcPoly(words)


def exp_series(q, n_terms: int, alg: AlgebraSpec) -> np.ndarray:
    """Partial sum of q^n / n! for n < n_terms, in floating point."""
    if n_terms < 1:
        raise ValueError("need at least one term")
    ops = FloatOps(alg)
    q = q.to_float() if isinstance(q, Element) else np.asarray(q, dtype=float)
    power = alg.one().to_float()
    total = power.copy()
    for n in range(1, n_terms):
        power = ops.mul(power, q) / n
        total = total + power
    return total


def exp_additivity_defect(a: Element, b: Element, alg: AlgebraSpec) -> Element:
    """Order-3 part of exp(a) exp(b) minus that of exp(a + b), exactly."""
    mul = alg.product
    product_part = (
        mul([a, a, a]) * Fraction(1, 6)
        + mul([a, a, b]) * Fraction(1, 2)
        + mul([a, b, b]) * Fraction(1, 2)
        + mul([b, b, b]) * Fraction(1, 6)
    )
    s = a + b
    return product_part - mul([s, s, s]) * Fraction(1, 6)
