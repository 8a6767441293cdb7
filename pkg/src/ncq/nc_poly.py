"""Noncommutative polynomials with algebra-element coefficients.

A word ``c0 v1 c1 v2 ... vm cm`` interleaves constants with variables; a
polynomial is a formal sum of words.  Words are syntax: two polynomials are
the same map exactly when their coordinate expansions agree, and that
expansion (``CoordinateForm``) is the equality oracle used everywhere else.
"""

from __future__ import annotations

import itertools
import re
from collections import Counter
from functools import lru_cache
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, gcd, lcm
from typing import Iterable, Mapping, Sequence

import numpy as np

from . import _exact
from .algebra import AlgebraSpec, Element, format_element, format_rational
from .errors import DimensionError, NotMultilinear, OrderTooHigh, UnboundVariable

MAX_H = 32
_VAR_RE = re.compile(r"^(x|y|h|h([1-9][0-9]*))$")


def check_variable(name: str) -> str:
    m = _VAR_RE.match(name)
    if not m or (m.group(2) and int(m.group(2)) > MAX_H):
        raise OrderTooHigh(f"variable {name!r} outside the alphabet x, y, h, h1..h{MAX_H}")
    return name


def var_key(name: str) -> tuple[int, int]:
    """Sort order: x, y, h, h1, h2, ..."""
    if name == "x":
        return (0, 0)
    if name == "y":
        return (1, 0)
    if name == "h":
        return (2, 0)
    return (3, int(name[1:]))


def h_name(i: int) -> str:
    if not 1 <= i <= MAX_H:
        raise OrderTooHigh(f"at most {MAX_H} increment variables are supported (asked for h{i})")
    return f"h{i}"


def h_index(name: str) -> int:
    return int(name[1:]) if name.startswith("h") and len(name) > 1 else 0


@dataclass(frozen=True)
class NcWord:
    constants: tuple[Element, ...]
    vars: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "constants", tuple(self.constants))
        object.__setattr__(self, "vars", tuple(check_variable(v) for v in self.vars))
        if len(self.constants) != len(self.vars) + 1:
            raise ValueError("a word needs exactly one more constant than variables")
        dims = {c.dim for c in self.constants}
        if len(dims) != 1:
            raise DimensionError("word constants of different dimensions")

    @property
    def dim(self) -> int:
        return self.constants[0].dim

    @classmethod
    def relabel(cls, word: "NcWord", vars_: tuple[str, ...]) -> "NcWord":
        """Same constants, new variable symbols (already validated)."""
        w = object.__new__(cls)
        object.__setattr__(w, "constants", word.constants)
        object.__setattr__(w, "vars", vars_)
        return w

    def is_zero(self) -> bool:
        return any(c.is_zero() for c in self.constants)

    def degree(self, var: str = "x") -> int:
        return self.vars.count(var)


class NcPoly:
    """Formal sum of words.  Zero words are dropped on construction."""

    __slots__ = ("words",)

    def __init__(self, words: Iterable[NcWord] = ()):
        self.words = tuple(w for w in words if not w.is_zero())

    @classmethod
    def _nonzero(cls, words: Iterable[NcWord]) -> "NcPoly":
        # words known to have no zero constant
        p = object.__new__(cls)
        p.words = tuple(words)
        return p

    # constructors ---------------------------------------------------------
    @classmethod
    def zero(cls) -> "NcPoly":
        return cls(())

    @classmethod
    def constant(cls, c: Element) -> "NcPoly":
        return cls((NcWord((c,), ()),))

    @classmethod
    def var(cls, name: str, alg: AlgebraSpec) -> "NcPoly":
        one = alg.one()
        return cls((NcWord((one, one), (name,)),))

    @classmethod
    def monomial(cls, constants: Sequence[Element], vars: Sequence[str]) -> "NcPoly":
        return cls((NcWord(tuple(constants), tuple(vars)),))

    @classmethod
    def power(cls, var: str, n: int, alg: AlgebraSpec) -> "NcPoly":
        one = alg.one()
        return cls((NcWord((one,) * (n + 1), (var,) * n),))

    # inspection -----------------------------------------------------------
    def __iter__(self):
        return iter(self.words)

    def __len__(self):
        return len(self.words)

    def __bool__(self):
        return bool(self.words)

    def __repr__(self):
        return f"NcPoly({len(self.words)} words)"

    def __eq__(self, other):
        # syntactic equality; use semantic_eq for equality of maps
        return isinstance(other, NcPoly) and self.words == other.words

    def __hash__(self):
        return hash(self.words)

    def variables(self) -> set[str]:
        return {v for w in self.words for v in w.vars}

    def h_vars(self) -> list[str]:
        return sorted((v for v in self.variables() if v.startswith("h")), key=var_key)

    def degree(self, var: str = "x") -> int:
        return max((w.degree(var) for w in self.words), default=0)

    # ring operations that need no multiplication table ----------------------
    def __add__(self, other: "NcPoly") -> "NcPoly":
        if not isinstance(other, NcPoly):
            return NotImplemented
        return NcPoly(self.words + other.words)

    def __neg__(self) -> "NcPoly":
        return self.scale(-1)

    def __sub__(self, other: "NcPoly") -> "NcPoly":
        if not isinstance(other, NcPoly):
            return NotImplemented
        return self + (-other)

    def scale(self, r) -> "NcPoly":
        r = _exact.frac(r)
        return NcPoly(NcWord((w.constants[0] * r,) + w.constants[1:], w.vars) for w in self.words)

    def rename(self, mapping: Mapping[str, str]) -> "NcPoly":
        for v in mapping.values():
            check_variable(v)
        return NcPoly._nonzero(NcWord.relabel(w, tuple(mapping.get(v, v) for v in w.vars)) for w in self.words)


def sum_polys(polys: Iterable[NcPoly]) -> NcPoly:
    words: list[NcWord] = []
    for p in polys:
        words.extend(p.words)
    return NcPoly(words)


def word_mul(u: NcWord, v: NcWord, alg: AlgebraSpec) -> NcWord:
    joint = alg.mul(u.constants[-1], v.constants[0])
    return NcWord(u.constants[:-1] + (joint,) + v.constants[1:], u.vars + v.vars)


def poly_mul(p: NcPoly, q: NcPoly, alg: AlgebraSpec) -> NcPoly:
    return NcPoly(word_mul(u, v, alg) for u in p.words for v in q.words)


def left_mul(c: Element, p: NcPoly, alg: AlgebraSpec) -> NcPoly:
    return NcPoly(NcWord((alg.mul(c, w.constants[0]),) + w.constants[1:], w.vars) for w in p.words)


def right_mul(p: NcPoly, c: Element, alg: AlgebraSpec) -> NcPoly:
    return NcPoly(NcWord(w.constants[:-1] + (alg.mul(w.constants[-1], c),), w.vars) for w in p.words)


def splice(word: NcWord, position: int, replacement: NcPoly, alg: AlgebraSpec) -> NcPoly:
    """Replace the variable at ``position`` of ``word`` by a polynomial."""
    head = NcWord(word.constants[: position + 1], word.vars[:position])
    tail = NcWord(word.constants[position + 1 :], word.vars[position + 1 :])
    return poly_mul(poly_mul(NcPoly((head,)), replacement, alg), NcPoly((tail,)), alg)


def substitute(p: NcPoly, mapping: Mapping[str, NcPoly], alg: AlgebraSpec) -> NcPoly:
    """Replace every occurrence of the mapped variables simultaneously."""
    out: list[NcWord] = []
    for w in p.words:
        acc = NcPoly.constant(w.constants[0])
        for v, c in zip(w.vars, w.constants[1:]):
            factor = mapping.get(v)
            if factor is None:
                acc = NcPoly(NcWord(u.constants + (c,), u.vars + (v,)) for u in acc.words)
            else:
                acc = right_mul(poly_mul(acc, factor, alg), c, alg)
        out.extend(acc.words)
    return NcPoly(out)


def eval_poly(p: NcPoly, bindings: Mapping[str, Element], alg: AlgebraSpec) -> Element:
    """Exact value of ``p`` with every variable bound to an element."""
    total = alg.zero()
    for w in p.words:
        value = w.constants[0]
        for v, c in zip(w.vars, w.constants[1:]):
            try:
                b = bindings[v]
            except KeyError:
                raise UnboundVariable(f"variable {v!r} is not bound") from None
            value = alg.mul(alg.mul(value, b), c)
        total = total + value
    return total


# ---------------------------------------------------------------------------
# coordinate expansion


def _positional_tensor(constants: tuple[Element, ...], alg: AlgebraSpec) -> tuple[np.ndarray, int]:
    """Coordinates of ``c0 e_{i1} c1 ... e_{im} cm`` as an array indexed
    ``[i1, ..., im, p]`` of numerators, plus their common denominator."""
    cache = alg.__dict__.setdefault("_positional_cache", {})
    hit = cache.get(constants)
    if hit is not None:
        return hit
    one = alg.one()
    b_num, b_den = alg.structure_scaled
    if len(constants) == 1:
        result = _exact.scaled_vector(constants[0].coords)
    else:
        t, den = _positional_tensor(constants[:-1], alg)
        # append a generic basis vector, then the last constant
        t = _exact.checked_tensordot(t, b_num, axes=([-1], [0]))
        den *= b_den
        last = constants[-1]
        if last != one:
            right = [c for row in alg.right_matrix(last) for c in row]
            r_num, r_den = _exact.scaled_vector(right)
            t = _exact.checked_tensordot(t, r_num.reshape(alg.dim, alg.dim), axes=([-1], [0]))
            den *= r_den
        g = gcd(_exact.array_gcd(t), den)
        if g > 1:
            t = t // g
            den //= g
        result = (t, den)
    if len(cache) > 200_000:
        cache.clear()
    cache[constants] = result
    return result


def _symmetrize(arr: np.ndarray, groups: list[list[int]]) -> np.ndarray:
    """Sum of ``arr`` over all permutations of the axes inside each group."""
    if not groups:
        return arr
    growth = 1
    for axes in groups:
        growth *= factorial(len(axes))
    if arr.dtype != object and _exact._bound(arr) * growth >= _exact._LIMIT:
        arr = _exact._promote(arr)
    for axes in groups:
        for k in range(1, len(axes)):
            acc = arr
            for j in range(k):
                acc = acc + np.swapaxes(arr, axes[j], axes[k])
            arr = acc
    return arr


def _groups(key: tuple[str, ...]) -> list[list[int]]:
    out: dict[str, list[int]] = {}
    for i, v in enumerate(key):
        out.setdefault(v, []).append(i)
    return [axes for axes in out.values() if len(axes) > 1]


@lru_cache(maxsize=65536)
def _sort_key_perm_cached(vars_: tuple[str, ...]) -> tuple[tuple[str, ...], tuple[int, ...]]:
    order = sorted(range(len(vars_)), key=lambda i: var_key(vars_[i]))
    return tuple(vars_[i] for i in order), tuple(order)


def _groups_all(key: tuple[str, ...]) -> list[list[int]]:
    out: dict[str, list[int]] = {}
    for i, v in enumerate(key):
        out.setdefault(v, []).append(i)
    return list(out.values())


def _sort_key_perm(vars_: Sequence[str]) -> tuple[tuple[str, ...], list[int]]:
    key, order = _sort_key_perm_cached(tuple(vars_))
    return key, list(order)


@lru_cache(maxsize=256)
def _gather_index(dim: int, orders: tuple[tuple[int, ...], ...]) -> np.ndarray:
    """Row r lists, for the flattened tensor transposed by ``orders[r]``,
    which flat entry of the untransposed tensor lands at each position."""
    m = len(orders[0])
    base = np.arange(dim ** (m + 1)).reshape((dim,) * (m + 1))
    return np.stack([base.transpose(order + (m,)).ravel() for order in orders])


class CoordinateForm:
    """Coordinate expansion of a polynomial map.

    For each multiset of variables (``key``, sorted) the form keeps an
    integer tensor ``T[i1, ..., im, p]``: component ``p`` of the map gains
    ``T[...] * v1^{i1} ... vm^{im} / denom``.  Different tensors can describe
    the same commutative polynomial; ``canonical()`` sums each tensor over
    permutations of axes that carry the same variable, which is unique.
    """

    __slots__ = ("dim", "terms", "denom", "_canon")

    def __init__(self, dim: int, terms: Mapping[tuple[str, ...], np.ndarray] | None = None, denom: int = 1):
        self.dim = dim
        self.terms = dict(terms or {})
        self.denom = denom
        self._canon = None

    # arithmetic -------------------------------------------------------------
    def _aligned(self, other: "CoordinateForm"):
        if other.dim != self.dim:
            raise DimensionError("coordinate forms of different dimensions")
        den = lcm(self.denom, other.denom)
        return den, den // self.denom, den // other.denom

    def __add__(self, other: "CoordinateForm") -> "CoordinateForm":
        den, fa, fb = self._aligned(other)
        terms = {k: _exact.checked_scale(v, fa) for k, v in self.terms.items()}
        for k, v in other.terms.items():
            v = _exact.checked_scale(v, fb)
            terms[k] = _exact.checked_add(terms[k], v) if k in terms else v
        return CoordinateForm(self.dim, terms, den)

    def __neg__(self) -> "CoordinateForm":
        return CoordinateForm(self.dim, {k: _exact.checked_scale(v, -1) for k, v in self.terms.items()}, self.denom)

    def __sub__(self, other: "CoordinateForm") -> "CoordinateForm":
        return self + (-other)

    def scale(self, r) -> "CoordinateForm":
        r = _exact.frac(r)
        return CoordinateForm(
            self.dim,
            {k: _exact.checked_scale(v, r.numerator) for k, v in self.terms.items()},
            self.denom * r.denominator,
        )

    def rename(self, mapping: Mapping[str, str]) -> "CoordinateForm":
        """Rename variables; several variables may be merged into one."""
        terms: dict[tuple[str, ...], np.ndarray] = {}
        for key, arr in self.terms.items():
            new_key, order = _sort_key_perm([mapping.get(v, v) for v in key])
            arr = np.transpose(arr, order + [len(key)])
            terms[new_key] = _exact.checked_add(terms[new_key], arr) if new_key in terms else arr
        return CoordinateForm(self.dim, terms, self.denom)

    def drop(self, var: str) -> "CoordinateForm":
        """Set ``var`` to zero."""
        return CoordinateForm(self.dim, {k: v for k, v in self.terms.items() if var not in k}, self.denom)

    def swap(self, a: str, b: str) -> "CoordinateForm":
        return self.rename({a: b, b: a})

    def mul(self, other: "CoordinateForm", alg: AlgebraSpec) -> "CoordinateForm":
        """Expansion of the algebra product of two maps."""
        b_num, b_den = alg.structure_scaled
        terms: dict[tuple[str, ...], np.ndarray] = {}
        for k1, t1 in self.terms.items():
            for k2, t2 in other.terms.items():
                prod = _exact.checked_tensordot(t1, b_num, axes=([-1], [0]))  # [..a.., r, p]
                prod = _exact.checked_tensordot(t2, prod, axes=([-1], [len(k1)]))  # [..b.., ..a.., p]
                vars_ = list(k2) + list(k1)
                key, order = _sort_key_perm(vars_)
                prod = np.transpose(prod, order + [len(vars_)])
                terms[key] = _exact.checked_add(terms[key], prod) if key in terms else prod
        return CoordinateForm(self.dim, terms, self.denom * other.denom * b_den)

    # normal form ------------------------------------------------------------
    def canonical(self) -> tuple[dict[tuple[str, ...], np.ndarray], int]:
        if self._canon is None:
            terms = {}
            g = 0
            for key, arr in self.terms.items():
                s = _symmetrize(arr, _groups(key))
                if np.any(s != 0):
                    terms[key] = s
                    g = gcd(g, _exact.array_gcd(s))
            den = self.denom
            g = gcd(g, den)
            if g > 1:
                terms = {k: v // g for k, v in terms.items()}
                den //= g
            self._canon = (terms, den)
        return self._canon

    def is_zero(self) -> bool:
        return not self.canonical()[0]

    def __eq__(self, other):
        if not isinstance(other, CoordinateForm):
            return NotImplemented
        if other.dim != self.dim:
            return False
        ta, da = self.canonical()
        tb, db = other.canonical()
        if ta.keys() != tb.keys():
            return False
        return all(
            np.array_equal(_exact.checked_scale(ta[k], db), _exact.checked_scale(tb[k], da)) for k in ta
        )

    __hash__ = None

    def keys(self) -> list[tuple[str, ...]]:
        return sorted(self.canonical()[0], key=lambda k: (len(k), [var_key(v) for v in k]))

    def monomials(self) -> list[list[tuple[tuple[tuple[str, int, int], ...], Fraction]]]:
        """Sparse view: per output component, ``(monomial, coefficient)`` pairs
        ordered by total degree, then lexicographically.  A monomial is a
        tuple of ``(variable, coordinate index, exponent)``."""
        terms, den = self.canonical()
        per_component: list[dict] = [dict() for _ in range(self.dim)]
        for key, arr in terms.items():
            groups: dict[str, list[int]] = {}
            for i, v in enumerate(key):
                groups.setdefault(v, []).append(i)
            names = list(groups)
            ranges = [itertools.combinations_with_replacement(range(self.dim), len(groups[v])) for v in names]
            for choice in itertools.product(*ranges):
                idx = [0] * len(key)
                stab = 1
                mono = []
                for v, picks in zip(names, choice):
                    for axis, value in zip(groups[v], picks):
                        idx[axis] = value
                    for value in sorted(set(picks)):
                        count = picks.count(value)
                        stab *= factorial(count)
                        mono.append((v, value, count))
                mono = tuple(sorted(mono, key=lambda t: (var_key(t[0]), t[1])))
                for p in range(self.dim):
                    num = int(arr[tuple(idx) + (p,)])
                    if num:
                        per_component[p][mono] = Fraction(num, den * stab)
        def order(item):
            mono = item[0]
            return (sum(e for _, _, e in mono), [(var_key(v), i, -e) for v, i, e in mono])
        return [sorted(c.items(), key=order) for c in per_component]

    def evaluate(self, bindings: Mapping[str, Element]) -> Element:
        total = [Fraction(0)] * self.dim
        for key, arr in self.terms.items():
            t, den = arr, self.denom
            for v in reversed(key):
                try:
                    val = bindings[v]
                except KeyError:
                    raise UnboundVariable(f"variable {v!r} is not bound") from None
                num, vden = _exact.scaled_vector(val.coords)
                t = _exact.checked_tensordot(t, num, axes=([-2], [0])) if t.ndim > 1 else t
                den *= vden
            for p in range(self.dim):
                total[p] += Fraction(int(t[p]), den)
        return Element(tuple(total))

    def __str__(self):
        lines = []
        for p, comp in enumerate(self.monomials()):
            text = ""
            for mono, c in comp:
                factors = [f"{v}[{i}]" + (f"^{e}" if e > 1 else "") for v, i, e in mono]
                term = "*".join([format_rational(abs(c))] + factors)
                if not text:
                    text = term if c > 0 else "-" + term
                else:
                    text += (" + " if c > 0 else " - ") + term
            lines.append(f"[{p}] " + (text or "0"))
        return "\n".join(lines)


def expand_word(w: NcWord, alg: AlgebraSpec) -> tuple[tuple[str, ...], np.ndarray, int]:
    t, den = _positional_tensor(w.constants, alg)
    key, order = _sort_key_perm(w.vars)
    if order != list(range(len(order))):
        t = np.transpose(t, order + [len(order)])
    return key, t, den


def _full_orbit(key: tuple[str, ...], orders: list[tuple[int, ...]]):
    return _full_orbit_cached(key, tuple(orders))


@lru_cache(maxsize=4096)
def _full_orbit_cached(key: tuple[str, ...], orders: tuple[tuple[int, ...], ...]):
    """If the orders hit every arrangement of the key's variables equally
    often, return (multiplicity, product of group-size factorials)."""
    runs = _groups_all(key)
    stab = 1
    arrangements = factorial(len(key))
    for run in runs:
        stab *= factorial(len(run))
    arrangements //= stab
    if len(orders) < arrangements:
        return None
    counts = Counter(tuple(itertools.chain.from_iterable(sorted(order[i] for i in run) for run in runs)) for order in orders)
    if len(counts) != arrangements:
        return None
    values = set(counts.values())
    if len(values) != 1:
        return None
    return values.pop(), stab


def expand(p: NcPoly, alg: AlgebraSpec) -> CoordinateForm:
    # derivatives produce many words sharing one constants tuple; expand it once
    shared: dict[int, tuple[tuple[Element, ...], list[tuple[str, ...]]]] = {}
    for w in p.words:
        shared.setdefault(id(w.constants), (w.constants, []))[1].append(w.vars)
    pieces: list[tuple[tuple[str, ...], np.ndarray, int]] = []
    den = 1
    for constants, var_lists in shared.values():
        if constants[0].dim != alg.dim:
            raise DimensionError(f"word constants have dimension {constants[0].dim}, algebra {alg.dim}")
        t, d = _positional_tensor(constants, alg)
        by_key: dict[tuple[str, ...], list[tuple[int, ...]]] = {}
        for vars_ in var_lists:
            key, order = _sort_key_perm_cached(vars_)
            by_key.setdefault(key, []).append(order)
        bound = _exact._bound(t)
        for key, orders in by_key.items():
            base = t if bound * len(orders) < _exact._LIMIT else _exact._promote(t)
            scale = _full_orbit(key, orders)
            if len(orders) == 1:
                acc = np.transpose(base, orders[0] + (len(key),))
                pieces.append((key, acc, d))
            elif scale is not None and bound * factorial(len(key)) < _exact._LIMIT:
                # the words run over every arrangement of the variables, so up
                # to reordering of equal variables the sum is a full
                # symmetrization of the positional tensor
                c, stab = scale
                acc = _exact.checked_scale(_symmetrize(t, [list(range(len(key)))]), c)
                pieces.append((key, acc, d * stab))
            else:
                gather = _gather_index(alg.dim, tuple(sorted(orders)))
                acc = base.ravel()[gather].sum(axis=0).reshape(base.shape)
                pieces.append((key, acc, d))
    for _, _, d in pieces:
        den = lcm(den, d)
    terms: dict[tuple[str, ...], np.ndarray] = {}
    for key, t, d in pieces:
        t = _exact.checked_scale(t, den // d)
        terms[key] = _exact.checked_add(terms[key], t) if key in terms else t
    return CoordinateForm(alg.dim, terms, den)


def semantic_eq(p: NcPoly, q: NcPoly, alg: AlgebraSpec) -> bool:
    return expand(p, alg) == expand(q, alg)


# ---------------------------------------------------------------------------
# polylinear maps


def polylinear_coords(p: NcPoly, alg: AlgebraSpec, vars_: Sequence[str] | None = None) -> np.ndarray:
    """Coordinates ``f(e_{i1}, ..., e_{in})`` of a polylinear polynomial.

    Returns an object array of Fractions indexed ``[i1, ..., in, p]``.
    Arguments are ordered h1, h2, ... unless ``vars_`` is given.
    """
    names = list(vars_) if vars_ is not None else p.h_vars()
    for w in p.words:
        if "x" in w.vars or "y" in w.vars:
            raise NotMultilinear("polylinear coordinates need a polynomial without x")
        if sorted(w.vars, key=var_key) != sorted(names, key=var_key):
            raise NotMultilinear(f"word with variables {w.vars} is not linear in each of {names}")
    n = len(names)
    out = np.empty((alg.dim,) * n + (alg.dim,), dtype=object)
    for idx in itertools.product(range(alg.dim), repeat=n):
        value = eval_poly(p, {v: alg.basis(i) for v, i in zip(names, idx)}, alg)
        for comp, c in enumerate(value.coords):
            out[idx + (comp,)] = c
    return out


def _transpositions(vars_: Sequence[str]):
    # (v1 vk) for k >= 2 generate the full symmetric group
    return [(vars_[0], v) for v in vars_[1:]]


def symmetry_witness(p: NcPoly | CoordinateForm, vars_: Sequence[str], alg: AlgebraSpec | None = None):
    """First transposition of ``vars_`` that changes the map, with the
    nonzero difference, or None when the map is symmetric."""
    form = p if isinstance(p, CoordinateForm) else expand(p, alg)
    terms, _ = form.canonical()
    for a, b in _transpositions(list(vars_)):
        # swapping maps canonical tensors to canonical tensors, so compare them directly
        same = True
        for key, arr in terms.items():
            new_key, order = _sort_key_perm([b if v == a else a if v == b else v for v in key])
            other = terms.get(new_key)
            if other is None or not np.array_equal(other, np.transpose(arr, order + [len(key)])):
                same = False
                break
        if not same:
            return (a, b), form - form.swap(a, b)
    return None


def is_symmetric(p: NcPoly, vars_: Sequence[str], alg: AlgebraSpec) -> bool:
    return symmetry_witness(p, vars_, alg) is None


# ---------------------------------------------------------------------------
# text form


def scalar_value(c: Element, alg: AlgebraSpec) -> Fraction | None:
    """r when c = r * 1, else None."""
    one = alg.one()
    m = next(i for i, v in enumerate(one.coords) if v != 0)
    r = c.coords[m] / one.coords[m]
    return r if one * r == c else None


def simplify(p: NcPoly, alg: AlgebraSpec) -> NcPoly:
    """Collected form of ``p`` with the same map.

    Every constant is expanded over the basis, so that equal basis words
    cancel or merge; then the last and the first constant of each word are
    folded back into single elements.  Words compare in the free algebra
    over the constants, so this never needs the multiplication table.
    """
    basis_words: dict[tuple, Fraction] = {}
    for w in p.words:
        supports = [[(a, c) for a, c in enumerate(k.coords) if c != 0] for k in w.constants]
        for choice in itertools.product(*supports):
            coeff = Fraction(1)
            for _, c in choice:
                coeff *= c
            key = (w.vars, tuple(a for a, _ in choice))
            basis_words[key] = basis_words.get(key, Fraction(0)) + coeff
    dim = alg.dim

    def vec(entries: dict[int, Fraction]) -> Element:
        return Element(tuple(entries.get(a, Fraction(0)) for a in range(dim)))

    # fold the last constant
    tails: dict[tuple, dict[int, Fraction]] = {}
    for (vars_, idx), coeff in basis_words.items():
        if coeff:
            tails.setdefault((vars_, idx[:-1]), {})[idx[-1]] = coeff
    # fold the first constant over words sharing the middle and last
    heads: dict[tuple, dict[int, Fraction]] = {}
    for (vars_, idx), last in tails.items():
        if not idx:  # constant word
            heads[(vars_, None, vec(last))] = {}
            continue
        heads.setdefault((vars_, idx[1:], vec(last)), {})[idx[0]] = Fraction(1)
    words = []
    for (vars_, middle, last), lead in heads.items():
        if middle is None:
            words.append(NcWord((last,), vars_))
            continue
        middle_consts = tuple(alg.basis(a) for a in middle)
        words.append(NcWord((vec(lead),) + middle_consts + (last,), vars_))
    return _scalars_first(NcPoly(words), alg)


def _content(c: Element) -> Fraction | None:
    """Signed common absolute value of the nonzero coordinates, if any."""
    values = [v for v in c.coords if v != 0]
    if not values or any(abs(v) != abs(values[0]) for v in values):
        return None
    return values[0]


def _scalars_first(p: NcPoly, alg: AlgebraSpec) -> NcPoly:
    one = alg.one()
    merged: dict[tuple, Element] = {}
    for w in p.words:
        lead = w.constants[0]
        rest = []
        for c in w.constants[1:]:
            r = scalar_value(c, alg)
            if r is None:
                r = _content(c)
                if r is None or r == 1:
                    rest.append(c)
                else:
                    lead = lead * r
                    rest.append(c / r)
            else:
                lead = lead * r
                rest.append(one)
        key = (w.vars, tuple(rest))
        merged[key] = merged[key] + lead if key in merged else lead
    return NcPoly(NcWord((lead,) + rest, vars_) for (vars_, rest), lead in merged.items())


def _constant_text(c: Element, alg: AlgebraSpec) -> str:
    return f"({format_element(c, alg)})"


def format_word(w: NcWord, alg: AlgebraSpec, full: bool = False) -> str:
    """Text form of a word.

    ``full=True`` gives the canonical form with every constant in
    parentheses, e.g. ``(1+2i)*x*(j)*x*(1)``.  The default is compact: unit
    constants are omitted, a scalar lead is written bare and runs of one
    variable become powers, e.g. ``-1/2*x^2*(j)*h1``.
    """
    if full:
        factors = [_constant_text(w.constants[0], alg)]
        for v, c in zip(w.vars, w.constants[1:]):
            factors += [v, _constant_text(c, alg)]
        return "*".join(factors)
    one = alg.one()
    factors: list[str] = []
    lead = w.constants[0]
    r = scalar_value(lead, alg)
    sign = ""
    if r is None:
        content = _content(lead)
        if content is not None and content != 1:
            if content < 0:
                sign = "-"
            if abs(content) != 1:
                factors.append(format_rational(abs(content)))
            factors.append(_constant_text(lead / content, alg))
        else:
            factors.append(_constant_text(lead, alg))
    elif r == -1 and w.vars:
        sign = "-"
    elif r != 1 or not w.vars:
        if r < 0:
            sign = "-"
        factors.append(format_rational(abs(r)))
    i = 0
    while i < len(w.vars):
        v = w.vars[i]
        n = 1
        while i + n < len(w.vars) and w.vars[i + n] == v and w.constants[i + n] == one:
            n += 1
        factors.append(v if n == 1 else f"{v}^{n}")
        c = w.constants[i + n]
        if c != one:
            factors.append(_constant_text(c, alg))
        i += n
    return sign + "*".join(factors)


def format_poly(p: NcPoly, alg: AlgebraSpec, full: bool = False) -> str:
    if not p.words:
        return "0"
    out = ""
    for n, w in enumerate(p.words):
        text = format_word(w, alg, full)
        if n == 0:
            out = text
        elif text.startswith("-"):
            out += " - " + text[1:]
        else:
            out += " + " + text
    return out
