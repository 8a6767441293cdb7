"""Finite-dimensional associative algebras given by structural constants.

An algebra multiplies basis vectors by ``e_k e_l = sum_p B[k][l][p] e_p``.
Elements are coordinate vectors of exact rationals over that basis.  Three
presets are provided: the complex numbers, Hamilton's quaternions and the
generalized quaternion algebra E(F, a, b).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

from . import _exact
from ._exact import Matrix, frac
from .errors import DimensionError, DivisionByZero, SingularTransform, UnsupportedOperation


@dataclass(frozen=True)
class Element:
    """Coordinates ``a^i`` of ``a = a^i e_i``."""

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(frac(c) for c in self.coords))

    def __hash__(self):
        # elements key the expansion caches, so hash the Fractions only once
        h = self.__dict__.get("_hash")
        if h is None:
            h = hash(self.coords)
            object.__setattr__(self, "_hash", h)
        return h

    @classmethod
    def of(cls, *coords) -> "Element":
        return cls(tuple(coords))

    @property
    def dim(self) -> int:
        return len(self.coords)

    def is_zero(self) -> bool:
        return not any(self.coords)

    def _check(self, other: "Element"):
        if other.dim != self.dim:
            raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")

    def __add__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        return Element(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "Element") -> "Element":
        if not isinstance(other, Element):
            return NotImplemented
        self._check(other)
        return Element(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "Element":
        return Element(tuple(-a for a in self.coords))

    def __mul__(self, scalar) -> "Element":
        if isinstance(scalar, Element):
            return NotImplemented  # products need an algebra: use AlgebraSpec.mul
        s = frac(scalar)
        return Element(tuple(a * s for a in self.coords))

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "Element":
        s = frac(scalar)
        if s == 0:
            raise DivisionByZero("division of an element by the scalar 0")
        return Element(tuple(a / s for a in self.coords))

    def to_float(self) -> np.ndarray:
        return np.array([float(c) for c in self.coords])


Structure = tuple[tuple[tuple[Fraction, ...], ...], ...]


def _structure(raw) -> Structure:
    return tuple(tuple(tuple(frac(v) for v in row) for row in plane) for plane in raw)


@dataclass(frozen=True)
class AlgebraSpec:
    name: str
    dim: int
    structural_constants: Structure
    unit: tuple[Fraction, ...]
    norm_signature: tuple[Fraction, ...] | None = None
    basis_labels: tuple[str, ...] = ()
    has_involution: bool = False
    is_division: bool = False
    _nonzero: tuple = field(default=(), repr=False, compare=False)

    def __post_init__(self):
        b = _structure(self.structural_constants)
        n = self.dim
        if len(b) != n or any(len(p) != n or any(len(r) != n for r in p) for p in b):
            raise DimensionError(f"structural constants must have shape ({n}, {n}, {n})")
        object.__setattr__(self, "structural_constants", b)
        object.__setattr__(self, "unit", tuple(frac(u) for u in self.unit))
        if self.norm_signature is not None:
            object.__setattr__(self, "norm_signature", tuple(frac(s) for s in self.norm_signature))
        if not self.basis_labels:
            object.__setattr__(self, "basis_labels", tuple(f"e{i}" for i in range(n)))
        nonzero = tuple(
            (k, l, p, b[k][l][p]) for k in range(n) for l in range(n) for p in range(n) if b[k][l][p] != 0
        )
        object.__setattr__(self, "_nonzero", nonzero)
        if not self.is_associative():
            raise ValueError(f"algebra {self.name!r} is not associative")
        one = Element(self.unit)
        for k in range(n):
            e = self.basis(k)
            if self.mul(one, e) != e or self.mul(e, one) != e:
                raise ValueError(f"algebra {self.name!r}: unit law fails for basis vector {k}")

    # -- construction helpers -------------------------------------------
    @property
    def unit_index(self) -> int | None:
        """Index of the basis vector equal to 1, or None if 1 is not a basis vector."""
        for i in range(self.dim):
            if all(c == (1 if j == i else 0) for j, c in enumerate(self.unit)):
                return i
        return None

    def basis(self, i: int) -> Element:
        return Element(tuple(Fraction(int(j == i)) for j in range(self.dim)))

    def zero(self) -> Element:
        return Element((Fraction(0),) * self.dim)

    def one(self) -> Element:
        return Element(self.unit)

    def element(self, *coords) -> Element:
        if len(coords) == 1 and not isinstance(coords[0], (int, Fraction, str)):
            coords = tuple(coords[0])
        if len(coords) != self.dim:
            raise DimensionError(f"{self.name} elements have {self.dim} coordinates, got {len(coords)}")
        return Element(tuple(coords))

    def scalar(self, r) -> Element:
        return self.one() * frac(r)

    # -- arithmetic ------------------------------------------------------
    def _check(self, *xs: Element):
        for x in xs:
            if x.dim != self.dim:
                raise DimensionError(f"{self.name} has dimension {self.dim}, element has {x.dim}")

    def mul(self, a: Element, b: Element) -> Element:
        self._check(a, b)
        out = [Fraction(0)] * self.dim
        ac, bc = a.coords, b.coords
        for k, l, p, c in self._nonzero:
            if ac[k] and bc[l]:
                out[p] += ac[k] * bc[l] * c
        return Element(tuple(out))

    def product(self, factors: Iterable[Element]) -> Element:
        result = self.one()
        for f in factors:
            result = self.mul(result, f)
        return result

    def conj(self, x: Element) -> Element:
        if not self.has_involution:
            raise UnsupportedOperation(f"no conjugation is defined on algebra {self.name!r}")
        self._check(x)
        u = self.unit_index
        return Element(tuple(c if i == u else -c for i, c in enumerate(x.coords)))

    def abs_sq(self, x: Element) -> Fraction:
        if self.norm_signature is None:
            raise UnsupportedOperation(f"algebra {self.name!r} has no quadratic norm")
        self._check(x)
        return sum((s * c * c for s, c in zip(self.norm_signature, x.coords)), Fraction(0))

    def inverse(self, x: Element) -> Element:
        if not self.is_division:
            raise UnsupportedOperation(f"algebra {self.name!r} is not a division algebra")
        self._check(x)
        if x.is_zero():
            raise DivisionByZero("0 has no inverse")
        if self.has_involution and self.norm_signature is not None:
            return self.conj(x) / self.abs_sq(x)
        # no involution after a change of basis: solve x y = 1 directly
        left = self.left_matrix(x)
        try:
            inv = _exact.mat_inv(left)
        except SingularTransform as exc:  # pragma: no cover - division algebras have no zero divisors
            raise DivisionByZero("element is a zero divisor") from exc
        return Element(_exact.vec_mat(self.unit, inv))

    def left_matrix(self, a: Element) -> Matrix:
        """Row-vector matrix of ``x -> a x``: row ``l`` holds ``a e_l``."""
        return tuple(self.mul(a, self.basis(l)).coords for l in range(self.dim))

    def right_matrix(self, a: Element) -> Matrix:
        """Row-vector matrix of ``x -> x a``: row ``k`` holds ``e_k a``."""
        return tuple(self.mul(self.basis(k), a).coords for k in range(self.dim))

    def is_associative(self) -> bool:
        b = self.structural_constants
        n = self.dim
        for a in range(n):
            for c in range(n):
                for d in range(n):
                    for q in range(n):
                        lhs = sum((b[a][c][p] * b[p][d][q] for p in range(n)), Fraction(0))
                        rhs = sum((b[c][d][p] * b[a][p][q] for p in range(n)), Fraction(0))
                        if lhs != rhs:
                            return False
        return True

    # -- numeric views ---------------------------------------------------
    @cached_property
    def structure_float(self) -> np.ndarray:
        return np.array(self.structural_constants, dtype=float)

    @cached_property
    def structure_scaled(self) -> tuple[np.ndarray, int]:
        flat, den = _exact.scaled_vector([c for plane in self.structural_constants for row in plane for c in row])
        return flat.reshape((self.dim,) * 3), den

    def __str__(self):
        return self.name

    def format(self, x: Element) -> str:
        return format_element(x, self)


def format_rational(r: Fraction) -> str:
    return str(r.numerator) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def format_element(x: Element, alg: AlgebraSpec) -> str:
    """Literal text such as ``1+2i-3j+1/2k`` (``0`` for zero)."""
    parts = []
    u = alg.unit_index
    for i, c in enumerate(x.coords):
        if c == 0:
            continue
        if i == u:
            text = format_rational(c)
        else:
            label = alg.basis_labels[i]
            if c == 1:
                text = label
            elif c == -1:
                text = "-" + label
            else:
                text = format_rational(c) + label
        if parts and not text.startswith("-"):
            text = "+" + text
        parts.append(text)
    return "".join(parts) if parts else "0"


# ---------------------------------------------------------------------------
# presets


def _table(dim: int, entries: dict[tuple[int, int], tuple[int, object]]) -> list:
    b = [[[Fraction(0)] * dim for _ in range(dim)] for _ in range(dim)]
    for (k, l), (p, v) in entries.items():
        b[k][l][p] = frac(v)
    return b


def complex_numbers() -> AlgebraSpec:
    b = _table(2, {(0, 0): (0, 1), (0, 1): (1, 1), (1, 0): (1, 1), (1, 1): (0, -1)})
    return AlgebraSpec(
        name="complex",
        dim=2,
        structural_constants=b,
        unit=(1, 0),
        norm_signature=(1, 1),
        basis_labels=("1", "i"),
        has_involution=True,
        is_division=True,
    )


def efab(a, b) -> AlgebraSpec:
    """Generalized quaternions: i^2 = a, j^2 = b, ij = k, ab != 0.

    A division ring exactly when a < 0 and b < 0.
    """
    a, b = frac(a), frac(b)
    if a == 0 or b == 0:
        raise ValueError("E(F, a, b) requires a*b != 0")
    table = {(0, l): (l, 1) for l in range(4)}
    table.update({(k, 0): (k, 1) for k in range(1, 4)})
    table.update(
        {
            (1, 1): (0, a),
            (1, 2): (3, 1),
            (1, 3): (2, a),
            (2, 1): (3, -1),
            (2, 2): (0, b),
            (2, 3): (1, -b),
            (3, 1): (2, -a),
            (3, 2): (1, b),
            (3, 3): (0, -a * b),
        }
    )
    return AlgebraSpec(
        name=f"efab:{format_rational(a)},{format_rational(b)}",
        dim=4,
        structural_constants=_table(4, table),
        unit=(1, 0, 0, 0),
        norm_signature=(1, -a, -b, a * b),
        basis_labels=("1", "i", "j", "k"),
        has_involution=True,
        is_division=a < 0 and b < 0,
    )


def quaternions() -> AlgebraSpec:
    # rows k, columns l of e_k e_l for the basis 1, i, j, k
    table = {
        (0, 0): (0, 1), (0, 1): (1, 1), (0, 2): (2, 1), (0, 3): (3, 1),
        (1, 0): (1, 1), (1, 1): (0, -1), (1, 2): (3, 1), (1, 3): (2, -1),
        (2, 0): (2, 1), (2, 1): (3, -1), (2, 2): (0, -1), (2, 3): (1, 1),
        (3, 0): (3, 1), (3, 1): (2, 1), (3, 2): (1, -1), (3, 3): (0, -1),
    }  # fmt: skip
    return AlgebraSpec(
        name="quaternion",
        dim=4,
        structural_constants=_table(4, table),
        unit=(1, 0, 0, 0),
        norm_signature=(1, 1, 1, 1),
        basis_labels=("1", "i", "j", "k"),
        has_involution=True,
        is_division=True,
    )


COMPLEX = complex_numbers()
QUATERNION = quaternions()


def from_name(name: str) -> AlgebraSpec:
    """Resolve ``complex``, ``quaternion`` or ``efab:<a>,<b>`` (also ``efab:<a>/<b>``)."""
    key = name.strip().lower()
    if key == "complex":
        return COMPLEX
    if key == "quaternion":
        return QUATERNION
    if key.startswith("efab:"):
        params = key[5:]
        if "," in params:
            a, b = params.split(",", 1)
        elif params.count("/") == 1:
            a, b = params.split("/")
        else:
            raise ValueError(f"cannot read E(F,a,b) parameters from {name!r}; use efab:<a>,<b>")
        return efab(Fraction(a.strip()), Fraction(b.strip()))
    raise ValueError(f"unknown algebra {name!r}")


def change_basis(alg: AlgebraSpec, a: Sequence[Sequence]) -> AlgebraSpec:
    """Re-express ``alg`` in the basis ``e'_i = A[i][j] e_j``.

    The new algebra carries no involution or norm; they were only defined
    for the preset bases.
    """
    a = _exact.as_matrix(a)
    n = alg.dim
    if len(a) != n or any(len(r) != n for r in a):
        raise DimensionError(f"basis change must be {n}x{n}")
    a_inv = _exact.mat_inv(a)
    b = alg.structural_constants
    new = [[[Fraction(0)] * n for _ in range(n)] for _ in range(n)]
    for k in range(n):
        for l in range(n):
            # old coordinates of e'_k e'_l
            old = [Fraction(0)] * n
            for s, t, p, c in alg._nonzero:
                w = a[k][s] * a[l][t]
                if w:
                    old[p] += w * c
            new[k][l] = list(_exact.vec_mat(old, a_inv))
    return AlgebraSpec(
        name=f"{alg.name}'",
        dim=n,
        structural_constants=new,
        unit=_exact.vec_mat(alg.unit, a_inv),
        basis_labels=tuple(f"e{i}'" for i in range(n)),
        is_division=alg.is_division,
    )


# functional aliases ---------------------------------------------------------


def mul(a: Element, b: Element, alg: AlgebraSpec) -> Element:
    return alg.mul(a, b)


def conj(x: Element, alg: AlgebraSpec) -> Element:
    return alg.conj(x)


def abs_sq(x: Element, alg: AlgebraSpec) -> Fraction:
    return alg.abs_sq(x)


def inverse(x: Element, alg: AlgebraSpec) -> Element:
    return alg.inverse(x)
