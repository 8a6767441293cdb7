"""Floating-point evaluation in an algebra, used only by the limit oracles."""

from __future__ import annotations

from typing import Mapping

import numpy as np

from .algebra import AlgebraSpec, Element
from .errors import DivisionByZero, UnboundVariable, UnsupportedOperation
from .nc_poly import NcPoly


def as_float(x) -> np.ndarray:
    if isinstance(x, Element):
        return x.to_float()
    return np.asarray(x, dtype=float)


def fmul(a: np.ndarray, b: np.ndarray, alg: AlgebraSpec) -> np.ndarray:
    return np.einsum("k,l,klp->p", a, b, alg.structure_float)


def finv(x: np.ndarray, alg: AlgebraSpec) -> np.ndarray:
    if not alg.is_division:
        raise UnsupportedOperation(f"algebra {alg.name!r} is not a division algebra")
    if alg.has_involution and alg.norm_signature is not None:
        u = alg.unit_index
        sig = np.array([float(s) for s in alg.norm_signature])
        n2 = float(np.dot(sig, x * x))
        if n2 == 0.0:
            raise DivisionByZero("0 has no inverse")
        conj = -x.copy()
        conj[u] = x[u]
        return conj / n2
    left = np.einsum("k,klp->lp", x, alg.structure_float)
    try:
        return np.linalg.solve(left.T, alg.one().to_float())
    except np.linalg.LinAlgError as exc:
        raise DivisionByZero("singular element") from exc


def fnorm(x: np.ndarray) -> float:
    return float(np.linalg.norm(x))


def eval_float(p: NcPoly, bindings: Mapping[str, np.ndarray], alg: AlgebraSpec) -> np.ndarray:
    total = np.zeros(alg.dim)
    for w in p.words:
        value = w.constants[0].to_float()
        for v, c in zip(w.vars, w.constants[1:]):
            try:
                b = bindings[v]
            except KeyError:
                raise UnboundVariable(f"variable {v!r} is not bound") from None
            value = fmul(fmul(value, as_float(b), alg), c.to_float(), alg)
        total = total + value
    return total


class ExactOps:
    """Arithmetic on exact Elements, same surface as FloatOps."""

    def __init__(self, alg: AlgebraSpec):
        self.alg = alg

    def mul(self, *xs):
        out = xs[0]
        for x in xs[1:]:
            out = self.alg.mul(out, x)
        return out

    def inv(self, x):
        return self.alg.inverse(x)

    def zero(self):
        return self.alg.zero()


class FloatOps:
    def __init__(self, alg: AlgebraSpec):
        self.alg = alg

    def mul(self, *xs):
        out = as_float(xs[0])
        for x in xs[1:]:
            out = fmul(out, as_float(x), self.alg)
        return out

    def inv(self, x):
        return finv(as_float(x), self.alg)

    def zero(self):
        return np.zeros(self.alg.dim)
