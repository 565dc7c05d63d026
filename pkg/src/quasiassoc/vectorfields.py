"""Polynomial vector fields on Rⁿ twisted by a commutative algebra.

For structure constants θ with ``θ^r_{αβ} = θ^r_{βα}`` the product
``(X∗Y)^r = Σ_α X^α ∂_α(Y^r) + Σ_{αβ} X^α Y^β θ^r_{αβ}`` is quasiassociative
and its commutator is the usual bracket of vector fields.  With θ ≡ 0 this
is the standard product ``X(Y^i)``.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Dict, List

import sympy

from .findim import FinAlgebra, fd_lie_constants

__all__ = [
    "symbols",
    "field_product",
    "field_bracket",
    "realization_residual_is_zero",
    "realization_bracket_ok",
    "random_field",
    "commutative_examples",
    "associator_symmetry_defect",
]


def symbols(n: int):
    return sympy.symbols(f"x1:{n + 1}")


def _constants(R: FinAlgebra):
    lie = fd_lie_constants(R)
    if any(v for m in lie.c for row in m for v in row):
        raise ValueError("the flat realization needs commutative structure constants")
    theta = {}
    for (a, b), row in R.products.items():
        for r, v in row.items():
            if not v.is_constant():
                raise ValueError("structure constants must be numbers here")
            c = v.constant_value()
            theta[(r, a, b)] = sympy.Rational(c.numerator, c.denominator)
    return theta


def field_product(R: FinAlgebra, X: List, Y: List) -> List:
    xs = symbols(R.dim)
    theta = _constants(R)
    out = []
    for r in range(R.dim):
        acc = sum((X[a] * sympy.diff(Y[r], xs[a]) for a in range(R.dim)), sympy.Integer(0))
        for (s, a, b), t in theta.items():
            if s == r:
                acc += t * X[a] * Y[b]
        out.append(sympy.expand(acc))
    return out


def field_bracket(X: List, Y: List) -> List:
    n = len(X)
    xs = symbols(n)
    return [
        sympy.expand(sum(X[a] * sympy.diff(Y[r], xs[a]) - Y[a] * sympy.diff(X[r], xs[a]) for a in range(n)))
        for r in range(n)
    ]


def realization_residual_is_zero(R: FinAlgebra, X, Y, Z) -> bool:
    m = lambda u, v: field_product(R, u, v)
    res = [
        sympy.expand(a - b - c + d)
        for a, b, c, d in zip(m(X, m(Y, Z)), m(m(X, Y), Z), m(Y, m(X, Z)), m(m(Y, X), Z))
    ]
    return all(e == 0 for e in res)


def realization_bracket_ok(R: FinAlgebra, X, Y) -> bool:
    lhs = [sympy.expand(a - b) for a, b in zip(field_product(R, X, Y), field_product(R, Y, X))]
    return all(sympy.expand(a - b) == 0 for a, b in zip(lhs, field_bracket(X, Y)))


def random_field(rng: random.Random, n: int, terms: int = 3, degree: int = 2) -> List:
    xs = symbols(n)
    out = []
    for _ in range(n):
        acc = sympy.Integer(0)
        for _ in range(terms):
            mono = sympy.Integer(1)
            for _ in range(rng.randint(0, degree)):
                mono *= rng.choice(xs)
            acc += sympy.Rational(rng.randint(-3, 3), rng.randint(1, 2)) * mono
        out.append(sympy.expand(acc))
    return out


def commutative_examples() -> Dict[str, FinAlgebra]:
    dual = FinAlgebra(2, {(0, 0, 0): 1, (1, 0, 1): 1, (1, 1, 0): 1}, labels=["1", "t"])
    return {"zero2": FinAlgebra(2), "zero3": FinAlgebra(3), "dual_numbers": dual}


def associator_symmetry_defect(A: FinAlgebra, i: int, j: int, k: int, r: int):
    """Component ``r`` of ``((ij)k - i(jk)) - ((ji)k - j(ik))`` with the sign flipped.

    Computed from products of coordinate vectors; agrees with
    :func:`~quasiassoc.findim.fd_quasiassoc_residual`.
    """
    e = A.basis
    m = A.mul
    ij_k = m(m(e(i), e(j)), e(k))
    i_jk = m(e(i), m(e(j), e(k)))
    ji_k = m(m(e(j), e(i)), e(k))
    j_ik = m(e(j), m(e(i), e(k)))
    return -((ij_k[r] - i_jk[r]) - (ji_k[r] - j_ik[r]))
