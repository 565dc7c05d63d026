"""Laurent-polynomial realization of the graded algebra.

Elements ``x^{1-p}`` of k[x, x⁻¹] play the role of the basis vectors ``e_p``.
The operator ``𝒪 = x d/dx - 1`` is diagonal on monomials, ``𝒪 x^k = (k-1) x^k``,
so every operator used here (𝒪, its resolvents, multiplication by
monomials) acts termwise.  Two Laurent polynomials are equivalent modulo
exact derivatives iff their residues agree, so every "equal up to a total
derivative" statement reduces to comparing residues.

The last part of the module is the n-variable analog: vector fields
``e^i_σ`` indexed by a direction and a multi-degree.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DimensionMismatch, DivisionByZero, NoAdjointRule, UnknownBilinear
from .scalars import EPS, ONE, ZERO, RatFunc, as_ratfunc

__all__ = [
    "LaurentPoly",
    "MulByMonomial",
    "ApplyO",
    "ApplyResolvent",
    "Derivative",
    "MulByPoly",
    "ScalarMul",
    "OperatorExpr",
    "O",
    "RESOLVENT",
    "derivative",
    "res",
    "apply_operator",
    "adjoint",
    "star",
    "lie_bracket",
    "gf_cocycle",
    "omega_hat",
    "omega_hat_new",
    "gen_cocycle_residual",
    "adjoint_residual",
    "random_laurent",
    "NdElement",
    "nd_basis",
    "nd_bracket",
    "nd_star",
    "nd_mul",
    "nd_quasiassoc_residual",
    "nd_sweep_antisymmetry",
    "nd_sweep_quasiassoc",
]


class LaurentPoly:
    """Finite sum ``Σ c_k x^k`` with RatFunc coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms: Optional[Mapping[int, object]] = None):
        clean: Dict[int, RatFunc] = {}
        for k, c in (terms or {}).items():
            c = as_ratfunc(c)
            if c:
                clean[int(k)] = c
        self.terms = clean

    @classmethod
    def monomial(cls, k: int, coeff=ONE) -> "LaurentPoly":
        return cls({k: coeff})

    @classmethod
    def basis(cls, p: int, coeff=ONE) -> "LaurentPoly":
        """``x^{1-p}``, the image of ``e_p``."""
        return cls({1 - p: coeff})

    def __getitem__(self, k):
        return self.terms.get(k, ZERO)

    def is_zero(self):
        return not self.terms

    __bool__ = lambda self: bool(self.terms)

    def __add__(self, other):
        other = _as_laurent(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return LaurentPoly(out)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPoly({k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_laurent(other))

    def __rsub__(self, other):
        return _as_laurent(other) - self

    def __mul__(self, other):
        if not isinstance(other, LaurentPoly):
            try:
                c = as_ratfunc(other)
            except TypeError:
                return NotImplemented
            return LaurentPoly({k: c * v for k, v in self.terms.items()})
        out: Dict[int, RatFunc] = {}
        for a, c in self.terms.items():
            for b, d in other.terms.items():
                out[a + b] = out.get(a + b, ZERO) + c * d
        return LaurentPoly(out)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, LaurentPoly):
            return self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __repr__(self):
        if not self.terms:
            return "LaurentPoly(0)"
        return "LaurentPoly(" + " + ".join(f"({c})x^{k}" for k, c in sorted(self.terms.items())) + ")"

    def to_json(self):
        return [[k, c.to_json()] for k, c in sorted(self.terms.items())]

    @classmethod
    def from_json(cls, data) -> "LaurentPoly":
        return cls({int(k): RatFunc.from_json(c) for k, c in data})


def _as_laurent(u) -> LaurentPoly:
    if isinstance(u, LaurentPoly):
        return u
    return LaurentPoly({0: as_ratfunc(u)})


def derivative(u: LaurentPoly) -> LaurentPoly:
    return LaurentPoly({k - 1: k * c for k, c in u.terms.items() if k})


def res(u: LaurentPoly) -> RatFunc:
    return u.terms.get(-1, ZERO)


# ---------------------------------------------------------------------------
# operators


@dataclass(frozen=True)
class MulByMonomial:
    k: int

    def apply(self, u):
        return LaurentPoly({e + self.k: c for e, c in u.terms.items()})

    def adjoint(self):
        return self


@dataclass(frozen=True)
class ApplyO:
    """``𝒪 + shift``."""

    shift: int = 0

    def apply(self, u):
        return LaurentPoly({e: (e - 1 + self.shift) * c for e, c in u.terms.items()})

    def adjoint(self):
        # (𝒪 + s)† = -(𝒪 + 3 - s)
        return (ApplyO(3 - self.shift), ScalarMul(-ONE))


@dataclass(frozen=True)
class ApplyResolvent:
    """``(1 + coef·(𝒪 + shift))⁻¹``; the default is ``(1 - ε𝒪)⁻¹``."""

    coef: RatFunc = -EPS
    shift: int = 0

    def apply(self, u):
        out = {}
        for e, c in u.terms.items():
            d = 1 + self.coef * (e - 1 + self.shift)
            if not d:
                raise DivisionByZero(f"resolvent is singular on x^{e}")
            out[e] = c / d
        return LaurentPoly(out)

    def adjoint(self):
        return ApplyResolvent(-self.coef, 3 - self.shift)


@dataclass(frozen=True)
class Derivative:
    def apply(self, u):
        return derivative(u)

    def adjoint(self):
        return (Derivative(), ScalarMul(-ONE))


@dataclass(frozen=True)
class MulByPoly:
    u: LaurentPoly

    def apply(self, v):
        return self.u * v

    def adjoint(self):
        return self


@dataclass(frozen=True)
class ScalarMul:
    c: RatFunc

    def apply(self, u):
        return u * self.c

    def adjoint(self):
        return self


Primitive = Union[MulByMonomial, ApplyO, ApplyResolvent, Derivative, MulByPoly, ScalarMul]


class OperatorExpr:
    """Linear combination of compositions of primitives.

    Each composition is a sequence of steps applied in order, first step
    first.  ``A @ B`` is the operator product (apply ``B``, then ``A``).
    """

    def __init__(self, terms: Iterable[Tuple[object, Sequence[Primitive]]] = ()):
        self.terms: List[Tuple[RatFunc, Tuple[Primitive, ...]]] = [(as_ratfunc(c), tuple(s)) for c, s in terms]

    @classmethod
    def of(cls, *steps: Primitive) -> "OperatorExpr":
        return cls([(ONE, steps)])

    @classmethod
    def identity(cls) -> "OperatorExpr":
        return cls([(ONE, ())])

    def __call__(self, u: LaurentPoly) -> LaurentPoly:
        return apply_operator(self, u)

    def __add__(self, other):
        return OperatorExpr(self.terms + _as_op(other).terms)

    def __sub__(self, other):
        return self + (-1) * _as_op(other)

    def __rmul__(self, c):
        c = as_ratfunc(c)
        return OperatorExpr([(c * k, s) for k, s in self.terms])

    def __matmul__(self, other):
        other = _as_op(other)
        return OperatorExpr([(a * b, sb + sa) for a, sa in self.terms for b, sb in other.terms])

    def __repr__(self):
        return "OperatorExpr(" + " + ".join(f"{c}·{list(s)}" for c, s in self.terms) + ")"


def _as_op(a) -> OperatorExpr:
    if isinstance(a, OperatorExpr):
        return a
    return OperatorExpr.of(a)


O = OperatorExpr.of(ApplyO())
RESOLVENT = OperatorExpr.of(ApplyResolvent())


def apply_operator(A, u: LaurentPoly) -> LaurentPoly:
    A = _as_op(A)
    out = LaurentPoly()
    for c, steps in A.terms:
        v = u
        for step in steps:
            v = step.apply(v)
        out = out + v * c
    return out


def adjoint(A) -> OperatorExpr:
    """Formal adjoint with respect to ``(u, v) ↦ Res(u·v)``."""
    A = _as_op(A)
    terms = []
    for c, steps in A.terms:
        seq: List[Primitive] = []
        for step in reversed(steps):
            rule = getattr(step, "adjoint", None)
            if rule is None:
                raise NoAdjointRule(f"no adjoint rule for {step!r}")
            adj = rule()
            seq.extend(adj if isinstance(adj, tuple) else (adj,))
        terms.append((c, seq))
    return OperatorExpr(terms)


def adjoint_residual(A, u: LaurentPoly, v: LaurentPoly) -> RatFunc:
    """``Res(u·A(v) - A†(u)·v)``."""
    return res(u * apply_operator(A, v) - apply_operator(adjoint(A), u) * v)


# ---------------------------------------------------------------------------
# products and cocycles


_OO = OperatorExpr.of(ApplyO(), ScalarMul(-EPS)) @ O + O  # (1 - ε𝒪)𝒪


def star(u: LaurentPoly, v: LaurentPoly) -> LaurentPoly:
    """``(1 - ε𝒪)⁻¹[x⁻¹ · u · (1 - ε𝒪)𝒪 v]``."""
    w = apply_operator(_OO, v)
    return ApplyResolvent().apply(MulByMonomial(-1).apply(u * w))


def lie_bracket(u: LaurentPoly, v: LaurentPoly) -> LaurentPoly:
    return star(u, v) - star(v, u)


def gf_cocycle(X: LaurentPoly, Y: LaurentPoly) -> LaurentPoly:
    return X * derivative(derivative(derivative(Y)))


def omega_hat(u: LaurentPoly, v: LaurentPoly) -> LaurentPoly:
    """``x⁻³ 𝒪²(1 + ε𝒪)(u) · v``."""
    Ou = ApplyO().apply(ApplyO().apply(u))
    w = Ou + ApplyO().apply(Ou) * EPS
    return MulByMonomial(-3).apply(w * v)


def omega_hat_new(u: LaurentPoly, v: LaurentPoly) -> LaurentPoly:
    """Rescaling of ``omega_hat`` whose residues on monomials reproduce the graded charge."""
    half = RatFunc.const(Fraction(1, 2))
    return omega_hat(u, v) * (-half / EPS) - MulByMonomial(-2).apply(star(u, v)) * half


_BILINEARS: Dict[str, Callable[[LaurentPoly, LaurentPoly], LaurentPoly]] = {
    "omega_hat": omega_hat,
    "omega_hat_new": omega_hat_new,
    "gf_on_liealg": gf_cocycle,
}


def gen_cocycle_residual(B, u: LaurentPoly, v: LaurentPoly, w: LaurentPoly) -> RatFunc:
    """``Res(B(v, u∗w) - B(u, v∗w) + B([u,v], w))``.

    ``B`` is a callable or one of ``omega_hat``, ``omega_hat_new`` and
    ``gf_on_liealg``.  The last is a Lie-algebra cocycle, so for it the
    cyclic sum ``Res(B([u,v],w) + B([v,w],u) + B([w,u],v))`` is returned.
    """
    if isinstance(B, str):
        if B not in _BILINEARS:
            raise UnknownBilinear(B)
        name, B = B, _BILINEARS[B]
        if name == "gf_on_liealg":
            br = lambda a, b: a * derivative(b) - derivative(a) * b
            return res(B(br(u, v), w) + B(br(v, w), u) + B(br(w, u), v))
    return res(B(v, star(u, w)) - B(u, star(v, w)) + B(lie_bracket(u, v), w))


_POOL = [ONE, -ONE, RatFunc.const(2), RatFunc.const(Fraction(1, 3)), EPS, 1 - EPS]


def random_laurent(rng: random.Random, terms: int = 3, window: int = 4) -> LaurentPoly:
    return LaurentPoly({rng.randint(-window, window): rng.choice(_POOL) for _ in range(terms)})


# ---------------------------------------------------------------------------
# n variables

NdKey = Tuple[int, Tuple[int, ...]]


class NdElement:
    """``Σ c · e^i_σ``; directions are 1-based."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: Optional[Mapping[NdKey, object]] = None):
        self.n = n
        clean: Dict[NdKey, RatFunc] = {}
        for (i, sigma), c in (terms or {}).items():
            sigma = tuple(sigma)
            if len(sigma) != n or not 1 <= i <= n:
                raise DimensionMismatch(f"e^{i}_{sigma} is not a basis vector in dimension {n}")
            c = as_ratfunc(c)
            if c:
                key = (i, sigma)
                clean[key] = clean.get(key, ZERO) + c
                if not clean[key]:
                    del clean[key]
        self.terms = clean

    def _check(self, other):
        if not isinstance(other, NdElement):
            return NotImplemented
        if other.n != self.n:
            raise DimensionMismatch(f"dimensions {self.n} and {other.n}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return NdElement(self.n, out)

    def __neg__(self):
        return NdElement(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, c):
        c = as_ratfunc(c)
        return NdElement(self.n, {k: c * v for k, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, NdElement):
            return self.n == other.n and self.terms == other.terms
        if other == 0:
            return not self.terms
        return NotImplemented

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        if not self.terms:
            return f"NdElement(n={self.n}, 0)"
        return "NdElement(" + " + ".join(f"({c})e^{i}_{s}" for (i, s), c in sorted(self.terms.items())) + ")"


def nd_basis(i: int, sigma: Sequence[int], coeff=ONE) -> NdElement:
    return NdElement(len(sigma), {(i, tuple(sigma)): coeff})


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _basis_bracket(i, s, j, v):
    d = 1 if i == j else 0
    t = _add(s, v)
    return NdElement(len(s), {(j, t): d - v[i - 1]}) - NdElement(len(s), {(i, t): d - s[j - 1]})


def nd_bracket(X: NdElement, Y: NdElement) -> NdElement:
    if X.n != Y.n:
        raise DimensionMismatch(f"dimensions {X.n} and {Y.n}")
    out = NdElement(X.n)
    for (i, s), c in X.terms.items():
        for (j, v), d in Y.terms.items():
            out = out + (c * d) * _basis_bracket(i, s, j, v)
    return out


def nd_star(i: int, sigma: Sequence[int], j: int, nu: Sequence[int], lam=0, target: str = "right") -> NdElement:
    """``e^i_σ ∗ e^j_ν = (λδ_ij - ν_i) e^j_{σ+ν}``.

    ``target="left"`` puts the result on ``e^i_{σ+ν}`` instead; that variant
    does not antisymmetrize to the bracket and is kept for comparison.
    """
    sigma, nu = tuple(sigma), tuple(nu)
    n = len(sigma)
    if len(nu) != n:
        raise DimensionMismatch(f"multi-degrees of lengths {n} and {len(nu)}")
    if not (1 <= i <= n and 1 <= j <= n):
        raise DimensionMismatch(f"directions must lie in 1..{n}")
    lam = as_ratfunc(lam)
    c = (lam if i == j else ZERO) - nu[i - 1]
    return NdElement(n, {(j if target == "right" else i, _add(sigma, nu)): c})


def nd_mul(X: NdElement, Y: NdElement, lam=0, target: str = "right") -> NdElement:
    if X.n != Y.n:
        raise DimensionMismatch(f"dimensions {X.n} and {Y.n}")
    out = NdElement(X.n)
    for (i, s), c in X.terms.items():
        for (j, v), d in Y.terms.items():
            out = out + (c * d) * nd_star(i, s, j, v, lam, target)
    return out


def nd_quasiassoc_residual(a: NdElement, b: NdElement, c: NdElement, lam=0, target: str = "right") -> NdElement:
    """``(a,b,c) - (b,a,c)`` for the associator ``(a,b,c) = a∗(b∗c) - (a∗b)∗c``."""
    m = lambda x, y: nd_mul(x, y, lam, target)
    return m(a, m(b, c)) - m(m(a, b), c) - m(b, m(a, c)) + m(m(b, a), c)


# vectorized sweeps --------------------------------------------------------
#
# Products of basis vectors have coefficient (λδ_ij - ν_i) and land on the
# right factor's direction, so for fixed directions every term of a residual
# lands on one common basis vector and only integer coefficient arrays need
# comparing.  λ = a/b is handled by scaling every coefficient by b.


def _grid(n: int, window: int) -> np.ndarray:
    pts = list(itertools.product(range(-window, window + 1), repeat=n))
    return np.array(pts, dtype=np.int64).reshape(len(pts), n)


def _scaled(lam) -> Tuple[int, int]:
    lam = Fraction(lam)
    return lam.numerator, lam.denominator


def nd_sweep_antisymmetry(n: int, window: int, lam=0) -> List[Tuple]:
    """Pairs (e^i_σ, e^j_ν) in the window where ``a∗b - b∗a ≠ [a, b]``."""
    a, b = _scaled(lam)
    G = _grid(n, window)
    failures = []
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            d = 1 if i == j else 0
            nu_i = G[:, i - 1][None, :]  # right factor ν over axis 1
            sg_j = G[:, j - 1][:, None]  # left factor σ over axis 0
            # a∗b = (λd - ν_i) e^j, b∗a = (λd - σ_j) e^i, scaled by b
            ab = a * d - b * nu_i
            ba = a * d - b * sg_j
            br_j = b * (d - nu_i)
            br_i = b * (d - sg_j)
            if i == j:
                bad = (ab - ba) != (br_j - br_i)
            else:
                bad = (ab != br_j) | (ba != br_i)
            bad = np.broadcast_to(bad, (len(G), len(G)))
            for s_idx, v_idx in zip(*np.nonzero(bad)):
                failures.append((i, tuple(G[s_idx]), j, tuple(G[v_idx])))
                if len(failures) >= 10:
                    return failures
    return failures


def nd_sweep_quasiassoc(n: int, window: int, lam=0, block: int = 64) -> Tuple[int, List[Tuple]]:
    """Exhaustive quasiassociativity check on basis triples in the window.

    Returns ``(checked, failures)``; each triple is evaluated term by term
    as ``a∗(b∗c) - (a∗b)∗c - b∗(a∗c) + (b∗a)∗c`` on integer arrays.
    """
    a_, b_ = _scaled(lam)
    G = _grid(n, window)
    N = len(G)
    failures: List[Tuple] = []
    checked = 0
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            for k in range(1, n + 1):
                dij, djk, dik = (int(i == j), int(j == k), int(i == k))
                for start in range(0, N, block):
                    S = G[start:start + block]  # a's degrees, axis 0
                    s_ = S[:, None, None, :]
                    v_ = G[None, :, None, :]
                    r_ = G[None, None, :, :]
                    # b∗c = (λδ_jk - ρ_j) e^k_{ν+ρ}; a∗(b∗c) uses (ν+ρ)_i
                    bc = a_ * djk - b_ * r_[..., j - 1]
                    a_bc = bc * (a_ * dik - b_ * (v_[..., i - 1] + r_[..., i - 1]))
                    ab = a_ * dij - b_ * v_[..., i - 1]
                    ab_c = ab * (a_ * djk - b_ * r_[..., j - 1])
                    ac = a_ * dik - b_ * r_[..., i - 1]
                    b_ac = ac * (a_ * djk - b_ * (s_[..., j - 1] + r_[..., j - 1]))
                    ba = a_ * dij - b_ * s_[..., j - 1]
                    ba_c = ba * (a_ * dik - b_ * r_[..., i - 1])
                    resid = a_bc - ab_c - b_ac + ba_c
                    resid = np.broadcast_to(resid, (len(S), N, N))
                    checked += resid.size
                    if failures or resid.any():
                        for x, y, z in zip(*np.nonzero(resid)):
                            if len(failures) < 10:
                                failures.append((i, tuple(S[x]), j, tuple(G[y]), k, tuple(G[z])))
    return checked, failures
