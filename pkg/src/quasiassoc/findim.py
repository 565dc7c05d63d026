"""Finite-dimensional algebras given by structure constants.

``theta[s][i][j]`` is the coefficient of ``e_s`` in ``e_i e_j``; indices are
0-based.  Linear maps are square matrices acting on coordinate columns:
``D(e_i) = Σ_r D[r][i] e_r``.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .errors import (
    DimensionMismatch,
    IndexOutOfRange,
    NotDerivation,
    NotLieRep,
    ShapeMismatch,
    WindowTooSmall,
)
from .graded import StructureFamily
from .scalars import ONE, ZERO, RatFunc, as_ratfunc

__all__ = [
    "FinAlgebra",
    "LieConstants",
    "CotangentAlgebra",
    "fd_quasiassoc_residual",
    "fd_associativity_residual",
    "fd_lie_constants",
    "fd_is_derivation",
    "is_quasiassociative",
    "is_associative",
    "first_nonzero",
    "left_mult",
    "ad",
    "semidirect",
    "ehrenfest",
    "cotangent",
    "cotangent_lie_check",
    "symplectic_form",
    "symplectic_cocycle_residual",
    "der_inclusion_check",
    "no_associative_witness",
    "matrix_units",
    "upper_triangular",
    "random_lie_rep_2d",
    "random_invertible",
]

Matrix = List[List[RatFunc]]


def _zeros(n, m=None) -> Matrix:
    return [[ZERO] * (n if m is None else m) for _ in range(n)]


def _matmul(A: Matrix, B: Matrix) -> Matrix:
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    out = _zeros(n, m)
    for i in range(n):
        Ai = A[i]
        for t in range(k):
            a = Ai[t]
            if a:
                Bt = B[t]
                row = out[i]
                for j in range(m):
                    if Bt[j]:
                        row[j] = row[j] + a * Bt[j]
    return out


def _matsub(A, B):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(A, B)]


def _as_matrix(M, d: Optional[int] = None) -> Matrix:
    rows = [[as_ratfunc(x) for x in row] for row in M]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ShapeMismatch("matrix is not square")
    if d is not None and n != d:
        raise DimensionMismatch(f"expected a {d}x{d} matrix, got {n}x{n}")
    return rows


class FinAlgebra:
    """Algebra on ``dim`` basis vectors with structure constants ``theta``."""

    def __init__(self, dim: int, theta=None, labels: Optional[Sequence[str]] = None):
        if dim < 1:
            raise ValueError("dimension must be at least 1")
        self.dim = dim
        self.labels = list(labels) if labels else [f"e{i}" for i in range(dim)]
        # sparse: products[(i, j)] = {s: value}
        self.products: Dict[Tuple[int, int], Dict[int, RatFunc]] = {}
        if theta is None:
            return
        if isinstance(theta, dict):
            items = theta.items()
        else:
            if len(theta) != dim or any(len(m) != dim or any(len(r) != dim for r in m) for m in theta):
                raise ShapeMismatch("theta must be dim x dim x dim")
            items = (((s, i, j), theta[s][i][j]) for s in range(dim) for i in range(dim) for j in range(dim))
        for (s, i, j), v in items:
            self._set(s, i, j, v)

    def _set(self, s, i, j, v):
        for x in (s, i, j):
            if not 0 <= x < self.dim:
                raise IndexOutOfRange(f"index {x} outside 0..{self.dim - 1}")
        v = as_ratfunc(v)
        row = self.products.setdefault((i, j), {})
        if v:
            row[s] = v
        else:
            row.pop(s, None)

    def theta(self, s: int, i: int, j: int) -> RatFunc:
        return self.products.get((i, j), {}).get(s, ZERO)

    def product(self, i: int, j: int) -> Dict[int, RatFunc]:
        return self.products.get((i, j), {})

    def mul(self, u: Sequence, v: Sequence) -> List[RatFunc]:
        """Product of coordinate vectors."""
        out = [ZERO] * self.dim
        for (i, j), row in self.products.items():
            if u[i] and v[j]:
                c = u[i] * v[j]
                for s, t in row.items():
                    out[s] = out[s] + c * t
        return out

    def basis(self, i: int) -> List[RatFunc]:
        v = [ZERO] * self.dim
        v[i] = ONE
        return v

    def is_abelian(self) -> bool:
        return not any(self.products.values())

    @classmethod
    def from_graded(cls, fam: StructureFamily, window: int) -> "FinAlgebra":
        """Truncation of a graded family to degrees in ``[-window, window]``.

        Products leaving the window are dropped, so identities only hold
        for triples whose intermediate degrees stay inside.
        """
        degrees = list(range(-window, window + 1))
        idx = {p: k for k, p in enumerate(degrees)}
        A = cls(len(degrees), labels=[f"e_{p}" for p in degrees])
        for p in degrees:
            for q in degrees:
                if p + q in idx:
                    A._set(idx[p + q], idx[p], idx[q], fam.coeff(p, q))
        return A

    def to_json(self):
        rows = []
        for (i, j), row in sorted(self.products.items()):
            for s, v in sorted(row.items()):
                rows.append([s, i, j, v.to_json()])
        return {"dim": self.dim, "theta": rows}

    @classmethod
    def from_json(cls, data) -> "FinAlgebra":
        return cls(data["dim"], {(s, i, j): RatFunc.from_json(v) for s, i, j, v in data["theta"]})

    def __eq__(self, other):
        if not isinstance(other, FinAlgebra) or other.dim != self.dim:
            return NotImplemented
        keys = set(self.products) | set(other.products)
        return all(self.product(i, j) == other.product(i, j) for i, j in keys)

    def __repr__(self):
        nnz = sum(len(r) for r in self.products.values())
        return f"FinAlgebra(dim={self.dim}, nonzero={nnz})"


def _check_indices(A: FinAlgebra, *idx):
    for x in idx:
        if not 0 <= x < A.dim:
            raise IndexOutOfRange(f"index {x} outside 0..{A.dim - 1}")


def _triple(A: FinAlgebra, i: int, j: int, k: int) -> Dict[int, RatFunc]:
    """Coordinates of ``e_i (e_j e_k)``."""
    out: Dict[int, RatFunc] = {}
    for s, t in A.product(j, k).items():
        for r, u in A.product(i, s).items():
            out[r] = out.get(r, ZERO) + t * u
    return out


def _triple_left(A: FinAlgebra, i: int, j: int, k: int) -> Dict[int, RatFunc]:
    """Coordinates of ``(e_i e_j) e_k``."""
    out: Dict[int, RatFunc] = {}
    for s, t in A.product(i, j).items():
        for r, u in A.product(s, k).items():
            out[r] = out.get(r, ZERO) + t * u
    return out


def fd_quasiassoc_residual(A: FinAlgebra, i: int, j: int, k: int, r: int) -> RatFunc:
    """``Σ_s(θ^s_jk θ^r_is - θ^s_ik θ^r_js) - Σ_s c^s_ij θ^r_sk``."""
    _check_indices(A, i, j, k, r)
    z = ZERO
    return (
        _triple(A, i, j, k).get(r, z)
        - _triple(A, j, i, k).get(r, z)
        - _triple_left(A, i, j, k).get(r, z)
        + _triple_left(A, j, i, k).get(r, z)
    )


def fd_associativity_residual(A: FinAlgebra, i: int, j: int, k: int, r: int) -> RatFunc:
    """``Σ_s θ^s_ij θ^r_sk - Σ_s θ^s_jk θ^r_is``."""
    _check_indices(A, i, j, k, r)
    return _triple_left(A, i, j, k).get(r, ZERO) - _triple(A, i, j, k).get(r, ZERO)


def first_nonzero(fn, A: FinAlgebra):
    """First quadruple where ``fn(A, i, j, k, r)`` is nonzero, else None."""
    for q in itertools.product(range(A.dim), repeat=4):
        if fn(A, *q):
            return q
    return None


def is_quasiassociative(A: FinAlgebra) -> bool:
    return first_nonzero(fd_quasiassoc_residual, A) is None


def is_associative(A: FinAlgebra) -> bool:
    return first_nonzero(fd_associativity_residual, A) is None


@dataclass
class LieConstants:
    c: List[List[List[RatFunc]]]  # c[s][i][j]
    jacobi_ok: bool
    jacobi_witness: Optional[Tuple[int, int, int, int]] = None

    def bracket(self, i, j) -> Dict[int, RatFunc]:
        return {s: self.c[s][i][j] for s in range(len(self.c)) if self.c[s][i][j]}


def fd_lie_constants(A: FinAlgebra) -> LieConstants:
    d = A.dim
    c = [[[A.theta(s, i, j) - A.theta(s, j, i) for j in range(d)] for i in range(d)] for s in range(d)]
    witness = None
    for i, j, k, r in itertools.product(range(d), repeat=4):
        tot = ZERO
        for s in range(d):
            for (x, y, z) in ((i, j, k), (j, k, i), (k, i, j)):
                if c[s][x][y] and c[r][s][z]:
                    tot = tot + c[s][x][y] * c[r][s][z]
        if tot:
            witness = (i, j, k, r)
            break
    return LieConstants(c, witness is None, witness)


def left_mult(A: FinAlgebra, u: Sequence) -> Matrix:
    """Matrix of ``x ↦ u x``."""
    d = A.dim
    M = _zeros(d)
    for i in range(d):
        col = A.mul(u, A.basis(i))
        for r in range(d):
            M[r][i] = col[r]
    return M


def ad(A: FinAlgebra, u: Sequence) -> Matrix:
    """Matrix of ``x ↦ u x - x u``."""
    d = A.dim
    M = _zeros(d)
    for i in range(d):
        e = A.basis(i)
        left, right = A.mul(u, e), A.mul(e, u)
        for r in range(d):
            M[r][i] = left[r] - right[r]
    return M


def _apply(D: Matrix, v: Sequence) -> List[RatFunc]:
    return [sum((D[r][i] * v[i] for i in range(len(v)) if v[i] and D[r][i]), ZERO) for r in range(len(D))]


@dataclass
class DerivationCheck:
    ok: bool
    witness: Optional[Tuple[int, int]] = None

    def __bool__(self):
        return self.ok


def fd_is_derivation(D, A: FinAlgebra, bracket: bool = False) -> DerivationCheck:
    """``D(uv) = D(u)v + uD(v)`` on basis pairs (or the commutator if ``bracket``)."""
    D = _as_matrix(D)
    if len(D) != A.dim:
        raise DimensionMismatch(f"{len(D)}x{len(D)} map on a {A.dim}-dimensional algebra")
    if bracket:
        mul = lambda u, v: [x - y for x, y in zip(A.mul(u, v), A.mul(v, u))]
    else:
        mul = A.mul
    for i in range(A.dim):
        for j in range(A.dim):
            u, v = A.basis(i), A.basis(j)
            lhs = _apply(D, mul(u, v))
            rhs = [x + y for x, y in zip(mul(_apply(D, u), v), mul(u, _apply(D, v)))]
            if lhs != rhs:
                return DerivationCheck(False, (i, j))
    return DerivationCheck(True)


@dataclass
class InclusionReport:
    is_derivation: bool
    is_lie_derivation: bool
    derivation_witness: Optional[Tuple[int, int]] = None
    lie_witness: Optional[Tuple[int, int]] = None

    @property
    def consistent(self) -> bool:
        """Every algebra derivation is a derivation of the commutator bracket."""
        return self.is_lie_derivation or not self.is_derivation


def der_inclusion_check(R: FinAlgebra, D) -> InclusionReport:
    a = fd_is_derivation(D, R)
    b = fd_is_derivation(D, R, bracket=True)
    return InclusionReport(a.ok, b.ok, a.witness, b.witness)


# ---------------------------------------------------------------------------
# constructions


def semidirect(R: FinAlgebra, U: FinAlgebra, chi: Sequence) -> FinAlgebra:
    """``(a, u)(b, v) = (ab, a.v + uv)`` on ``R ⊕ U``.

    ``chi[i]`` is the matrix of the action of ``e_i ∈ R`` on ``U``.  It must
    represent the commutator algebra of ``R`` and act by derivations of
    ``U`` (automatic when ``U`` is abelian).
    """
    dR, dU = R.dim, U.dim
    if len(chi) != dR:
        raise DimensionMismatch(f"need {dR} action matrices, got {len(chi)}")
    mats = [_as_matrix(m, dU) for m in chi]
    lie = fd_lie_constants(R)
    for i in range(dR):
        for j in range(dR):
            comm = _matsub(_matmul(mats[i], mats[j]), _matmul(mats[j], mats[i]))
            target = _zeros(dU)
            for s in range(dR):
                c = lie.c[s][i][j]
                if c:
                    target = [[t + c * m for t, m in zip(tr, mr)] for tr, mr in zip(target, mats[s])]
            if comm != target:
                raise NotLieRep(f"action does not represent the commutator at ({i}, {j})", (i, j))
    if not U.is_abelian():
        for i, m in enumerate(mats):
            chk = fd_is_derivation(m, U)
            if not chk:
                raise NotDerivation(f"action of e_{i} is not a derivation of U at {chk.witness}", (i,) + chk.witness)
    out = FinAlgebra(dR + dU, labels=list(R.labels) + [f"u{k}" for k in range(dU)])
    for (i, j), row in R.products.items():
        for s, v in row.items():
            out._set(s, i, j, v)
    for i, m in enumerate(mats):
        for j in range(dU):
            for r in range(dU):
                if m[r][j]:
                    out._set(dR + r, i, dR + j, m[r][j])
    for (i, j), row in U.products.items():
        for s, v in row.items():
            out._set(dR + s, dR + i, dR + j, v)
    return out


def ehrenfest(A, d: Optional[int] = None) -> FinAlgebra:
    """``e_i ē_j = A_{ji} ē_j``, all other products zero; basis ``e_1..e_d, ē_1..ē_d``."""
    try:
        rows = [list(r) for r in A]
    except TypeError:
        raise ShapeMismatch("A must be a square matrix") from None
    n = len(rows)
    if d is not None and d != n:
        raise ShapeMismatch(f"A is {n}x{n}, expected {d}x{d}")
    if n == 0 or any(len(r) != n for r in rows):
        raise ShapeMismatch("A must be a nonempty square matrix")
    out = FinAlgebra(2 * n, labels=[f"e{i + 1}" for i in range(n)] + [f"ē{i + 1}" for i in range(n)])
    for i in range(n):
        for j in range(n):
            if rows[j][i]:
                out._set(n + j, i, n + j, rows[j][i])
    return out


def matrix_units(n: int = 2) -> FinAlgebra:
    """Associative algebra of n×n matrices on the units ``E_ab``."""
    idx = {(a, b): k for k, (a, b) in enumerate(itertools.product(range(n), repeat=2))}
    A = FinAlgebra(n * n, labels=[f"E{a}{b}" for a, b in idx])
    for (a, b), i in idx.items():
        for (c, e), j in idx.items():
            if b == c:
                A._set(idx[(a, e)], i, j, 1)
    return A


def upper_triangular() -> FinAlgebra:
    """Associative algebra of upper-triangular 2×2 matrices (E00, E01, E11)."""
    units = [(0, 0), (0, 1), (1, 1)]
    idx = {u: k for k, u in enumerate(units)}
    A = FinAlgebra(3, labels=["E00", "E01", "E11"])
    for (a, b), i in idx.items():
        for (c, e), j in idx.items():
            if b == c:
                A._set(idx[(a, e)], i, j, 1)
    return A


def random_invertible(rng: random.Random, n: int) -> Tuple[Matrix, Matrix]:
    """Random unimodular-ish matrix and its inverse (via elementary operations)."""
    P = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    Q = [row[:] for row in P]
    for _ in range(2 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        if i == j:
            break
        t = as_ratfunc(Fraction(rng.randint(-3, 3), rng.randint(1, 2)))
        # P ← E P with E = I + t e_ij ; Q ← Q E⁻¹
        P[i] = [x + t * y for x, y in zip(P[i], P[j])]
        for row in Q:
            row[j] = row[j] - t * row[i]
    return P, Q


def random_lie_rep_2d(rng: random.Random, R: FinAlgebra) -> List[Matrix]:
    """Random representation of ``Lie(Ehrenfest(a))`` (dim 2) on a 2-dimensional space.

    With ``[e, ē] = a ē``: ``χ(e) = diag(x, x - a)``, ``χ(ē) = t·E01``,
    conjugated by a random invertible matrix.
    """
    a = R.theta(1, 0, 1) - R.theta(1, 1, 0)
    x = as_ratfunc(Fraction(rng.randint(-3, 3), rng.randint(1, 3)))
    t = as_ratfunc(rng.randint(-2, 2))
    chi_e = [[x, ZERO], [ZERO, x - a]]
    chi_b = [[ZERO, t], [ZERO, ZERO]]
    P, Q = random_invertible(rng, 2)
    return [_matmul(_matmul(P, m), Q) for m in (chi_e, chi_b)]


# ---------------------------------------------------------------------------
# cotangent extension


@dataclass
class CotangentAlgebra:
    base: FinAlgebra
    algebra: FinAlgebra

    @property
    def dim(self):
        return self.algebra.dim


def cotangent(R: FinAlgebra) -> CotangentAlgebra:
    """``(x, x̄)(y, ȳ) = (xy, x ȳ)`` with ``⟨x ȳ, y⟩ = -⟨ȳ, x y⟩``.

    Basis ``e_1..e_d, e*_1..e*_d``; ``e_i e*_j = -Σ_k θ^j_{ik} e*_k`` and
    products with a left factor in the dual block vanish.
    """
    d = R.dim
    out = FinAlgebra(2 * d, labels=list(R.labels) + [f"{l}*" for l in R.labels])
    for (i, j), row in R.products.items():
        for s, v in row.items():
            out._set(s, i, j, v)
            # θ^s_{ij} contributes to e_i e*_s along e*_j
            out._set(d + j, i, d + s, out.theta(d + j, i, d + s) - v)
    return CotangentAlgebra(R, out)


def cotangent_lie_check(R: FinAlgebra) -> Optional[Tuple[int, int]]:
    """Compare ``Lie(T*R)`` with the semidirect sum of ``Lie(R)`` and its dual action.

    The dual action is ``ρ(x) = -(L_x)ᵀ`` where ``L_x`` is left
    multiplication; returns the first mismatching basis pair or None.
    """
    d = R.dim
    T = cotangent(R).algebra
    lie_T = fd_lie_constants(T)
    lie_R = fd_lie_constants(R)
    L = [left_mult(R, R.basis(i)) for i in range(d)]
    # ρ(e_i)(e*_j) = -Σ_k L_i[j][k] e*_k
    expected = [[[ZERO] * (2 * d) for _ in range(2 * d)] for _ in range(2 * d)]
    for i in range(d):
        for j in range(d):
            for s in range(d):
                expected[s][i][j] = lie_R.c[s][i][j]
            for k in range(d):
                v = -L[i][j][k]
                expected[d + k][i][d + j] = expected[d + k][i][d + j] + v
                expected[d + k][d + j][i] = expected[d + k][d + j][i] - v
    for i in range(2 * d):
        for j in range(2 * d):
            for s in range(2 * d):
                if lie_T.c[s][i][j] != expected[s][i][j]:
                    return (i, j)
    # ρ^d(x)(y) - ρ^d(y)(x) = [x, y]: left multiplication reproduces the bracket
    for i in range(d):
        for j in range(d):
            for s in range(d):
                if L[i][s][j] - L[j][s][i] != lie_R.c[s][i][j]:
                    return (i, j)
    return None


def symplectic_form(d: int, a: Sequence, b: Sequence) -> RatFunc:
    """``⟨ā, b⟩ - ⟨b̄, a⟩`` on coordinate vectors of ``R ⊕ R*``."""
    tot = ZERO
    for k in range(d):
        tot = tot + a[d + k] * b[k] - b[d + k] * a[k]
    return tot


def symplectic_cocycle_residual(R: FinAlgebra, a: int, b: int, c: int) -> RatFunc:
    """``Ω(v, u w) - Ω(u, v w) + Ω([u, v], w)`` for basis vectors ``u, v, w`` of T*R."""
    T = cotangent(R).algebra if not isinstance(R, CotangentAlgebra) else R.algebra
    d = T.dim // 2
    _check_indices(T, a, b, c)
    u, v, w = T.basis(a), T.basis(b), T.basis(c)
    br = [x - y for x, y in zip(T.mul(u, v), T.mul(v, u))]
    return symplectic_form(d, v, T.mul(u, w)) - symplectic_form(d, u, T.mul(v, w)) + symplectic_form(d, br, w)


# ---------------------------------------------------------------------------
# graded products without an associative realization


def no_associative_witness(window: Sequence[int]) -> dict:
    """Trace of why no ``g`` with ``g(i,j) - g(j,i) = i - j`` is associative.

    Associativity ``g(i,j) g(i+j,k) = g(j,k) g(i,j+k)`` at ``j = k = 0``
    and ``i = j = 0`` forces ``g(r,0)`` and ``g(0,r)`` into ``{0, g(0,0)}``;
    then ``g(r,0) - g(0,r) = r`` forces ``g(0,0) = ±r`` for each nonzero
    ``r``, which is impossible for two values with ``r₁ ≠ ±r₂``.
    """
    W = sorted(set(int(x) for x in window))
    nonzero = [r for r in W if r]
    if 0 not in W:
        raise WindowTooSmall("window must contain 0")
    pair = next(((r1, r2) for r1, r2 in itertools.combinations(nonzero, 2) if r1 != r2 and r1 != -r2), None)
    if pair is None:
        raise WindowTooSmall("window needs two nonzero values r1, r2 with r1 != ±r2")
    steps = []
    for i in W:
        steps.append({
            "rule": "associativity at j = k = 0",
            "equation": f"g({i},0)*(g({i},0) - g(0,0)) = 0",
            "conclusion": f"g({i},0) in {{0, g(0,0)}}",
        })
    for k in W:
        steps.append({
            "rule": "associativity at i = j = 0",
            "equation": f"g(0,{k})*(g(0,{k}) - g(0,0)) = 0",
            "conclusion": f"g(0,{k}) in {{0, g(0,0)}}",
        })
    candidates = {}
    for r in nonzero:
        branches = []
        for a_zero, b_zero in itertools.product((True, False), repeat=2):
            lhs = {(True, True): "0", (True, False): "-g(0,0)", (False, True): "g(0,0)", (False, False): "0"}[(a_zero, b_zero)]
            if lhs == "0":
                verdict, value = f"0 = {r} is false", None
            else:
                value = -r if lhs.startswith("-") else r
                verdict = f"g(0,0) = {value}"
            branches.append({
                "g(r,0)": "0" if a_zero else "g(0,0)",
                "g(0,r)": "0" if b_zero else "g(0,0)",
                "difference": lhs,
                "verdict": verdict,
            })
        candidates[r] = sorted({r, -r})
        steps.append({
            "rule": "commutator boundary g(r,0) - g(0,r) = r",
            "r": r,
            "branches": branches,
            "conclusion": f"g(0,0) in {{{r}, {-r}}}",
        })
    r1, r2 = pair
    return {
        "header": {
            "window": W,
            "assumption": "coefficients lie in a ring without zero divisors",
        },
        "steps": steps,
        "contradiction": {
            "r1": r1,
            "r2": r2,
            "g00_candidates_r1": candidates[r1],
            "g00_candidates_r2": candidates[r2],
            "intersection": sorted(set(candidates[r1]) & set(candidates[r2])),
            "statement": f"no value of g(0,0) lies in both {{{r1}, {-r1}}} and {{{r2}, {-r2}}}",
        },
    }
