"""ℤ-graded quasiassociative algebras ``e_p * e_q = f(p, q) e_{p+q}``.

A structure family supplies the scalar ``f(p, q)``.  Elements are finitely
supported combinations of the ``e_p`` plus a coefficient of the central
element θ, which multiplies everything to zero.  A central charge is a
function ``φ`` of one integer defining ``Ω(e_p, e_q) = φ(p) δ⁰_{p+q}``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Dict, Iterable, List, Mapping, Optional, Tuple

from .errors import InfeasibleWindow
from .linalg import in_span, nullspace, rank
from .scalars import EPS, ONE, ZERO, RatFunc, as_ratfunc, ratfunc_eval

__all__ = [
    "StructureFamily",
    "VirasoroEps",
    "Lambda",
    "Table",
    "EvaluatedFamily",
    "GradedElement",
    "CentralCharge",
    "DualVector",
    "structure_coeff",
    "mul",
    "extended_mul",
    "commutator",
    "quasiassoc_residual",
    "quasiassoc_pairs",
    "lie_boundary_residual",
    "central_phi",
    "cocycle_residual",
    "cocycle_pairs",
    "antisymmetrize",
    "trivial_cocycle",
    "solve_central_extensions",
    "in_solution_space",
    "is_lie_coboundary",
    "equivalent_charges",
    "load_family",
    "family_from_spec",
]


# ---------------------------------------------------------------------------
# structure families


class StructureFamily:
    """Base class: a rule ``(p, q) -> f(p, q)``."""

    name = "family"

    def coeff(self, p: int, q: int) -> RatFunc:
        raise NotImplementedError

    def covers(self, pairs: Iterable[Tuple[int, int]]) -> bool:
        """Whether every pair lies where the family is genuinely defined."""
        return True

    def describe(self) -> str:
        return self.name


@lru_cache(maxsize=None)
def _virasoro_f(p: int, q: int) -> RatFunc:
    return -q * (1 + q * EPS) / (1 + (p + q) * EPS)


@dataclass(frozen=True)
class VirasoroEps(StructureFamily):
    """``f(p, q) = -q(1 + εq) / (1 + ε(p + q))``."""

    name = "virasoro"

    def coeff(self, p, q):
        return _virasoro_f(p, q)


@dataclass(frozen=True)
class Lambda(StructureFamily):
    """``f(p, q) = λ - q`` for a rational constant λ."""

    lam: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "lam", Fraction(self.lam))

    @property
    def name(self):
        return f"lambda={self.lam}"

    def coeff(self, p, q):
        return RatFunc.const(self.lam - q)


class Table(StructureFamily):
    """Explicit finite table of ``f``; zero off the table.

    ``window`` bounds the indices on which the table is declared complete.
    Residual sweeps must stay inside it (see :meth:`covers`).
    """

    def __init__(self, entries: Mapping[Tuple[int, int], object], window: Optional[int] = None):
        self.entries: Dict[Tuple[int, int], RatFunc] = {}
        for (p, q), v in entries.items():
            v = as_ratfunc(v)
            if v:
                self.entries[(int(p), int(q))] = v
        if window is None:
            window = max((max(abs(p), abs(q)) for p, q in entries), default=0)
        self.window = window

    name = "table"

    @classmethod
    def from_function(cls, fn: Callable[[int, int], object], window: int) -> "Table":
        return cls(
            {(p, q): fn(p, q) for p in range(-window, window + 1) for q in range(-window, window + 1)},
            window=window,
        )

    def coeff(self, p, q):
        return self.entries.get((p, q), ZERO)

    def covers(self, pairs):
        w = self.window
        return all(abs(p) <= w and abs(q) <= w for p, q in pairs)

    def to_json(self):
        return {
            "kind": "table",
            "window": self.window,
            "entries": [
                {"p": p, "q": q, "ratfunc": v.to_json()} for (p, q), v in sorted(self.entries.items())
            ],
        }

    @classmethod
    def from_json(cls, data) -> "Table":
        records = data["entries"] if isinstance(data, dict) else data
        window = data.get("window") if isinstance(data, dict) else None
        return cls({(r["p"], r["q"]): RatFunc.from_json(r["ratfunc"]) for r in records}, window=window)

    def __eq__(self, other):
        return isinstance(other, Table) and self.entries == other.entries and self.window == other.window

    def __repr__(self):
        return f"Table(<{len(self.entries)} entries>, window={self.window})"


class EvaluatedFamily(StructureFamily):
    """A family with ε specialised to a number; poles raise PoleAtEpsilon."""

    def __init__(self, base: StructureFamily, eps_value: Fraction):
        self.base = base
        self.eps_value = Fraction(eps_value)
        self._cache: Dict[Tuple[int, int], RatFunc] = {}

    @property
    def name(self):
        return f"{self.base.name}@eps={self.eps_value}"

    def coeff(self, p, q):
        key = (p, q)
        if key not in self._cache:
            self._cache[key] = RatFunc.const(ratfunc_eval(self.base.coeff(p, q), self.eps_value))
        return self._cache[key]

    def covers(self, pairs):
        return self.base.covers(pairs)


def family_from_spec(text: str) -> StructureFamily:
    """Parse ``virasoro``, ``lambda=<p/q>`` or a path to a table file."""
    if text in ("virasoro", "virasoro-eps", "eps"):
        return VirasoroEps()
    if text.startswith("lambda"):
        _, _, value = text.partition("=")
        return Lambda(Fraction(value or "0"))
    return load_family(text)


def load_family(path) -> Table:
    with open(path) as fh:
        return Table.from_json(json.load(fh))


def structure_coeff(fam: StructureFamily, p: int, q: int) -> RatFunc:
    return fam.coeff(p, q)


# ---------------------------------------------------------------------------
# elements


class GradedElement:
    """``Σ c_p e_p + c θ`` with finitely many nonzero ``c_p``."""

    __slots__ = ("coeffs", "central")

    def __init__(self, coeffs: Optional[Mapping[int, object]] = None, central=ZERO):
        clean = {}
        for p, c in (coeffs or {}).items():
            c = as_ratfunc(c)
            if c:
                clean[int(p)] = c
        self.coeffs: Dict[int, RatFunc] = clean
        self.central: RatFunc = as_ratfunc(central)

    @classmethod
    def basis(cls, p: int, coeff=ONE) -> "GradedElement":
        return cls({p: coeff})

    @classmethod
    def theta(cls, coeff=ONE) -> "GradedElement":
        return cls({}, coeff)

    @classmethod
    def zero(cls) -> "GradedElement":
        return cls()

    def is_zero(self) -> bool:
        return not self.coeffs and not self.central

    __bool__ = lambda self: not self.is_zero()

    def __getitem__(self, p: int) -> RatFunc:
        return self.coeffs.get(p, ZERO)

    def support(self):
        return sorted(self.coeffs)

    def _combine(self, other, sign):
        out = dict(self.coeffs)
        for p, c in other.coeffs.items():
            out[p] = out.get(p, ZERO) + (c if sign > 0 else -c)
        central = self.central + other.central if sign > 0 else self.central - other.central
        return GradedElement(out, central)

    def __add__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self._combine(other, 1)

    def __sub__(self, other):
        if not isinstance(other, GradedElement):
            return NotImplemented
        return self._combine(other, -1)

    def __neg__(self):
        return GradedElement({p: -c for p, c in self.coeffs.items()}, -self.central)

    def scale(self, k) -> "GradedElement":
        k = as_ratfunc(k)
        if not k:
            return GradedElement()
        return GradedElement({p: k * c for p, c in self.coeffs.items()}, k * self.central)

    def __mul__(self, k):
        if isinstance(k, GradedElement):
            return NotImplemented
        return self.scale(k)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, GradedElement):
            return self.coeffs == other.coeffs and self.central == other.central
        if other == 0:
            return self.is_zero()
        return NotImplemented

    def __hash__(self):
        return hash((frozenset(self.coeffs.items()), self.central))

    def __repr__(self):
        terms = [f"({c})·e_{p}" for p, c in sorted(self.coeffs.items())]
        if self.central:
            terms.append(f"({self.central})·θ")
        return "GradedElement(" + (" + ".join(terms) or "0") + ")"

    def to_json(self):
        out = {"coeffs": [[p, c.to_json()] for p, c in sorted(self.coeffs.items())]}
        if self.central:
            out["central"] = self.central.to_json()
        return out

    @classmethod
    def from_json(cls, data) -> "GradedElement":
        coeffs = {int(p): RatFunc.from_json(c) for p, c in data.get("coeffs", [])}
        central = RatFunc.from_json(data["central"]) if "central" in data else ZERO
        return cls(coeffs, central)


class CentralCharge:
    """``φ: ℤ → ℚ(ε)`` with ``Ω(e_p, e_q) = φ(p) δ⁰_{p+q}``."""

    def __init__(self, phi: Callable[[int], object] | Mapping[int, object], name: str = "phi"):
        if isinstance(phi, Mapping):
            table = {int(k): as_ratfunc(v) for k, v in phi.items()}
            self._phi = lambda p: table.get(p, ZERO)
            self.table = table
        else:
            self._phi = lambda p: as_ratfunc(phi(p))
            self.table = None
        self.name = name

    @classmethod
    def virasoro(cls) -> "CentralCharge":
        return cls(central_phi, name="virasoro")

    def __call__(self, p: int) -> RatFunc:
        return self._phi(p)

    def omega(self, p: int, q: int) -> RatFunc:
        return self._phi(p) if p + q == 0 else ZERO

    def __sub__(self, other):
        return CentralCharge(lambda p: self(p) - other(p), name=f"{self.name}-{other.name}")

    def to_records(self, window: int):
        return [{"p": p, "ratfunc": self(p).to_json()} for p in range(-window, window + 1)]

    @classmethod
    def from_records(cls, records) -> "CentralCharge":
        return cls({r["p"]: RatFunc.from_json(r["ratfunc"]) for r in records}, name="table")


class DualVector:
    """Finitely supported functional ``u`` with ``u(e_p) = u_p``."""

    def __init__(self, components: Optional[Mapping[int, object]] = None):
        self.components = {int(p): as_ratfunc(c) for p, c in (components or {}).items() if as_ratfunc(c)}

    @classmethod
    def dual_basis(cls, p: int) -> "DualVector":
        return cls({p: ONE})

    def __getitem__(self, p: int) -> RatFunc:
        return self.components.get(p, ZERO)

    def __call__(self, a: GradedElement) -> RatFunc:
        acc = ZERO
        for p, c in a.coeffs.items():
            u = self.components.get(p)
            if u is not None:
                acc = acc + u * c
        return acc


# ---------------------------------------------------------------------------
# products


def mul(fam: StructureFamily, a: GradedElement, b: GradedElement) -> GradedElement:
    """Centerless product; θ components are annihilated."""
    out: Dict[int, RatFunc] = {}
    for p, x in a.coeffs.items():
        for q, y in b.coeffs.items():
            f = fam.coeff(p, q)
            if f:
                out[p + q] = out.get(p + q, ZERO) + x * y * f
    return GradedElement(out)


def extended_mul(fam: StructureFamily, cc: CentralCharge, a: GradedElement, b: GradedElement) -> GradedElement:
    prod = mul(fam, a, b)
    central = ZERO
    for p, x in a.coeffs.items():
        y = b.coeffs.get(-p)
        if y is not None:
            central = central + x * y * cc(p)
    return GradedElement(prod.coeffs, central)


def commutator(fam: StructureFamily, a: GradedElement, b: GradedElement) -> GradedElement:
    return mul(fam, a, b) - mul(fam, b, a)


def quasiassoc_pairs(p, q, r):
    return [(p, q), (q, p), (p + q, r), (q, r), (p, q + r), (p, r), (q, p + r)]


def quasiassoc_residual(fam: StructureFamily, p: int, q: int, r: int) -> RatFunc:
    """Zero iff ``e_p, e_q, e_r`` satisfy the left-symmetric associator identity."""
    f = fam.coeff
    return (f(p, q) - f(q, p)) * f(p + q, r) - f(q, r) * f(p, q + r) + f(p, r) * f(q, p + r)


def lie_boundary_residual(fam: StructureFamily, p: int, q: int) -> RatFunc:
    return fam.coeff(p, q) - fam.coeff(q, p) - (p - q)


@lru_cache(maxsize=None)
def central_phi(p: int) -> RatFunc:
    """``φ(p) = (p³ - ε⁻¹p² - p + εp²)/2``."""
    return (p**3 - p * p / EPS - p + p * p * EPS) / 2


def cocycle_pairs(p, q, r):
    return [(p, r), (q, r), (p, q), (q, p)]


def cocycle_residual(fam: StructureFamily, cc: CentralCharge, p: int, q: int, r: int) -> RatFunc:
    """``Ω(e_q, e_p*e_r) - Ω(e_p, e_q*e_r) + Ω([e_p, e_q], e_r)``."""
    if p + q + r != 0:
        return ZERO
    f = fam.coeff
    return f(p, r) * cc(q) - f(q, r) * cc(p) + (f(p, q) - f(q, p)) * cc(p + q)


def antisymmetrize(cc: CentralCharge, p: int, q: int) -> RatFunc:
    """``ω(e_p, e_q) = Ω(e_p, e_q) - Ω(e_q, e_p)``."""
    if p + q != 0:
        return ZERO
    return cc(p) - cc(q)


def trivial_cocycle(u: DualVector, fam: StructureFamily, p: int, q: int) -> RatFunc:
    """``⟨u, e_p * e_q⟩``."""
    c = u[p + q]
    if not c:
        return ZERO
    return c * fam.coeff(p, q)


# ---------------------------------------------------------------------------
# cocycle linear algebra


def _cocycle_rows(fam: StructureFamily, window: int):
    n = 2 * window + 1
    rows = []
    for p in range(-window, window + 1):
        for q in range(-window, window + 1):
            r = -p - q
            if abs(r) > window or not fam.covers(cocycle_pairs(p, q, r)):
                continue
            row = [ZERO] * n
            row[q + window] += fam.coeff(p, r)
            row[p + window] -= fam.coeff(q, r)
            row[p + q + window] += fam.coeff(p, q) - fam.coeff(q, p)
            if any(row):
                rows.append(row)
    return rows


def solve_central_extensions(fam: StructureFamily, window: int) -> List[Dict[int, RatFunc]]:
    """Basis of all ``φ`` on ``[-window, window]`` solving the cocycle condition.

    Every triple with ``p + q + r = 0`` and all indices in the window
    contributes one linear equation in the unknowns ``φ(-window..window)``.
    """
    if window < 2:
        raise InfeasibleWindow(f"window must be at least 2, got {window}")
    rows = _cocycle_rows(fam, window)
    basis = nullspace(rows, 2 * window + 1, one=ONE, zero=ZERO)
    return [{p: v[p + window] for p in range(-window, window + 1)} for v in basis]


def _vec(phi, window):
    return [as_ratfunc(phi(p)) for p in range(-window, window + 1)]


def in_solution_space(basis: List[Dict[int, RatFunc]], phi: Callable[[int], object], window: int) -> bool:
    vectors = [[b[p] for p in range(-window, window + 1)] for b in basis]
    return in_span(vectors, _vec(phi, window), 2 * window + 1)


def is_lie_coboundary(cc: Callable[[int], object], window: int) -> bool:
    """Whether ``φ(p) - φ(-p) = 2cp`` on the window for a single scalar ``c``.

    That is exactly the antisymmetrization ``⟨u, [e_p, e_{-p}]⟩`` of some
    functional, i.e. the induced Lie extension is not proper.
    """
    target = [as_ratfunc(cc(p)) - as_ratfunc(cc(-p)) for p in range(1, window + 1)]
    shape = [RatFunc.const(2 * p) for p in range(1, window + 1)]
    return in_span([shape], target, window)


def equivalent_charges(fam: StructureFamily, cc1: CentralCharge, cc2: CentralCharge, window: int) -> bool:
    """Whether ``cc1 - cc2`` equals ``c·f(p, -p)`` for one scalar ``c`` on the window.

    That is the trivial cocycle of ``u = c·e₀*``, the only functional
    contributing to ``δ⁰_{p+q}``-supported forms.
    """
    diff = [cc1(p) - cc2(p) for p in range(-window, window + 1)]
    triv = [fam.coeff(p, -p) for p in range(-window, window + 1)]
    n = 2 * window + 1
    return rank([triv, diff], n) == rank([triv], n)
