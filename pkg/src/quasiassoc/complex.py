"""Quasiassociative cochain and chain complexes over a graded structure family.

Cochains are multilinear maps on the basis ``e_p`` and are stored as finite
tables of their values on basis tuples; everything off the table is zero.  A
cochain of arity ``n`` may be skew in its first ``kappa`` slots, in which
case only sorted representatives are stored and evaluation applies the sign
of the sorting permutation.  The last slot is always on a separate footing.

Values live either in the scalars (``module="scalar"``) or in a graded module
with basis ``m_q``, represented by :class:`~quasiassoc.graded.GradedElement`
(``module="graded"``) on which the algebra acts through a
:class:`Representation`.

``delta`` does not materialise its result: the coboundary of a finitely
supported cochain has infinite support, so :class:`CoboundaryCochain`
evaluates pointwise and memoises.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from .errors import ArityMismatch, InvalidRightAction, ModuleMismatch, SkewnessError
from .graded import GradedElement, StructureFamily
from .scalars import EPS, ONE, ZERO, RatFunc, as_ratfunc

__all__ = [
    "canonicalize",
    "BaseCochain",
    "Cochain",
    "CoboundaryCochain",
    "Representation",
    "Trivial",
    "GradedTable",
    "LeftMult",
    "RepCheck",
    "StrongRepSearch",
    "Chain",
    "RightAction",
    "check_kappa_skew",
    "delta",
    "delta_squared",
    "delta_squared_residual",
    "check_representation",
    "search_strong_reps",
    "boundary",
    "pair",
    "duality_residual",
    "relevant_tuples",
    "random_cochain",
    "random_chain",
    "find_delta_squared_witness",
]

Index = Tuple[int, ...]


def canonicalize(t: Index, kappa: int):
    """Sort the first ``kappa`` entries; return ``(sign, tuple)``.

    ``sign`` is 0 (and the tuple None) when those entries repeat.
    """
    if kappa < 2:
        return 1, t
    head = list(t[:kappa])
    if len(set(head)) < len(head):
        return 0, None
    sign = 1
    # insertion sort counting transpositions
    for i in range(1, len(head)):
        j = i
        while j > 0 and head[j - 1] > head[j]:
            head[j - 1], head[j] = head[j], head[j - 1]
            sign = -sign
            j -= 1
    return sign, tuple(head) + tuple(t[kappa:])


def _zero(module):
    return ZERO if module == "scalar" else GradedElement()


def _coerce_value(value, module):
    if module == "scalar":
        if isinstance(value, GradedElement):
            raise ModuleMismatch("graded value in a scalar cochain")
        return as_ratfunc(value)
    if not isinstance(value, GradedElement):
        raise ModuleMismatch("graded cochain values must be GradedElement")
    return value


def _value_to_json(v):
    return v.to_json() if isinstance(v, (RatFunc, GradedElement)) else v


def _value_from_json(data, module):
    return RatFunc.from_json(data) if module == "scalar" else GradedElement.from_json(data)


# ---------------------------------------------------------------------------
# representations


class Representation:
    """``χ(e_p) m_q = coeff(p, q) m_{p+q}`` on a graded module."""

    kind = "rep"

    def coeff(self, p: int, q: int) -> RatFunc:
        raise NotImplementedError

    def is_zero(self) -> bool:
        return False

    def covers(self, pairs) -> bool:
        return True

    def act(self, p: int, value):
        if isinstance(value, RatFunc):
            if self.is_zero():
                return ZERO
            raise ModuleMismatch(f"{self.kind} representation acting on a scalar value")
        out: Dict[int, RatFunc] = {}
        for q, c in value.coeffs.items():
            g = self.coeff(p, q)
            if g:
                out[p + q] = out.get(p + q, ZERO) + g * c
        return GradedElement(out)


class Trivial(Representation):
    kind = "trivial"

    def coeff(self, p, q):
        return ZERO

    def is_zero(self):
        return True

    def act(self, p, value):
        return ZERO if isinstance(value, RatFunc) else GradedElement()


class GradedTable(Representation):
    """Table ``g(p, q)``; zero off the table.

    With ``window=None`` the table is total (zero elsewhere is genuine);
    otherwise checks are restricted to pairs inside the window.
    """

    kind = "graded-table"

    def __init__(self, entries: Optional[Mapping[Tuple[int, int], object]] = None, window: Optional[int] = None):
        self.entries: Dict[Tuple[int, int], RatFunc] = {}
        for (p, q), v in (entries or {}).items():
            v = as_ratfunc(v)
            if v:
                self.entries[(int(p), int(q))] = v
        self.window = window

    def coeff(self, p, q):
        return self.entries.get((p, q), ZERO)

    def is_zero(self):
        return not self.entries

    def covers(self, pairs):
        if self.window is None:
            return True
        w = self.window
        return all(abs(p) <= w and abs(q) <= w for p, q in pairs)

    def __repr__(self):
        return f"GradedTable(<{len(self.entries)} entries>, window={self.window})"


class LeftMult(Representation):
    """Left multiplication of the algebra on itself: ``g = f``."""

    kind = "left-mult"

    def __init__(self, fam: StructureFamily):
        self.fam = fam

    def coeff(self, p, q):
        return self.fam.coeff(p, q)

    def covers(self, pairs):
        return self.fam.covers(pairs)


# ---------------------------------------------------------------------------
# cochains


class BaseCochain:
    n: int
    kappa: int
    module: str

    def __call__(self, args: Sequence[int]):
        raise NotImplementedError

    @property
    def zero(self):
        return _zero(self.module)


class Cochain(BaseCochain):
    """Finitely supported table of values on basis tuples.

    With ``canonical=True`` (default) the table is folded onto sorted
    representatives of the first ``kappa`` slots; conflicting entries raise
    :class:`SkewnessError`.  ``canonical=False`` keeps the raw table as given,
    which is how :func:`check_kappa_skew` can detect a table that is not
    actually skew.
    """

    def __init__(
        self,
        n: int,
        values: Optional[Mapping[Sequence[int], object]] = None,
        kappa: int = 0,
        module: str = "scalar",
        canonical: bool = True,
    ):
        if n < 0:
            raise ValueError("arity must be non-negative")
        if kappa == 1:
            kappa = 0
        if kappa and not (2 <= kappa <= n):
            raise SkewnessError(f"kappa={kappa} invalid for arity {n}")
        if module not in ("scalar", "graded"):
            raise ModuleMismatch(f"unknown module tag {module!r}")
        self.n, self.kappa, self.module = n, kappa, module
        self.canonical = canonical
        self.values: Dict[Index, object] = {}
        for key, v in (values or {}).items():
            key = tuple(int(x) for x in key)
            if len(key) != n:
                raise ArityMismatch(f"tuple {key} has length {len(key)}, expected {n}")
            v = _coerce_value(v, module)
            if canonical:
                sign, ckey = canonicalize(key, kappa)
                if sign == 0:
                    if v:
                        raise SkewnessError(f"nonzero value on repeated entries {key}")
                    continue
                v = v if sign > 0 else -v
                if ckey in self.values and self.values[ckey] != v:
                    raise SkewnessError(f"inconsistent values for {key} and its permutation")
                key = ckey
            if v:
                self.values[key] = v

    @classmethod
    def from_function(cls, fn, n: int, window: int, kappa: int = 0, module: str = "scalar") -> "Cochain":
        """Raw (non-canonicalised) table of ``fn`` on all tuples in the window."""
        rng = range(-window, window + 1)
        vals = {t: fn(*t) for t in itertools.product(rng, repeat=n)}
        return cls(n, vals, kappa=kappa, module=module, canonical=False)

    def __call__(self, args):
        args = tuple(args)
        if not self.canonical:
            return self.values.get(args, self.zero)
        sign, key = canonicalize(args, self.kappa)
        if sign == 0:
            return self.zero
        v = self.values.get(key)
        if v is None:
            return self.zero
        return v if sign > 0 else -v

    def support(self) -> List[Index]:
        return sorted(self.values)

    def to_json(self):
        return {
            "n": self.n,
            "kappa": self.kappa,
            "module": self.module,
            "values": [{"tuple": list(t), "value": _value_to_json(v)} for t, v in sorted(self.values.items())],
        }

    @classmethod
    def from_json(cls, data) -> "Cochain":
        module = data.get("module", "scalar")
        vals = {tuple(r["tuple"]): _value_from_json(r["value"], module) for r in data["values"]}
        return cls(data["n"], vals, kappa=data.get("kappa", 0), module=module)

    def __repr__(self):
        return f"Cochain(n={self.n}, kappa={self.kappa}, module={self.module!r}, support={len(self.values)})"


class CoboundaryCochain(BaseCochain):
    """``δψ`` evaluated lazily on basis tuples (memoised)."""

    def __init__(self, psi: BaseCochain, rep: Representation, fam: StructureFamily, part: str = "full"):
        if part not in ("full", "old", "new"):
            raise ValueError(f"unknown part {part!r}")
        self.psi, self.rep, self.fam, self.part = psi, rep, fam, part
        self.n = psi.n + 1
        self.module = psi.module
        if psi.n == 2:
            self.kappa = 2
        elif psi.n >= 3:
            self.kappa = psi.kappa
        else:
            self.kappa = 0
        self._memo: Dict[Index, object] = {}
        self._with_action = part != "old" and not rep.is_zero()
        self._with_old = part != "new"

    def __call__(self, args):
        args = tuple(args)
        v = self._memo.get(args)
        if v is None:
            v = self._evaluate(args)
            self._memo[args] = v
        return v

    def _evaluate(self, args):
        psi, fam, rep = self.psi, self.fam, self.rep
        n = len(args) - 1
        a = args[-1]
        head = args[:-1]
        total = self.zero
        if n == 0:
            if self._with_action:
                total = -rep.act(a, psi(()))
            return total
        f = fam.coeff
        for i in range(n):
            ai = head[i]
            rest = head[:i] + head[i + 1:]
            even = i % 2 == 0
            if self._with_old:
                c = f(ai, a)
                if c:
                    v = psi(rest + (ai + a,))
                    if v:
                        total = total + (c * v if even else -(c * v))
            if self._with_action:
                v = psi(rest + (a,))
                if v:
                    w = rep.act(ai, v)
                    total = total - w if even else total + w
        if self._with_old:
            for i in range(n):
                ai = head[i]
                for j in range(i + 1, n):
                    aj = head[j]
                    c = f(ai, aj) - f(aj, ai)
                    if not c:
                        continue
                    rest = head[:i] + head[i + 1:j] + head[j + 1:]
                    v = psi((ai + aj,) + rest + (a,))
                    if v:
                        # (-1)^{i+j+1} with 1-based positions
                        total = total - c * v if (i + j) % 2 == 0 else total + c * v
        return total

    def __repr__(self):
        return f"CoboundaryCochain(n={self.n}, kappa={self.kappa}, part={self.part!r})"


def _check_module(psi: BaseCochain, rep: Representation):
    if psi.module == "scalar" and not isinstance(rep, Trivial):
        raise ModuleMismatch("scalar cochains only admit the trivial representation")


def delta(psi: BaseCochain, rep: Representation, fam: StructureFamily, part: str = "full") -> CoboundaryCochain:
    """Coboundary ``δψ``; ``part`` selects the old (action-free), new, or full operator."""
    _check_module(psi, rep)
    if psi.n >= 3 and psi.kappa < 2:
        raise SkewnessError("cochains of arity >= 3 must be skew in at least their first two slots")
    return CoboundaryCochain(psi, rep, fam, part)


def delta_squared(psi: BaseCochain, rep: Representation, fam: StructureFamily) -> CoboundaryCochain:
    return delta(delta(psi, rep, fam), rep, fam)


def delta_squared_residual(psi: BaseCochain, rep: Representation, fam: StructureFamily, args: Sequence[int]):
    """``(δ²ψ)(args)``; vanishes for 2-skew ψ and strong representations."""
    if len(args) != psi.n + 2:
        raise ArityMismatch(f"δ²ψ takes {psi.n + 2} arguments, got {len(args)}")
    return delta_squared(psi, rep, fam)(tuple(args))


def check_kappa_skew(psi: BaseCochain, tuples: Optional[Iterable[Sequence[int]]] = None) -> bool:
    """Antisymmetry of ``psi`` under transpositions of its first ``kappa`` slots.

    Tables are checked on their stored support; lazily evaluated cochains
    need explicit ``tuples``.
    """
    k = psi.kappa
    if k < 2:
        return True
    if tuples is None:
        if not isinstance(psi, Cochain):
            raise ValueError("tuples are required to check a lazily evaluated cochain")
        tuples = psi.support()
    for t in tuples:
        t = tuple(t)
        v = psi(t)
        for i in range(k):
            for j in range(i + 1, k):
                s = list(t)
                s[i], s[j] = s[j], s[i]
                s = tuple(s)
                if t[i] == t[j]:
                    if v:
                        return False
                elif psi(s) != -v:
                    return False
    return True


# ---------------------------------------------------------------------------
# representations: checks and search


@dataclass
class RepCheck:
    ok: bool
    mode: str
    checked: int = 0
    witness: Optional[Tuple[int, int, int]] = None
    lhs: Optional[RatFunc] = None
    rhs: Optional[RatFunc] = None

    def __bool__(self):
        return self.ok


def check_representation(rep: Representation, fam: StructureFamily, mode: str, window: int) -> RepCheck:
    """Check the Lie (``mode="lie"``) or strong (``mode="strong"``) condition.

    On basis vectors, ``χ(e_p)χ(e_q) m_r = g(q, r) g(p, q + r) m_{p+q+r}``.
    """
    if mode not in ("lie", "strong"):
        raise ValueError(f"unknown mode {mode!r}")
    g, f = rep.coeff, fam.coeff
    checked = 0
    rng = range(-window, window + 1)
    for p in rng:
        for q in rng:
            for r in rng:
                pairs = [(q, r), (p, q + r), (p + q, r), (p, r), (q, p + r)]
                if not rep.covers(pairs) or not fam.covers([(p, q), (q, p)]):
                    continue
                checked += 1
                if mode == "strong":
                    lhs = f(p, q) * g(p + q, r)
                    rhs = g(q, r) * g(p, q + r)
                else:
                    lhs = g(q, r) * g(p, q + r) - f(p, q) * g(p + q, r)
                    rhs = g(p, r) * g(q, p + r) - f(q, p) * g(p + q, r)
                if lhs != rhs:
                    return RepCheck(False, mode, checked, (p, q, r), lhs, rhs)
    return RepCheck(True, mode, checked)


@dataclass
class StrongRepSearch:
    solutions: List[GradedTable]
    complete: bool
    free: List[List[Tuple[int, int]]] = field(default_factory=list)
    nodes: int = 0
    window: int = 0

    def interior(self) -> List[GradedTable]:
        """Solutions vanishing on the window's edge.

        Entries ``g(p, q)`` with ``|p|`` or ``|q|`` equal to the window are
        constrained only by equations that leave the window, so solutions
        supported there are truncation artifacts.
        """
        w = self.window
        return [s for s in self.solutions if all(abs(p) < w and abs(q) < w for p, q in s.entries)]


_NONZERO = object()


def search_strong_reps(
    fam: StructureFamily, window: int, max_solutions: int = 64, max_nodes: int = 20000
) -> StrongRepSearch:
    """Solve ``f(p,q) g(p+q,r) = g(p,q+r) g(q,r)`` for a table ``g`` on the window.

    Exact case splitting: every branch fixes unknowns to zero or to values
    forced by the equations.  Unknowns that stay unconstrained at a leaf are
    set to 1 and listed in ``free`` (each such leaf is a family of
    solutions).  ``complete`` is False when a limit was hit or a branch could
    not be closed by linear propagation.
    """
    if window < 1:
        raise ValueError("window must be at least 1")
    rng = range(-window, window + 1)
    inside = lambda a, b: abs(a) <= window and abs(b) <= window
    eqs = []
    for p in rng:
        for q in rng:
            if not fam.covers([(p, q)]):
                continue
            c = fam.coeff(p, q)
            for r in rng:
                A, B, C = (p + q, r), (p, q + r), (q, r)
                if inside(*A) and inside(*B) and inside(*C):
                    eqs.append((c, A, B, C))
    variables = sorted({v for e in eqs for v in e[1:]})
    by_var: Dict[Tuple[int, int], List[int]] = {v: [] for v in variables}
    for k, e in enumerate(eqs):
        for v in set(e[1:]):
            by_var[v].append(k)

    solutions: List[GradedTable] = []
    free_sets: List[List[Tuple[int, int]]] = []
    state = {"nodes": 0, "complete": True}

    def propagate(assign):
        """Apply forced deductions in place; False on contradiction."""
        queue = list(range(len(eqs)))
        queued = set(queue)
        while queue:
            k = queue.pop()
            queued.discard(k)
            c, A, B, C = eqs[k]
            vals = [assign.get(X) for X in (A, B, C)]
            vA, vB, vC = (None if v is _NONZERO else v for v in vals)
            nzA, nzB, nzC = (v is not None and (v is _NONZERO or bool(v)) for v in vals)
            new = {}
            if vB is not None and vC is not None:
                rhs = vB * vC
                if vA is not None:
                    if c * vA != rhs:
                        return False
                elif c:
                    new[A] = rhs / c
                elif rhs:
                    return False
            elif A == B == C:
                if not c:
                    new[A] = ZERO
                elif vA is None and assign.get(A) is _NONZERO:
                    new[A] = c
            elif A == B or A == C:
                other = C if A == B else B
                vO = vC if A == B else vB
                if nzA and vO is None:
                    new[other] = c
                elif vO is not None and vO != c and vA is None:
                    new[A] = ZERO
            elif (vB is not None and not vB) or (vC is not None and not vC):
                if vA is None and c:
                    new[A] = ZERO
                elif vA is not None and c * vA:
                    return False
            elif vA is not None:
                lhs = c * vA
                if not lhs:
                    if nzB and vC is None and B != C:
                        new[C] = ZERO
                    elif nzC and vB is None and B != C:
                        new[B] = ZERO
                    elif B == C:
                        new[B] = ZERO
                elif B != C:
                    if vB is not None:
                        new[C] = lhs / vB
                    elif vC is not None:
                        new[B] = lhs / vC
                    else:
                        for X in (B, C):
                            if assign.get(X) is None:
                                new[X] = _NONZERO
            for X, v in new.items():
                old = assign.get(X)
                if old is None or (old is _NONZERO and v is not _NONZERO):
                    if old is _NONZERO and not v:
                        return False
                    assign[X] = v
                    for k2 in by_var[X]:
                        if k2 not in queued:
                            queue.append(k2)
                            queued.add(k2)
                elif old is not _NONZERO and v is not _NONZERO and old != v:
                    return False
        return True

    def satisfied(assign):
        for c, A, B, C in eqs:
            if c * assign[A] != assign[B] * assign[C]:
                return False
        return True

    def search(assign, fixed=()):
        if len(solutions) >= max_solutions or state["nodes"] >= max_nodes:
            state["complete"] = False
            return
        state["nodes"] += 1
        if not propagate(assign):
            return
        unknown = [v for v in variables if assign.get(v) is None]
        if unknown:
            pick = unknown[0]
            for choice in (ZERO, _NONZERO):
                child = dict(assign)
                child[pick] = choice
                search(child, fixed)
            return
        pending = [v for v in variables if assign.get(v) is _NONZERO]
        if pending:
            # every remaining unknown is only known to be nonzero: fix one to 1
            child = dict(assign)
            child[pending[0]] = ONE
            search(child, fixed + (pending[0],))
            return
        if satisfied(assign):
            table = GradedTable({v: assign[v] for v in variables}, window=window)
            solutions.append(table)
            free_sets.append(list(fixed))
        else:
            state["complete"] = False

    search({})
    return StrongRepSearch(solutions, state["complete"], free_sets, state["nodes"], window)


# ---------------------------------------------------------------------------
# chains and homology


class RightAction:
    """Right action ``n̄_k • e_a = h(k, a) n̄_{k+a}`` on a graded module."""

    def __init__(self, entries: Optional[Mapping[Tuple[int, int], object]] = None):
        self.entries = {}
        for (k, a), v in (entries or {}).items():
            v = as_ratfunc(v)
            if v:
                self.entries[(int(k), int(a))] = v

    @classmethod
    def trivial(cls) -> "RightAction":
        return cls()

    def is_zero(self):
        return not self.entries

    def coeff(self, k, a):
        return self.entries.get((k, a), ZERO)

    def find_violation(self, fam: StructureFamily, window: int):
        """First ``(k, a, b)`` breaking ``n̄•(a*b) = -(n̄•a)•b``, or None."""
        if self.is_zero():
            return None
        h, f = self.coeff, fam.coeff
        rng = range(-window, window + 1)
        for k in rng:
            for a in rng:
                for b in rng:
                    if h(k, a + b) * f(a, b) != -(h(k, a) * h(k + a, b)):
                        return (k, a, b)
        return None


class Chain:
    """Finite formal sum of ``n̄_k ⊗ e_{a_1} ⊗ … ⊗ e_{a_n}``.

    Terms are keyed by ``(k, (a_1, …, a_n))``; for the trivial module
    ``N = K`` the module index is always 0.
    """

    def __init__(self, n: int, terms: Optional[Mapping] = None, kappa: int = 0):
        if kappa == 1:
            kappa = 0
        if kappa and not (2 <= kappa <= n):
            raise SkewnessError(f"kappa={kappa} invalid for arity {n}")
        self.n, self.kappa = n, kappa
        self.terms: Dict[Tuple[int, Index], RatFunc] = {}
        for key, c in (terms or {}).items():
            # (k, (a_1, ..., a_n)) or a bare tuple for the trivial module
            if len(key) == 2 and isinstance(key[1], tuple):
                k, t = key
            else:
                k, t = 0, tuple(key)
            self.add(k, tuple(t), c)

    def add(self, k: int, t: Index, c) -> None:
        c = as_ratfunc(c)
        if not c:
            return
        if len(t) != self.n:
            raise ArityMismatch(f"tuple {t} has length {len(t)}, expected {self.n}")
        sign, key = canonicalize(t, self.kappa)
        if sign == 0:
            return
        key = (k, key)
        v = self.terms.get(key, ZERO) + (c if sign > 0 else -c)
        if v:
            self.terms[key] = v
        else:
            self.terms.pop(key, None)

    def canonical(self, kappa: int) -> "Chain":
        out = Chain(self.n, kappa=kappa)
        for (k, t), c in self.terms.items():
            out.add(k, t, c)
        return out

    def is_zero(self):
        return not self.terms

    def __eq__(self, other):
        return isinstance(other, Chain) and self.n == other.n and self.terms == other.terms

    def to_json(self):
        return {
            "n": self.n,
            "kappa": self.kappa,
            "module": "scalar",
            "terms": [
                {"module_index": k, "tuple": list(t), "value": c.to_json()} for (k, t), c in sorted(self.terms.items())
            ],
        }

    @classmethod
    def from_json(cls, data) -> "Chain":
        out = cls(data["n"], kappa=data.get("kappa", 0))
        for r in data["terms"]:
            out.add(r.get("module_index", 0), tuple(r["tuple"]), RatFunc.from_json(r["value"]))
        return out

    def __repr__(self):
        return f"Chain(n={self.n}, kappa={self.kappa}, terms={len(self.terms)})"


def boundary(Psi: Chain, fam: StructureFamily, action: Optional[RightAction] = None, window: Optional[int] = None) -> Chain:
    """Homology differential ``∂: C_n → C_{n-1}``.

    The right action is validated on a window covering the chain's indices
    (or ``window``) before use.
    """
    action = action or RightAction.trivial()
    if not action.is_zero():
        if window is None:
            window = max((max([abs(k)] + [abs(x) for x in t]) for (k, t) in Psi.terms), default=0)
        bad = action.find_violation(fam, window)
        if bad is not None:
            raise InvalidRightAction(f"right action violates n•(a*b) = -(n•a)•b at {bad}", bad)
    n = Psi.n
    out_kappa = Psi.kappa if Psi.kappa and Psi.kappa <= n - 2 else 0
    out = Chain(max(n - 1, 0), kappa=out_kappa)
    if n == 0:
        return out
    f, h = fam.coeff, action.coeff
    for (k, t), coef in Psi.terms.items():
        if n == 1:
            c = h(k, t[0])
            if c:
                out.add(k + t[0], (), coef * c)
            continue
        last = t[-1]
        head = t[:-1]
        m = n - 1
        for i in range(m):
            sign = 1 if i % 2 == 0 else -1
            rest = head[:i] + head[i + 1:]
            c = f(head[i], last)
            if c:
                out.add(k, rest + (head[i] + last,), sign * coef * c)
            c = h(k, head[i])
            if c:
                out.add(k + head[i], rest + (last,), sign * coef * c)
        for i in range(m):
            for j in range(i + 1, m):
                c = f(head[i], head[j]) - f(head[j], head[i])
                if c:
                    sign = -1 if (i + j) % 2 == 0 else 1
                    rest = head[:i] + head[i + 1:j] + head[j + 1:]
                    out.add(k, (head[i] + head[j],) + rest + (last,), sign * coef * c)
    return out


def pair(Psi: Chain, psi: BaseCochain) -> RatFunc:
    """``⟨Ψ, ψ⟩`` for the trivial module ``N = K`` and scalar ψ."""
    if Psi.n != psi.n:
        raise ArityMismatch(f"cannot pair a {Psi.n}-chain with a {psi.n}-cochain")
    if psi.module != "scalar":
        raise ModuleMismatch("pairing is defined for scalar cochains")
    acc = ZERO
    for (k, t), c in Psi.terms.items():
        if k != 0:
            raise ModuleMismatch("pairing needs the trivial module (index 0)")
        v = psi(t)
        if v:
            acc = acc + c * v
    return acc


def duality_residual(Psi: Chain, psi: BaseCochain, fam: StructureFamily) -> RatFunc:
    """``⟨∂Ψ, ψ⟩ - ⟨Ψ, δψ⟩`` with trivial actions on both sides."""
    if Psi.n != psi.n + 1:
        raise ArityMismatch(f"need a chain of arity {psi.n + 1} for a {psi.n}-cochain, got {Psi.n}")
    return pair(boundary(Psi, fam), psi) - pair(Psi, delta(psi, Trivial(), fam))


# ---------------------------------------------------------------------------
# support bookkeeping for pointwise sweeps


class _Recorder(BaseCochain):
    def __init__(self, psi: BaseCochain):
        self.n, self.kappa, self.module = psi.n, psi.kappa, psi.module
        self.calls = set()

    def __call__(self, args):
        self.calls.add(tuple(args))
        return ONE if self.module == "scalar" else GradedElement.basis(0)


class _ProbeFamily(StructureFamily):
    name = "probe"

    def coeff(self, p, q):
        return RatFunc.const(p)


class _ProbeRep(Representation):
    kind = "probe"

    def coeff(self, p, q):
        return ONE


def _compositions(total: int, parts: int, window: int):
    if parts == 1:
        if abs(total) <= window:
            yield (total,)
        return
    for x in range(-window, window + 1):
        rest = total - x
        if abs(rest) <= window * (parts - 1):
            for tail in _compositions(rest, parts - 1, window):
                yield (x,) + tail


def relevant_tuples(psi: Cochain, window: int, rep: Optional[Representation] = None, depth: int = 2) -> List[Index]:
    """Tuples in ``[-window, window]^(n+depth)`` where ``δ^depth ψ`` can be nonzero.

    Each value of ``δ^depth ψ`` is a combination of values of ψ on tuples
    obtained by summing groups of the input entries; which groups are summed
    depends only on positions.  Probing once with entries ``1, 2, 4, …``
    recovers every grouping, and inverting the groupings against the finite
    support of ψ lists all tuples outside of which the result is zero
    identically.  Entries not feeding any ψ argument (module action terms)
    range over the whole window.
    """
    rep = rep or Trivial()
    m = psi.n + depth
    probe = _Recorder(psi)
    probe_rep = Trivial() if rep.is_zero() else _ProbeRep()
    chain: BaseCochain = probe
    for _ in range(depth):
        chain = CoboundaryCochain(chain, probe_rep, _ProbeFamily())
    chain(tuple(1 << i for i in range(m)))
    groupings = set()
    for call in probe.calls:
        masks = []
        for x in call:
            masks.append(tuple(i for i in range(m) if x >> i & 1))
        groupings.add(tuple(masks))

    targets = set()
    for key in psi.values:
        if psi.canonical and psi.kappa >= 2:
            for perm in itertools.permutations(key[: psi.kappa]):
                targets.add(tuple(perm) + key[psi.kappa:])
        else:
            targets.add(key)

    out = set()
    rng = range(-window, window + 1)
    for masks in groupings:
        used = {i for mask in masks for i in mask}
        free = [i for i in range(m) if i not in used]
        for s in targets:
            pieces = [list(_compositions(s[j], len(mask), window)) for j, mask in enumerate(masks)]
            if any(not p for p in pieces):
                continue
            for choice in itertools.product(*pieces):
                t = [0] * m
                for mask, vals in zip(masks, choice):
                    for pos, v in zip(mask, vals):
                        t[pos] = v
                if free:
                    for extra in itertools.product(rng, repeat=len(free)):
                        for pos, v in zip(free, extra):
                            t[pos] = v
                        out.add(tuple(t))
                else:
                    out.add(tuple(t))
    return sorted(out)


# ---------------------------------------------------------------------------
# seeded generators


_POOL = [
    RatFunc.const(1),
    RatFunc.const(-1),
    RatFunc.const(2),
    RatFunc.const(Fraction(1, 2)),
    RatFunc.const(Fraction(-3, 2)),
    EPS,
    1 + EPS,
    1 / (1 - 2 * EPS),
]


def _random_coeff(rng: random.Random) -> RatFunc:
    return rng.choice(_POOL)


def random_cochain(
    rng: random.Random,
    n: int,
    window: int,
    support: int = 2,
    kappa: Optional[int] = None,
    module: str = "scalar",
) -> Cochain:
    """Random finitely supported cochain; 2-skew by default when ``n >= 2``."""
    if kappa is None:
        kappa = 2 if n >= 2 else 0
    vals = {}
    attempts = 0
    while len(vals) < support and attempts < 100 * support:
        attempts += 1
        t = tuple(rng.randint(-window, window) for _ in range(n))
        sign, key = canonicalize(t, kappa)
        if sign == 0 or key in vals:
            continue
        c = _random_coeff(rng)
        if module == "graded":
            vals[key] = GradedElement.basis(rng.randint(-window, window), c)
        else:
            vals[key] = c
    return Cochain(n, vals, kappa=kappa, module=module)


def random_chain(rng: random.Random, n: int, window: int, terms: int = 3, kappa: Optional[int] = None) -> Chain:
    if kappa is None:
        kappa = 2 if n >= 3 else 0
    out = Chain(n, kappa=kappa)
    for _ in range(terms):
        t = tuple(rng.randint(-window, window) for _ in range(n))
        out.add(0, t, _random_coeff(rng))
    return out


def find_delta_squared_witness(rep: Representation, fam: StructureFamily, window: int, arities=(0, 1, 2)):
    """Search for ``(psi, args, value)`` with ``δ²ψ(args) ≠ 0``.

    Basis cochains (a single ``m_q`` value on a single tuple) are tried in
    order of arity, then every argument tuple in the window.
    """
    rng = range(-window, window + 1)
    for n in arities:
        kappa = 2 if n >= 2 else 0
        keys = [()] if n == 0 else sorted({canonicalize(t, kappa)[1] for t in itertools.product(rng, repeat=n)} - {None})
        for key in keys:
            for q in rng:
                psi = Cochain(n, {key: GradedElement.basis(q)}, kappa=kappa, module="graded")
                d2 = delta_squared(psi, rep, fam)
                for args in itertools.product(rng, repeat=n + 2):
                    v = d2(args)
                    if v:
                        return psi, args, v
    return None
