"""Batch verification suites behind the ``verify`` command.

Every suite records one case per identity instance and a failure record
whenever the two sides differ exactly.  Errors raised by the library (poles
at a numeric ε, invalid inputs) become failure records too, never crashes.
"""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional

from . import complex as cx
from . import diffalg as da
from . import findim as fd
from . import graded as gr
from .errors import QuasiassocError, UnknownSuite
from .scalars import RatFunc, ZERO, as_ratfunc, ratfunc_eval

SUITES = (
    "graded",
    "cocycle",
    "complex",
    "homology",
    "diffalg",
    "ndim",
    "appendix1",
    "appendix2",
    "appendix3",
    "cotangent",
)

# the exhaustive n-dimensional sweep grows like (3(2w+1)^n)^3
NDIM_WINDOW_CAP = {1: 12, 2: 3, 3: 2}
COMPLEX_WINDOW_CAP = 6
TRIPLE_SWEEP_CAP = 8
TUPLES_PER_TRIAL = 24


def _fmt(x):
    if isinstance(x, (RatFunc, Fraction, int)):
        return str(as_ratfunc(x))
    if x is None:
        return None
    return repr(x) if not isinstance(x, (str, list, dict)) else x


@dataclass
class SuiteReport:
    suite: str
    window: int
    trials: int
    seed: int
    cases: int = 0
    failures: List[dict] = field(default_factory=list)
    failed_cases: int = 0
    elapsed: float = 0.0
    notes: List[str] = field(default_factory=list)
    details: Dict[str, object] = field(default_factory=dict)
    eps_value: Optional[str] = None

    @property
    def ok(self) -> bool:
        return not self.failed_cases

    def to_json(self, timing: bool = False) -> dict:
        out = {
            "suite": self.suite,
            "window": self.window,
            "trials": self.trials,
            "seed": self.seed,
            "eps_value": self.eps_value,
            "cases": self.cases,
            "passed": self.ok,
            "failed_cases": self.failed_cases,
            "failures": self.failures,
            "notes": self.notes,
        }
        if self.details:
            out["details"] = self.details
        if timing:
            out["elapsed"] = round(self.elapsed, 3)
        return out


class _Run:
    """Case counter and failure sink shared by a suite's checks."""

    MAX_FAILURES = 25

    def __init__(self, report: SuiteReport, eps_value: Optional[Fraction]):
        self.report = report
        self.eps = eps_value

    def value(self, x):
        """Specialise a residual to the numeric ε when one is set."""
        if self.eps is None or not isinstance(x, RatFunc):
            return x
        return RatFunc.const(ratfunc_eval(x, self.eps))

    def fail(self, operation, inputs, lhs=None, rhs=None, error=None):
        self.report.failed_cases += 1
        if len(self.report.failures) < self.MAX_FAILURES:
            rec = {"operation": operation, "inputs": _fmt(list(inputs)), "lhs": _fmt(lhs), "rhs": _fmt(rhs)}
            if error is not None:
                rec["error"] = error
            self.report.failures.append(rec)
        elif self.report.failed_cases == self.MAX_FAILURES + 1:
            self.report.notes.append("further failures omitted")

    def check(self, operation: str, inputs, compute: Callable[[], tuple]):
        """``compute`` returns ``(lhs, rhs)``; equality is exact."""
        self.report.cases += 1
        try:
            lhs, rhs = compute()
            lhs, rhs = self.value(lhs), self.value(rhs)
        except QuasiassocError as exc:
            self.fail(operation, inputs, error=f"{type(exc).__name__}: {exc}")
            return False
        if lhs != rhs:
            self.fail(operation, inputs, lhs, rhs)
            return False
        return True

    def expect(self, operation: str, inputs, condition: Callable[[], bool], detail: str = ""):
        self.report.cases += 1
        try:
            ok = condition()
        except QuasiassocError as exc:
            self.fail(operation, inputs, error=f"{type(exc).__name__}: {exc}")
            return False
        if not ok:
            self.fail(operation, inputs, lhs=detail or "false", rhs="true")
        return ok


def _family(run: _Run, fam: gr.StructureFamily) -> gr.StructureFamily:
    return gr.EvaluatedFamily(fam, run.eps) if run.eps is not None else fam


# ---------------------------------------------------------------------------
# suites


def _suite_graded(run: _Run, w, trials, rng, fam):
    F = _family(run, fam)
    rng_ = range(-w, w + 1)
    for p, q, r in itertools.product(rng_, repeat=3):
        run.check("quasiassoc_residual", (p, q, r), lambda: (gr.quasiassoc_residual(F, p, q, r), ZERO))
    if isinstance(fam, (gr.VirasoroEps, gr.Lambda)):
        for p, q in itertools.product(rng_, repeat=2):
            run.check("lie_boundary_residual", (p, q), lambda: (gr.lie_boundary_residual(F, p, q), ZERO))


def _suite_cocycle(run: _Run, w, trials, rng, fam):
    if isinstance(fam, gr.VirasoroEps):
        F = _family(run, fam)
        phi = gr.CentralCharge.virasoro()
        if run.eps is not None:
            base = phi
            phi = gr.CentralCharge(lambda p: ratfunc_eval(base(p), run.eps), "phi@eps")
        for p in range(-w, w + 1):
            for q in range(-w, w + 1):
                r = -p - q
                run.check("cocycle_residual", (p, q, r), lambda: (gr.cocycle_residual(F, phi, p, q, r), ZERO))
        for p in range(-2 * w, 2 * w + 1):
            run.check("antisymmetrize", (p, -p), lambda: (gr.antisymmetrize(phi, p, -p), p ** 3 - p))
        small = min(w, 5)
        run.expect(
            "central_phi_in_solution_space",
            (small,),
            lambda: gr.in_solution_space(gr.solve_central_extensions(fam, small), gr.central_phi, small),
        )
        run.expect("extension_is_proper", (small,), lambda: not gr.is_lie_coboundary(gr.CentralCharge.virasoro(), small))
    else:
        small = min(w, 5)
        basis = gr.solve_central_extensions(fam, small)
        run.report.details["solution_dimension"] = len(basis)
        F = _family(run, fam)
        for k, sol in enumerate(basis):
            cc = gr.CentralCharge(sol, f"basis{k}")
            for p in range(-small, small + 1):
                for q in range(-small, small + 1):
                    r = -p - q
                    if abs(r) <= small:
                        run.check("cocycle_residual", (k, p, q, r), lambda: (gr.cocycle_residual(F, cc, p, q, r), ZERO))


def _suite_complex(run: _Run, w, trials, rng, fam):
    F = _family(run, fam)
    cw = min(w, COMPLEX_WINDOW_CAP)
    if cw < w:
        run.report.notes.append(f"cochain window capped at {cw}")
    trivial = cx.Trivial()
    for t in range(trials):
        n = 2 + t % 3
        psi = cx.random_cochain(rng, n, cw, support=2)
        tuples = cx.relevant_tuples(psi, cw)
        sample = rng.sample(tuples, min(TUPLES_PER_TRIAL, len(tuples)))
        d2 = cx.delta_squared(psi, trivial, F)
        for tup in sample:
            run.check("delta_squared", (t, n) + tup, lambda: (d2(tup), ZERO))
    lm = cx.LeftMult(F)
    run.expect("lie_rep(LeftMult)", (), lambda: cx.check_representation(lm, F, "lie", min(w, 4)).ok)
    run.expect("not_strong(LeftMult)", (), lambda: not cx.check_representation(lm, F, "strong", min(w, 4)).ok)
    found = {}

    def witness():
        res = cx.find_delta_squared_witness(lm, F, min(w, 4), arities=(0,))
        if res:
            psi, args, v = res
            found.update(psi=psi.to_json(), args=list(args), value=v.to_json())
        return res is not None

    run.expect("delta_squared_witness(LeftMult)", (), witness)
    if found:
        run.report.details["left_mult_witness"] = found
    search = cx.search_strong_reps(F, min(w, 3))
    run.report.details["strong_reps"] = {
        "window": min(w, 3),
        "solutions": len(search.solutions),
        "interior_solutions": len(search.interior()),
        "complete": search.complete,
    }
    run.expect("zero_rep_found", (), lambda: any(s.is_zero() for s in search.solutions))


def _suite_homology(run: _Run, w, trials, rng, fam):
    F = _family(run, fam)
    cw = min(w, COMPLEX_WINDOW_CAP)
    if cw < w:
        run.report.notes.append(f"cochain window capped at {cw}")
    for t in range(trials):
        n = 2 + t % 3
        Psi = cx.random_chain(rng, n, cw)
        psi = cx.random_cochain(rng, n - 1, cw, support=3, kappa=2 if n - 1 >= 2 else 0)
        run.check("duality_residual", (t, n), lambda: (cx.duality_residual(Psi, psi, F), ZERO))

        def d2():
            out = cx.boundary(cx.boundary(Psi, F), F)
            return out.canonical(2 if out.n >= 2 else 0).is_zero()

        run.expect("boundary_squared", (t, n), d2)


def _suite_diffalg(run: _Run, w, trials, rng, fam):
    L = da.LaurentPoly
    V = gr.VirasoroEps()
    tw = min(w, TRIPLE_SWEEP_CAP)
    for p, q in itertools.product(range(-w, w + 1), repeat=2):
        run.check("star_localization", (p, q), lambda: (da.star(L.basis(p), L.basis(q)), L.basis(p + q, V.coeff(p, q))))
    for t in range(trials):
        u, v = da.random_laurent(rng), da.random_laurent(rng)
        run.check("star_commutator", (t,), lambda: (da.lie_bracket(u, v), u * da.derivative(v) - da.derivative(u) * v))
        x, y, z = (da.random_laurent(rng) for _ in range(3))
        run.check("gf_skew", (t,), lambda: (da.res(da.gf_cocycle(x, y) + da.gf_cocycle(y, x)), ZERO))
        run.check("gf_cocycle", (t,), lambda: (da.gen_cocycle_residual("gf_on_liealg", x, y, z), ZERO))
        run.check("omega_hat_new_cocycle", (t,), lambda: (da.gen_cocycle_residual("omega_hat_new", x, y, z), ZERO))
    for p, q, r in itertools.product(range(-tw, tw + 1), repeat=3):
        run.check("omega_hat_cocycle", (p, q, r), lambda: (da.gen_cocycle_residual("omega_hat", L.basis(p), L.basis(q), L.basis(r)), ZERO))
    for p in range(-w, w + 1):
        run.check("omega_hat_new_bridge", (p,), lambda: (da.res(da.omega_hat_new(L.basis(p), L.basis(-p))), gr.central_phi(p)))
    for n in range(-2 * w, 2 * w + 1):
        run.check("gelfand_fuks_value", (n,), lambda: (da.res(da.gf_cocycle(L.basis(n), L.basis(-n))), n ** 3 - n))
    ops = {
        "O": da.O,
        "x^3": da.OperatorExpr.of(da.MulByMonomial(3)),
        "x^-2": da.OperatorExpr.of(da.MulByMonomial(-2)),
        "d/dx": da.OperatorExpr.of(da.Derivative()),
        "resolvent": da.RESOLVENT,
    }
    for name, A in ops.items():
        for a, b in itertools.product(range(-w, w + 1), repeat=2):
            run.check("adjoint_residual", (name, a, b), lambda: (da.adjoint_residual(A, L.monomial(a), L.monomial(b)), ZERO))
    lhs_op = da.OperatorExpr.of(da.MulByMonomial(-3), da.ApplyO(3))  # (𝒪+3)x⁻³
    rhs_op = da.OperatorExpr.of(da.ApplyO(), da.MulByMonomial(-3))  # x⁻³𝒪
    lhs2 = da.OperatorExpr.of(da.ApplyO(-1), da.MulByMonomial(-1))  # x⁻¹(𝒪-1)
    rhs2 = da.OperatorExpr.of(da.MulByMonomial(-1), da.ApplyO())  # 𝒪x⁻¹
    for t in range(trials):
        u = da.random_laurent(rng)
        run.check("(O+3)x^-3 = x^-3 O", (t,), lambda: (lhs_op(u), rhs_op(u)))
        run.check("x^-1(O-1) = O x^-1", (t,), lambda: (lhs2(u), rhs2(u)))


def _suite_ndim(run: _Run, w, trials, rng, fam):
    lam = fam.lam if isinstance(fam, gr.Lambda) else Fraction(1)
    for n, cap in NDIM_WINDOW_CAP.items():
        nw = min(w, cap)
        if nw < w:
            run.report.notes.append(f"ndim n={n}: window capped at {nw}")
        run.report.cases += 1
        bad = da.nd_sweep_antisymmetry(n, nw, lam)
        for f in bad:
            run.fail("nd_antisymmetry", (n,) + f)
        checked, bad = da.nd_sweep_quasiassoc(n, nw, lam)
        run.report.cases += 1
        run.report.details[f"nd_quasiassoc_triples_n{n}"] = checked
        for f in bad:
            run.fail("nd_quasiassoc", (n,) + f)
    # the printed target index does not antisymmetrize to the bracket
    a = da.nd_star(1, (0, 0), 2, (1, 0), lam, target="left") - da.nd_star(2, (1, 0), 1, (0, 0), lam, target="left")
    b = da.nd_bracket(da.nd_basis(1, (0, 0)), da.nd_basis(2, (1, 0)))
    run.report.details["left_target_reading_antisymmetrizes"] = a == b
    # scalar cross-check of the vectorized kernel
    for t in range(trials):
        n = rng.choice((1, 2, 3))
        pick = lambda: (rng.randint(1, n), tuple(rng.randint(-2, 2) for _ in range(n)))
        (i, s), (j, v), (k, r) = pick(), pick(), pick()
        A, B, C = da.nd_basis(i, s), da.nd_basis(j, v), da.nd_basis(k, r)
        run.check("nd_quasiassoc_scalar", (i, s, j, v, k, r), lambda: (da.nd_quasiassoc_residual(A, B, C, lam), da.NdElement(n)))
        run.check("nd_antisymmetry_scalar", (i, s, j, v), lambda: (da.nd_star(i, s, j, v, lam) - da.nd_star(j, v, i, s, lam), da.nd_bracket(A, B)))


def _suite_appendix1(run: _Run, w, trials, rng, fam):
    window = list(range(0, min(w, 2) + 1))
    trace = {}

    def derive():
        trace.update(fd.no_associative_witness(window))
        return not trace["contradiction"]["intersection"]

    run.expect("no_associative_witness", (window,), derive)
    if trace:
        run.report.details["trace"] = trace


def _random_ehrenfest(rng, dmax=5):
    d = rng.randint(1, dmax)
    A = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(d)] for _ in range(d)]
    return A, fd.ehrenfest(A)


def _random_semidirect(rng):
    R = fd.ehrenfest([[Fraction(rng.randint(-3, 3), rng.randint(1, 2))]])
    chi = fd.random_lie_rep_2d(rng, R)
    return fd.semidirect(R, fd.FinAlgebra(2), chi)


def _suite_appendix2(run: _Run, w, trials, rng, fam):
    n = max(20, trials // 5)
    for t in range(n):
        A, E = _random_ehrenfest(rng)
        run.expect("ehrenfest_quasiassoc", (t, len(A)), lambda: fd.is_quasiassociative(E))
        lie = fd.fd_lie_constants(E)
        d = len(A)
        run.expect(
            "ehrenfest_brackets",
            (t, d),
            lambda: all(
                lie.bracket(i, d + j) == ({d + j: as_ratfunc(A[j][i])} if A[j][i] else {})
                and not lie.bracket(i, j)
                and not lie.bracket(d + i, d + j)
                for i in range(d)
                for j in range(d)
            ),
        )
    for t in range(n):
        run.expect("semidirect_quasiassoc", (t,), lambda: fd.is_quasiassociative(_random_semidirect(rng)))
    E1 = fd.ehrenfest([[1]])
    D = fd.ad(E1, E1.basis(1))
    rep = fd.der_inclusion_check(E1, D)
    run.expect("ad_ebar_not_derivation", (), lambda: not rep.is_derivation and rep.derivation_witness == (0, 0))
    run.expect("ad_ebar_lie_derivation", (), lambda: rep.is_lie_derivation)
    run.expect("ehrenfest_not_associative", (), lambda: not fd.is_associative(E1))
    for name, B in (("matrix_units", fd.matrix_units(2)), ("upper_triangular", fd.upper_triangular())):
        run.expect(f"{name}_associative", (), lambda: fd.is_associative(B))
        run.expect(
            f"{name}_inner_derivations",
            (),
            lambda: all(fd.fd_is_derivation(fd.ad(B, B.basis(i)), B).ok for i in range(B.dim)),
        )


def _suite_appendix3(run: _Run, w, trials, rng, fam):
    from . import vectorfields as vf

    samples = [fd.ehrenfest([[1]]), fd.matrix_units(2), fd.upper_triangular()]
    for t in range(min(trials, 10)):
        samples.append(_random_semidirect(rng))
        # generic structure constants: both sides nonzero and still equal
        samples.append(fd.FinAlgebra(2, {(s, i, j): rng.randint(-2, 2) for s, i, j in itertools.product(range(2), repeat=3)}))
    for k, A in enumerate(samples):
        for quad in itertools.product(range(A.dim), repeat=4):
            run.check("structure_identity", (k,) + quad, lambda: (fd.fd_quasiassoc_residual(A, *quad), vf.associator_symmetry_defect(A, *quad)))
    for name, R in vf.commutative_examples().items():
        for t in range(max(3, trials // 20)):
            X, Y, Z = (vf.random_field(rng, R.dim) for _ in range(3))
            run.expect("realization_quasiassoc", (name, t), lambda: vf.realization_residual_is_zero(R, X, Y, Z))
            run.expect("realization_bracket", (name, t), lambda: vf.realization_bracket_ok(R, X, Y))


def _suite_cotangent(run: _Run, w, trials, rng, fam):
    seeds = [fd.ehrenfest([[1]]), fd.ehrenfest([[2, 0], [Fraction(1, 2), -1]])]
    for t in range(max(10, trials // 10)):
        seeds.append(_random_semidirect(rng) if t % 2 else _random_ehrenfest(rng, 2)[1])
    for k, R in enumerate(seeds):
        T = fd.cotangent(R)
        run.expect("cotangent_quasiassoc", (k, R.dim), lambda: fd.is_quasiassociative(T.algebra))
        run.expect("cotangent_lie", (k, R.dim), lambda: fd.cotangent_lie_check(R) is None)
        for a, b, c in itertools.product(range(T.dim), repeat=3):
            run.check("symplectic_cocycle", (k, a, b, c), lambda: (fd.symplectic_cocycle_residual(T, a, b, c), ZERO))


_RUNNERS = {
    "graded": _suite_graded,
    "cocycle": _suite_cocycle,
    "complex": _suite_complex,
    "homology": _suite_homology,
    "diffalg": _suite_diffalg,
    "ndim": _suite_ndim,
    "appendix1": _suite_appendix1,
    "appendix2": _suite_appendix2,
    "appendix3": _suite_appendix3,
    "cotangent": _suite_cotangent,
}


def run_suite(
    name: str,
    window: int = 10,
    trials: int = 100,
    seed: int = 0,
    family: Optional[gr.StructureFamily] = None,
    eps_value: Optional[Fraction] = None,
) -> List[SuiteReport]:
    """Run one suite (or all of them); returns one report per suite."""
    if name == "all":
        names = list(SUITES)
    elif name in _RUNNERS:
        names = [name]
    else:
        raise UnknownSuite(name)
    if window < 2:
        raise ValueError("window must be at least 2")
    if trials < 1:
        raise ValueError("trials must be at least 1")
    fam = family or gr.VirasoroEps()
    eps = Fraction(eps_value) if eps_value is not None else None
    reports = []
    for n in names:
        rep = SuiteReport(n, window, trials, seed, eps_value=str(eps) if eps is not None else None)
        run = _Run(rep, eps)
        rng = random.Random(f"{n}:{seed}")
        start = time.perf_counter()
        try:
            _RUNNERS[n](run, window, trials, rng, fam)
        except QuasiassocError as exc:
            run.fail(n, [], error=f"{type(exc).__name__}: {exc}")
        rep.elapsed = time.perf_counter() - start
        reports.append(rep)
    return reports
