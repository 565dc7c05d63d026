"""End-to-end acceptance checks; every comparison is exact equality."""

import itertools
import random
import subprocess
import sys
import time

from quasiassoc import complex as cx
from quasiassoc import diffalg as da
from quasiassoc import findim as fd
from quasiassoc.graded import (
    CentralCharge,
    Lambda,
    Table,
    VirasoroEps,
    antisymmetrize,
    central_phi,
    cocycle_residual,
    lie_boundary_residual,
    quasiassoc_residual,
    structure_coeff,
)

V = VirasoroEps()
W12 = range(-12, 13)


def test_01_quasiassociativity(criterion):
    t0 = time.perf_counter()
    bad = [t for t in itertools.product(W12, repeat=3) if quasiassoc_residual(V, *t) != 0]
    dt = time.perf_counter() - t0
    ok = not bad and dt < 10
    criterion(1, "quasiassociativity of the graded product", ok, f"15625 triples, {len(bad)} nonzero, {dt:.2f}s")
    assert ok


def test_02_lie_boundary(criterion):
    bad = [t for t in itertools.product(W12, repeat=2) if lie_boundary_residual(V, *t) != 0]
    criterion(2, "commutator equals (p - q) e_{p+q}", not bad, f"625 pairs, {len(bad)} nonzero")
    assert not bad


def test_03_central_cocycle(criterion):
    phi = CentralCharge.virasoro()
    triples = [(p, q, -p - q) for p in W12 for q in W12]
    bad = [t for t in triples if cocycle_residual(V, phi, *t) != 0]
    criterion(3, "central charge satisfies the cocycle condition", not bad, f"{len(triples)} triples, {len(bad)} nonzero")
    assert not bad


def test_04_virasoro_recovery(criterion):
    phi = CentralCharge.virasoro()
    bad = [p for p in range(-20, 21) if antisymmetrize(phi, p, -p) != p**3 - p]
    criterion(4, "antisymmetrized charge is p^3 - p", not bad, f"|p| <= 20, {len(bad)} mismatches")
    assert not bad


def _sweep(psi, rep, fam, window):
    d2 = cx.delta_squared(psi, rep, fam)
    tuples = cx.relevant_tuples(psi, window, rep=rep)
    return len(tuples), sum(1 for t in tuples if d2(t))


def test_05_delta_squared(criterion):
    rng = random.Random(2024)
    w = 6
    plan = [2] * 60 + [3] * 30 + [4] * 10
    tuples = nonzero = 0
    for n in plan:
        psi = cx.random_cochain(rng, n, w, support=2)
        a, b = _sweep(psi, cx.Trivial(), V, w)
        tuples, nonzero = tuples + a, nonzero + b
    trivial_ok = nonzero == 0

    # strong representations: g ≡ 0, the interior solutions of the exact
    # search, and a one-entry table for the zero product
    zero_fam = Table({}, window=None)
    reps = [(cx.GradedTable({}), V), (cx.GradedTable({(2, -1): 5}), zero_fam)]
    reps += [(s, V) for s in cx.search_strong_reps(V, 3).interior()]
    strong_ok = all(cx.check_representation(g, f, "strong", w).ok for g, f in reps)
    g_tuples = g_nonzero = 0
    for k, (g, f) in enumerate(reps):
        for n in (1, 2, 3) if not g.is_zero() else (2, 3, 4):
            psi = cx.random_cochain(rng, n, w if g.is_zero() else 3, support=2, module="graded")
            a, b = _sweep(psi, g, f, w)
            g_tuples, g_nonzero = g_tuples + a, g_nonzero + b
    ok = trivial_ok and strong_ok and g_nonzero == 0
    criterion(
        5,
        "δ² vanishes on 2-skew cochains",
        ok,
        f"{len(plan)} trivial-module cochains over {tuples} tuples, {len(reps)} strong reps over {g_tuples} tuples, "
        f"{nonzero + g_nonzero} nonzero",
    )
    assert ok


def test_06_strong_rep_necessity(criterion):
    lm = cx.LeftMult(V)
    lie = cx.check_representation(lm, V, "lie", 4).ok
    strong = cx.check_representation(lm, V, "strong", 4).ok
    found = cx.find_delta_squared_witness(lm, V, 4)
    ok = lie and not strong and found is not None
    detail = "no witness"
    if found:
        psi, args, value = found
        (q,) = psi(()).support()
        detail = f"ψ = m_{q} in degree {psi.n}, δ²ψ{args} = {value}"
    criterion(6, "left multiplication is a Lie rep with δ² ≠ 0", ok, detail)
    assert ok


def test_07_homology_duality(criterion):
    rng = random.Random(7)
    pairs = bad_dual = bad_dd = 0
    for k in range(120):
        n = 2 + k % 3
        Psi = cx.random_chain(rng, n, 5, terms=4)
        psi = cx.random_cochain(rng, n - 1, 5, support=4)
        pairs += 1
        bad_dual += cx.duality_residual(Psi, psi, V) != 0
        bad_dd += not cx.boundary(cx.boundary(Psi, V), V).canonical(0).is_zero()
    ok = bad_dual == 0 and bad_dd == 0
    criterion(7, "boundary is dual to the coboundary and squares to zero", ok, f"{pairs} pairs, {bad_dual + bad_dd} failures")
    assert ok


def test_08_localization(criterion):
    basis = da.LaurentPoly.basis
    bad = [
        (p, q) for p in W12 for q in W12 if da.star(basis(p), basis(q)) != basis(p + q, structure_coeff(V, p, q))
    ]
    rng = random.Random(8)
    bad_comm = 0
    for _ in range(60):
        u, v = da.random_laurent(rng, 4, 6), da.random_laurent(rng, 4, 6)
        vf = u * da.derivative(v) - da.derivative(u) * v
        bad_comm += da.lie_bracket(u, v) != vf
    ok = not bad and bad_comm == 0
    criterion(8, "Laurent product localizes to the graded product", ok, f"625 monomial pairs, 60 random commutators, {len(bad) + bad_comm} failures")
    assert ok


def test_09_generalized_cocycle(criterion):
    m = {p: da.LaurentPoly.basis(p) for p in range(-10, 11)}
    bad = [t for t in itertools.product(range(-10, 11), repeat=3) if da.gen_cocycle_residual("omega_hat", *(m[x] for x in t)) != 0]
    criterion(9, "residue of the generalized cocycle condition", not bad, f"9261 triples, {len(bad)} nonzero")
    assert not bad


def test_10_normalization_bridge(criterion):
    b = da.LaurentPoly.basis
    bad = [p for p in W12 if da.res(da.omega_hat_new(b(p), b(-p))) != central_phi(p)]
    criterion(10, "normalized cocycle residue equals the graded charge", not bad, f"|p| <= 12, {len(bad)} mismatches")
    assert not bad


def test_11_gelfand_fuks(criterion):
    x = da.LaurentPoly.monomial
    rng = range(-8, 9)
    skew = [t for t in itertools.product(rng, repeat=2) if da.res(da.gf_cocycle(x(t[0]), x(t[1])) + da.gf_cocycle(x(t[1]), x(t[0]))) != 0]
    cyc = [t for t in itertools.product(range(-5, 6), repeat=3) if da.gen_cocycle_residual("gf_on_liealg", *(x(k) for k in t)) != 0]
    b = da.LaurentPoly.basis
    vals = [n for n in range(-20, 21) if da.res(da.gf_cocycle(b(n), b(-n))) != n**3 - n]
    ok = not (skew or cyc or vals)
    criterion(11, "Gelfand-Fuks cocycle residues", ok, f"{len(skew)} skew, {len(cyc)} cocycle, {len(vals)} value failures")
    assert ok


def test_12_adjoint_calculus(criterion):
    x = da.LaurentPoly.monomial
    ops = [da.O] + [da.OperatorExpr.of(da.MulByMonomial(k)) for k in (-3, -1, 2)] + [da.OperatorExpr.of(da.Derivative())]
    bad = [
        (i, a, b)
        for i, A in enumerate(ops)
        for a, b in itertools.product(range(-10, 11), repeat=2)
        if da.adjoint_residual(A, x(a), x(b)) != 0
    ]
    rng = random.Random(12)
    id_bad = 0
    O3, Om1 = da.OperatorExpr.of(da.ApplyO(3)), da.OperatorExpr.of(da.ApplyO(-1))
    xm3, xm1 = da.OperatorExpr.of(da.MulByMonomial(-3)), da.OperatorExpr.of(da.MulByMonomial(-1))
    for _ in range(50):
        u = da.random_laurent(rng, 4, 6)
        id_bad += da.apply_operator(O3 @ xm3, u) != da.apply_operator(xm3 @ da.O, u)
        id_bad += da.apply_operator(xm1 @ Om1, u) != da.apply_operator(da.O @ xm1, u)
    ok = not bad and id_bad == 0
    criterion(12, "formal adjoints and operator identities", ok, f"{len(ops) * 441} residues, 100 identities, {len(bad) + id_bad} failures")
    assert ok


def test_13_n_dimensional(criterion):
    anti = da.nd_sweep_antisymmetry(2, 3) + da.nd_sweep_antisymmetry(3, 3)
    c2, f2 = da.nd_sweep_quasiassoc(2, 3)
    c3, f3 = da.nd_sweep_quasiassoc(3, 3)
    ok = not anti and not f2 and not f3
    criterion(13, "n-variable product: bracket and quasiassociativity", ok, f"{c2 + c3} triples, {len(anti) + len(f2) + len(f3)} failures")
    assert ok


def test_14_no_associative_realization(criterion):
    trace = fd.no_associative_witness([0, 1, 2])
    c = trace["contradiction"]
    ok = c["intersection"] == [] and c["g00_candidates_r1"] == [-1, 1] and c["g00_candidates_r2"] == [-2, 2]
    criterion(14, "no associative product has the Witt commutator", ok, c["statement"])
    assert ok


def test_15_semidirect_and_ehrenfest(criterion):
    rng = random.Random(15)
    ehr_bad = 0
    for k in range(24):
        n = 1 + k % 5
        A = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(n)]
        ehr_bad += not fd.is_quasiassociative(fd.ehrenfest(A))
    semi_bad = 0
    for _ in range(20):
        R = fd.ehrenfest([[rng.randint(-3, 3)]])
        chi = fd.random_lie_rep_2d(rng, R)
        semi_bad += not fd.is_quasiassociative(fd.semidirect(R, fd.FinAlgebra(2), chi))
    E = fd.ehrenfest([[1]])
    rep = fd.der_inclusion_check(E, fd.ad(E, E.basis(1)))
    dich = (not rep.is_derivation) and rep.is_lie_derivation
    ok = ehr_bad == 0 and semi_bad == 0 and dich
    criterion(15, "Ehrenfest and semidirect constructions", ok, f"24 Ehrenfest, 20 semidirect, inner-derivation dichotomy {'seen' if dich else 'missing'}")
    assert ok


def test_16_cotangent(criterion):
    rng = random.Random(16)
    seeds = [fd.ehrenfest([[rng.randint(-3, 3)]]) for _ in range(4)]
    seeds += [fd.ehrenfest([[rng.randint(-2, 2) for _ in range(2)] for _ in range(2)]) for _ in range(4)]
    for _ in range(4):
        R = fd.ehrenfest([[rng.randint(-3, 3)]])
        seeds.append(fd.semidirect(R, fd.FinAlgebra(2), fd.random_lie_rep_2d(rng, R)))
    bad = 0
    for R in seeds:
        T = fd.cotangent(R)
        bad += not fd.is_quasiassociative(T.algebra)
        bad += fd.cotangent_lie_check(R) is not None
        bad += any(fd.symplectic_cocycle_residual(T, *t) != 0 for t in itertools.product(range(T.dim), repeat=3))
    criterion(16, "cotangent extension", bad == 0, f"{len(seeds)} seeds, {bad} failures")
    assert bad == 0


def test_17_end_to_end(criterion):
    t0 = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "quasiassoc", "verify", "all"], capture_output=True, text=True)
    dt = time.perf_counter() - t0
    ok = proc.returncode == 0 and dt < 60
    criterion(17, "verify all with defaults", ok, f"exit {proc.returncode}, {dt:.1f}s")
    assert ok, proc.stdout + proc.stderr
