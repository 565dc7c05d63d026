import itertools
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quasiassoc.diffalg import (
    O,
    RESOLVENT,
    ApplyO,
    ApplyResolvent,
    Derivative,
    LaurentPoly,
    MulByMonomial,
    MulByPoly,
    OperatorExpr,
    adjoint,
    adjoint_residual,
    apply_operator,
    derivative,
    gen_cocycle_residual,
    gf_cocycle,
    lie_bracket,
    nd_basis,
    nd_bracket,
    nd_mul,
    nd_quasiassoc_residual,
    nd_star,
    nd_sweep_antisymmetry,
    nd_sweep_quasiassoc,
    omega_hat_new,
    random_laurent,
    res,
    star,
)
from quasiassoc.errors import DimensionMismatch, NoAdjointRule, UnknownBilinear
from quasiassoc.graded import VirasoroEps, central_phi, structure_coeff
from quasiassoc.scalars import EPS, ONE

x = LaurentPoly.monomial
coeffs = st.sampled_from([ONE, -ONE, 2 * ONE, ONE / 3, EPS, 1 - EPS])
laurents = st.dictionaries(st.integers(-5, 5), coeffs, max_size=4).map(LaurentPoly)


def vf_bracket(u, v):
    return u * derivative(v) - derivative(u) * v


def test_derivative_and_residue_examples():
    assert derivative(x(3)) == x(2, 3)
    assert derivative(x(0, 7)) == 0
    assert derivative(x(-1)) == x(-2, -1)
    assert res(x(-1)) == 1
    assert res(x(2) + x(-1, 5)) == 5


@given(laurents)
def test_residue_kills_derivatives(u):
    assert res(derivative(u)) == 0


def test_euler_operator_examples():
    assert apply_operator(O, x(1)) == 0
    # eigenvalue of x^{1-q} is -q, so x^{-1} (q = 2) goes to -2 x^{-1}
    assert apply_operator(O, x(-1)) == x(-1, -2)
    assert apply_operator(RESOLVENT, x(-2)) == x(-2, ONE / (1 + 3 * EPS))


@given(laurents)
def test_resolvent_inverts(u):
    one_minus = OperatorExpr.identity() - EPS * O
    assert apply_operator(one_minus @ RESOLVENT, u) == u
    assert apply_operator(RESOLVENT @ one_minus, u) == u


def test_star_localizes_to_structure_constants():
    V = VirasoroEps()
    for p, q in itertools.product(range(-8, 9), repeat=2):
        assert star(LaurentPoly.basis(p), LaurentPoly.basis(q)) == LaurentPoly.basis(p + q, structure_coeff(V, p, q))
    # x⁰ is the image of e_1, so x⁰ ∗ x⁰ lands on x^{1-2}
    assert star(x(0), x(0)) == x(-1, structure_coeff(V, 1, 1))


@settings(max_examples=60, deadline=None)
@given(laurents, laurents)
def test_commutator_is_vector_field_bracket(u, v):
    assert lie_bracket(u, v) == vf_bracket(u, v)


def test_generalized_cocycle_examples():
    assert gen_cocycle_residual("omega_hat", x(0), x(-1), x(2)) == 0
    rng = random.Random(0)
    for _ in range(10):
        u, w = random_laurent(rng), random_laurent(rng)
        assert gen_cocycle_residual("omega_hat", u, u, w) == 0
    with pytest.raises(UnknownBilinear):
        gen_cocycle_residual("nope", x(0), x(0), x(0))


def test_generalized_cocycle_on_monomials():
    rng = range(-5, 6)
    for a, b, c in itertools.product(rng, repeat=3):
        assert gen_cocycle_residual("omega_hat", x(a), x(b), x(c)) == 0
        assert gen_cocycle_residual("omega_hat_new", x(a), x(b), x(c)) == 0


def test_non_cocycle_bilinear_has_witness():
    B = lambda u, v: MulByMonomial(-3).apply(derivative(derivative(u)) * v)
    hits = [
        t for t in itertools.product(range(-3, 4), repeat=3) if gen_cocycle_residual(B, *(x(k) for k in t)) != 0
    ]
    assert hits


def test_gelfand_fuks_residues():
    for n in range(-20, 21):
        assert res(gf_cocycle(LaurentPoly.basis(n), LaurentPoly.basis(-n))) == n**3 - n
    for a, b in itertools.product(range(-6, 7), repeat=2):
        assert res(gf_cocycle(x(a), x(b)) + gf_cocycle(x(b), x(a))) == 0
    for a, b, c in itertools.product(range(-3, 4), repeat=3):
        assert gen_cocycle_residual("gf_on_liealg", x(a), x(b), x(c)) == 0


def test_normalized_cocycle_matches_graded_charge():
    for p in range(-12, 13):
        assert res(omega_hat_new(LaurentPoly.basis(p), LaurentPoly.basis(-p))) == central_phi(p)
    assert res(omega_hat_new(LaurentPoly.basis(1), LaurentPoly.basis(2))) == 0


@pytest.mark.parametrize(
    "A",
    [O, OperatorExpr.of(MulByMonomial(3)), OperatorExpr.of(Derivative()), RESOLVENT, RESOLVENT @ O],
    ids=["O", "x3", "d", "resolvent", "resolvent_O"],
)
def test_adjoint_residual_on_monomials(A):
    for a, b in itertools.product(range(-6, 7), repeat=2):
        assert adjoint_residual(A, x(a), x(b)) == 0


def test_adjoint_rules():
    assert adjoint(MulByMonomial(4)).terms == OperatorExpr.of(MulByMonomial(4)).terms
    u = x(2) + x(-3, EPS)
    assert adjoint(MulByPoly(u)).terms[0][1] == (MulByPoly(u),)
    with pytest.raises(NoAdjointRule):
        adjoint(OperatorExpr.of(object()))


@settings(max_examples=50, deadline=None)
@given(laurents, laurents)
def test_adjoint_residual_on_random_pairs(u, v):
    A = OperatorExpr.of(ApplyO(2), MulByMonomial(-1)) + 3 * OperatorExpr.of(Derivative())
    assert adjoint_residual(A, u, v) == 0


@given(laurents)
def test_operator_identities(u):
    lhs = OperatorExpr.of(ApplyO(3)) @ OperatorExpr.of(MulByMonomial(-3))
    rhs = OperatorExpr.of(MulByMonomial(-3)) @ O
    assert apply_operator(lhs, u) == apply_operator(rhs, u)
    lhs = OperatorExpr.of(MulByMonomial(-1)) @ OperatorExpr.of(ApplyO(-1))
    rhs = O @ OperatorExpr.of(MulByMonomial(-1))
    assert apply_operator(lhs, u) == apply_operator(rhs, u)


def test_resolvent_can_be_singular():
    from quasiassoc.errors import DivisionByZero

    with pytest.raises(DivisionByZero):
        ApplyResolvent(coef=ONE).apply(x(0))


def test_laurent_json_round_trip():
    u = x(-2, EPS) + x(3, ONE / (1 - EPS))
    assert LaurentPoly.from_json(u.to_json()) == u


def test_nd_star_examples():
    assert nd_star(1, (1, 0), 2, (0, 2)) == nd_basis(2, (1, 2), 0)
    assert nd_star(1, (1, 0), 1, (2, 0), lam=5) == nd_basis(1, (3, 0), 3)
    with pytest.raises(DimensionMismatch):
        nd_star(1, (0,), 1, (0, 0))
    with pytest.raises(DimensionMismatch):
        nd_star(3, (0, 0), 1, (0, 0))


def test_nd_one_variable_matches_lambda_family():
    # with n = 1 and e_σ ↦ e_{-σ}, the product is (λ - ν) e_{σ+ν}
    for s, v in itertools.product(range(-4, 5), repeat=2):
        assert nd_star(1, (s,), 1, (v,), lam=2) == nd_basis(1, (s + v,), 2 - v)


@pytest.mark.parametrize("lam", [0, 1, Fraction(-1, 2)])
def test_nd_antisymmetrization_is_bracket(lam):
    rng = random.Random(1)
    for _ in range(100):
        i, j = rng.randint(1, 2), rng.randint(1, 2)
        s = (rng.randint(-3, 3), rng.randint(-3, 3))
        v = (rng.randint(-3, 3), rng.randint(-3, 3))
        a, b = nd_basis(i, s), nd_basis(j, v)
        assert nd_mul(a, b, lam) - nd_mul(b, a, lam) == nd_bracket(a, b)
    assert nd_sweep_antisymmetry(2, 3, lam) == []


def test_nd_left_target_reading_fails():
    grid = list(itertools.product(range(-1, 2), repeat=2))
    bad = [
        (i, s, j, v)
        for i, j in itertools.product((1, 2), repeat=2)
        for s in grid
        for v in grid
        if nd_mul(nd_basis(i, s), nd_basis(j, v), target="left") - nd_mul(nd_basis(j, v), nd_basis(i, s), target="left")
        != nd_bracket(nd_basis(i, s), nd_basis(j, v))
    ]
    assert bad


@pytest.mark.parametrize("lam", [0, 3, Fraction(2, 3)])
def test_nd_quasiassociativity_scalar_and_vectorized(lam):
    rng = random.Random(2)
    for _ in range(60):
        a, b, c = (nd_basis(rng.randint(1, 3), [rng.randint(-2, 2) for _ in range(3)]) for _ in range(3))
        assert nd_quasiassoc_residual(a, b, c, lam) == 0
    checked, failures = nd_sweep_quasiassoc(2, 2, lam)
    assert failures == []
    assert checked == (2 * 25) ** 3
