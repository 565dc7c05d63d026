"""Exact verification of quasiassociative (pre-Lie) structures behind the Virasoro algebra."""

from .errors import QuasiassocError
from .scalars import EPS, ONE, ZERO, EpsPoly, RatFunc, ratfunc_arith, ratfunc_eval, ratfunc_normalize
from .graded import (
    CentralCharge,
    DualVector,
    GradedElement,
    Lambda,
    StructureFamily,
    Table,
    VirasoroEps,
    antisymmetrize,
    central_phi,
    cocycle_residual,
    commutator,
    extended_mul,
    mul,
    quasiassoc_residual,
    solve_central_extensions,
    structure_coeff,
)
from .complex import (
    Chain,
    Cochain,
    GradedTable,
    LeftMult,
    Trivial,
    boundary,
    check_kappa_skew,
    check_representation,
    delta,
    delta_squared_residual,
    duality_residual,
    search_strong_reps,
)
from .diffalg import LaurentPoly, OperatorExpr, nd_bracket, nd_star, omega_hat, omega_hat_new, res, star
from .findim import FinAlgebra, cotangent, ehrenfest, fd_quasiassoc_residual, no_associative_witness, semidirect
from .suites import run_suite

__version__ = "0.1.0"
