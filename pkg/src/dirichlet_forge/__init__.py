"""Dirichlet series over Beurling systems, with monotonicity and zero-free checks."""
from ._kernels import BACKEND, available_backends
from .arith import (
    CoefficientFunction,
    DirichletCharacter,
    Factorization,
    PrimeTable,
    character,
    characters_mod,
    extend_completely_multiplicative,
    factorize,
    liouville,
    mangoldt_divisor_identity_residual,
    sieve_primes,
    von_mangoldt,
)
from .beurling import (
    BeurlingSystem,
    QuadraticFieldSpec,
    classical_system,
    parse_system,
    quadratic_field_system,
    zeta_system_eval,
)
from .dirichlet import (
    ComplexPoint,
    DirichletStream,
    EvaluationWindow,
    SeriesValue,
    eval_dirichlet_truncated,
    exp_identity_residual,
    hurwitz_zeta,
    l_function,
    log_coefficients,
    square_pair_coefficients,
    zeta_euler_maclaurin,
)
from .errors import ForgeError
from .monotone import (
    MonotoneReport,
    PowerSeries,
    absolutely_monotone_probe,
    completely_monotone_probe,
    compose_series,
    exp_series,
    log_series,
    radius_estimate,
    taylor_from_dirichlet,
)
from .zerofree import (
    PingPongState,
    min_re_w_plus_w2,
    per_prime_bound_check,
    pingpong_derive,
    pingpong_disjoint_resolve,
)

__version__ = "0.1.0"
