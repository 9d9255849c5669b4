"""Bicomplex Prabhakar calculus.

Bicomplex arithmetic in idempotent form, the Prabhakar (three-parameter
Mittag-Leffler) family, fractional integrals and derivatives on sampled
functions, Laplace transforms and solvers for the associated Cauchy problems.
"""

from .bicomplex import (
    E1,
    E2,
    I1,
    I2,
    J,
    ONE,
    ZERO,
    Bicomplex,
    HyperbolicNumber,
    as_bicomplex,
    bc_pow,
    j_modulus,
    param_valid,
    precedes,
)
from .cauchy import (
    CauchyProblem,
    residual_check,
    solve,
    solve_corollary,
    solve_homogeneous,
    solve_nonhomogeneous,
)
from .errors import BicomplexError, NumericalError, ValidationError
from .laplace import forward_lt_numeric, inverse_lt, kernel_lt_closed, operator_lt
from .ops import (
    Grid,
    OperatorResult,
    SampledFn,
    boundedness_constant,
    prabhakar_derivative,
    prabhakar_integral,
    regularized_derivative,
    rl_derivative,
    rl_integral,
)
from .special import MLParams, bicomplex_gamma, ml1, ml2, ml3, ml_k3, prabhakar_kernel

__version__ = "0.1.0"

__all__ = [
    "Bicomplex",
    "HyperbolicNumber",
    "ONE",
    "ZERO",
    "I1",
    "I2",
    "J",
    "E1",
    "E2",
    "as_bicomplex",
    "bc_pow",
    "j_modulus",
    "precedes",
    "param_valid",
    "BicomplexError",
    "ValidationError",
    "NumericalError",
    "MLParams",
    "bicomplex_gamma",
    "ml1",
    "ml2",
    "ml3",
    "ml_k3",
    "prabhakar_kernel",
    "Grid",
    "SampledFn",
    "OperatorResult",
    "rl_integral",
    "rl_derivative",
    "prabhakar_integral",
    "prabhakar_derivative",
    "regularized_derivative",
    "boundedness_constant",
    "forward_lt_numeric",
    "kernel_lt_closed",
    "operator_lt",
    "inverse_lt",
    "CauchyProblem",
    "solve",
    "solve_homogeneous",
    "solve_nonhomogeneous",
    "solve_corollary",
    "residual_check",
]
