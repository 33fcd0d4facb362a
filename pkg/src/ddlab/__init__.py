"""Asymptotic test error of a ReLU binary classifier on Gaussian teacher data.

The library computes the high-dimensional limit of the order parameters of a
regularised ReLU student, turns them into a test error, and checks the
prediction against finite-size simulations.
"""

from .asymptotics import (
    AsymptoticSolution,
    ProblemConfig,
    SolverOptions,
    asymptotic_test_error,
    error_curve,
    solve,
    solve_fixed_point,
    solve_square_closed_form,
    stationarity_residuals,
)
from .generalization import ErrorInputs, std_normal_cdf, test_error
from .losses import (
    MarginLoss,
    legendre_conjugate,
    legendre_identities_check,
    loss_derivative,
    loss_value,
    prox_solve,
)
from .quadrature import HermiteRule, MixtureLaw, expect, hermite_rule
from .simulator import (
    Dataset,
    TrainedStudent,
    TrainOptions,
    classify,
    empirical_risk,
    empirical_test_error,
    generate_dataset,
    train_erm,
)

__version__ = "0.1.0"
