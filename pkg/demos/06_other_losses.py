"""
Logistic and hinge losses
=========================

Without a closed form the four stationarity conditions are solved by a
damped fixed-point iteration.  For square loss that iteration reproduces the
closed form, which is a useful sanity check before trusting it on the other
losses.
"""

import numpy as np

from ddlab import (
    AsymptoticSolution,
    ProblemConfig,
    SolverOptions,
    asymptotic_test_error,
    solve_fixed_point,
    solve_square_closed_form,
    stationarity_residuals,
)

cfg = ProblemConfig(alpha=2.0, lam=0.1, rho1=0.7)
cold = AsymptoticSolution(r_star=1.0, s_star=0.5, b_star=0.0, gamma_star=1.0)
fp = solve_fixed_point(cfg, "square", SolverOptions(tolerance=1e-10), initial=cold)
exact = solve_square_closed_form(cfg)
print("square, fixed point vs closed form:", np.max(np.abs(np.subtract(fp.as_tuple(), exact.as_tuple()))))

for loss in ("square", "logistic", "hinge"):
    for alpha in (0.5, 1.0, 2.0, 4.0):
        c = ProblemConfig(alpha, 0.1, 0.7)
        sol = solve_fixed_point(c, loss)
        res = np.max(np.abs(stationarity_residuals(sol, c, loss)))
        print(f"{loss:8s} alpha={alpha:3.1f}  error {asymptotic_test_error(sol, 0.7):.4f}  "
              f"b*={sol.b_star:+.4f}  residual {res:.1e}")
