"""
Finite students against the limit
=================================

Train actual ReLU students by gradient descent on synthetic teacher data and
compare their Monte Carlo test error with the limiting prediction.  The
limit is exact only as d grows, and the ReLU objective is non-convex, so the
check is a consistency check with a loose tolerance.

The error depends on the order parameters only through s / sqrt(r) and
b / sqrt(r), so those are the ratios compared.  The trained norms themselves
come out smaller than r*, and the exact-ReLU objective often stops on the
epoch budget rather than the gradient test.
"""

import math

import numpy as np

from ddlab import (
    ProblemConfig,
    asymptotic_test_error,
    empirical_test_error,
    generate_dataset,
    solve_square_closed_form,
    train_erm,
)

lam, rho1 = 0.1, 0.5
for d in (100, 400):
    for alpha in (2.0, 4.0, 8.0):
        sol = solve_square_closed_form(ProblemConfig(alpha, lam, rho1))
        theory = asymptotic_test_error(sol, rho1)
        gaps, ratios, done = [], [], 0
        for seed in range(1, 4):
            ds = generate_dataset(d, int(round(alpha * d)), rho1, seed)
            st = train_erm(ds, lam, "square")
            emp = empirical_test_error(st.beta, st.bias, ds.eta, rho1, 50_000, seed)
            gaps.append(abs(emp - theory))
            ratios.append(st.s_hat / math.sqrt(st.r_hat))
            done += st.converged
        print(f"d={d:3d} alpha={alpha:3.1f}  theory {theory:.4f}  mean gap {np.mean(gaps):.4f}  "
              f"s/sqrt(r) {np.mean(ratios):.3f} vs {sol.s_star / math.sqrt(sol.r_star):.3f}  "
              f"converged {done}/3")
