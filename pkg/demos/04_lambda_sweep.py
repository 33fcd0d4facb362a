"""
Error against the penalty at fixed alpha
========================================

Fix alpha = 4 and sweep lambda over eight decades.  For clusters close to
balanced there is a best finite penalty; past it the error climbs towards the
trivial level.  For exactly balanced clusters the error settles instead.
"""

import numpy as np

from ddlab import ProblemConfig, asymptotic_test_error, solve_square_closed_form
from ddlab.svg import emit_svg_plot

from _common import out_path, save_rows

lams = np.logspace(-5, 3, 49)
rows = []
for rho1 in (0.5, 0.55, 0.6):
    err = np.array([
        asymptotic_test_error(solve_square_closed_form(ProblemConfig(4.0, lam, rho1)), rho1)
        for lam in lams
    ])
    k = err.argmin()
    print(f"rho1={rho1}: best lambda {lams[k]:.3g} (error {err[k]:.4f}), "
          f"error at lambda=1e3: {err[-1]:.4f}")
    rows += [{"lambda": lam, "rho1": rho1, "test_error": e} for lam, e in zip(lams, err)]

csv_path = save_rows("lambda_sweep.csv", ("lambda", "rho1", "test_error"), rows)
emit_svg_plot(csv_path, "lambda", "test_error", "rho1", out_path("lambda_sweep.svg"), log_x=True)
