"""
Double descent in the sample ratio
==================================

A ReLU student trained with square loss and almost no ridge penalty.  The
limiting test error is a function of alpha = n/d alone, and it falls, climbs
to a spike where the sample count equals the dimension, then falls again.
"""

import numpy as np

from ddlab import ProblemConfig, error_curve
from ddlab.svg import emit_svg_plot

from _common import out_path, save_rows

alphas = np.round(np.arange(1, 201) * 0.05, 12)
curve = error_curve(ProblemConfig(alpha=1.0, lam=1e-5, rho1=0.5), alphas, "square")
err = np.array([p.test_error for p in curve])

# where is the spike, and where is the dip before it?
peak = alphas[np.argmax(err)]
dip = alphas[:20][np.argmin(err[:20])]
print(f"peak at alpha = {peak:.2f} with error {err.max():.4f}")
print(f"dip before the peak at alpha = {dip:.2f} with error {err[:20].min():.4f}")
print(f"error at alpha = 10: {err[-1]:.4f}")

# r* blows up as alpha -> 1: the interpolating student has a huge norm
for p in curve:
    if p.alpha in (0.5, 0.9, 1.0, 1.1, 2.0):
        print(f"alpha={p.alpha:4.2f}  r*={p.solution.r_star:12.4f}  s*={p.solution.s_star:.4f}")

rows = [{"alpha": p.alpha, "test_error": p.test_error} for p in curve]
csv_path = save_rows("double_descent.csv", ("alpha", "test_error"), rows)
print("wrote", emit_svg_plot(csv_path, "alpha", "test_error", None, out_path("double_descent.svg")))
