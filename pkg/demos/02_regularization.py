"""
Ridge penalty flattens the spike
================================

Same model, three penalties.  A small penalty keeps the spike at alpha = 1,
a large one removes it and the curve falls monotonically.
"""

import numpy as np

from ddlab import ProblemConfig, error_curve
from ddlab.svg import emit_svg_plot

from _common import out_path, save_rows

alphas = np.round(np.arange(1, 201) * 0.05, 12)
rows = []
for lam in (0.005, 0.5, 5.0):
    curve = error_curve(ProblemConfig(1.0, lam, 0.5), alphas, "square")
    err = np.array([p.test_error for p in curve])
    rises = np.diff(err) > 1e-6
    at_one = err[alphas == 1.0][0]
    print(f"lambda={lam:<6} error at alpha=1: {at_one:.4f}, {rises.sum()} rising steps")
    rows += [{"alpha": p.alpha, "lambda": lam, "test_error": p.test_error} for p in curve]

csv_path = save_rows("regularization.csv", ("alpha", "lambda", "test_error"), rows)
emit_svg_plot(csv_path, "alpha", "test_error", "lambda", out_path("regularization.svg"))
