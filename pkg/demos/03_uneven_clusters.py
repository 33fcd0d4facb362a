"""
Uneven clusters
===============

With 70% of the labels equal to +1, a student that always answers +1 already
scores 0.3.  Small penalties still show the spike at alpha = 1.  Large
penalties hold the error at that trivial level for a while before data wins.

How long the flat stretch lasts depends strongly on lambda; the last block
below measures the drift over alpha in [0.05, 2] for a few penalties.
"""

import numpy as np

from ddlab import ProblemConfig, error_curve
from ddlab.svg import emit_svg_plot

from _common import out_path, save_rows

alphas = np.round(np.arange(1, 1201) * 0.05, 12)  # out to alpha = 60
rows = []
curves = {}
for lam in (1e-5, 1.0, 5.0, 100.0):
    curve = error_curve(ProblemConfig(1.0, lam, 0.7), alphas, "square")
    curves[lam] = np.array([p.test_error for p in curve])
    rows += [{"alpha": p.alpha, "lambda": lam, "test_error": p.test_error} for p in curve]

err = curves[1e-5]
print(f"lambda=1e-5: starts at {err[0]:.4f}, peak at alpha={alphas[err.argmax()]:.2f}")

head = alphas <= 2.0
for lam, err in curves.items():
    drift = np.abs(np.diff(err[head])).sum()
    print(f"lambda={lam:<6} drift on [0.05, 2]: {drift:.4f}   error at 60: {err[-1]:.4f}")

csv_path = save_rows("uneven_clusters.csv", ("alpha", "lambda", "test_error"), rows)
emit_svg_plot(csv_path, "alpha", "test_error", "lambda", out_path("uneven_clusters.svg"))
