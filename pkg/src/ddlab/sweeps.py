"""Sweep drivers that turn a :class:`SweepSpec` into a CSV file.

All numbers are written with 17 significant digits and rows follow the
grid order, so identical specs give byte-identical files.
"""

from concurrent.futures import ThreadPoolExecutor
import csv
from dataclasses import dataclass
import math
import os

import numpy as np

from .asymptotics import ProblemConfig, SolverOptions, asymptotic_test_error, solve
from .exceptions import ConfigError
from .losses import MarginLoss
from .quadrature import DEFAULT_NODES
from .simulator import empirical_test_error, generate_dataset, train_erm

THEORY_COLUMNS = (
    "alpha", "lambda", "rho1", "loss", "r_star", "s_star", "b_star", "gamma_star",
    "test_error", "status",
)
VERIFY_COLUMNS = (
    "alpha", "seed", "d", "n", "r_hat", "s_hat", "b_hat", "emp_test_error",
    "theory_test_error", "abs_gap", "status",
)
SIMULATE_COLUMNS = (
    "alpha", "seed", "d", "n", "lambda", "rho1", "loss", "r_hat", "s_hat", "b_hat",
    "final_risk", "epochs", "converged", "emp_test_error", "status",
)
MODES = ("alpha_sweep", "lambda_sweep", "simulate", "verify")


@dataclass
class SweepSpec:
    mode: str
    alpha_grid: tuple = None
    alphas: tuple = None
    alpha: float = None
    lambda_values: tuple = ()
    rho1: float = 0.5
    loss: str = "square"
    d: int = None
    seeds: tuple = ()
    output_path: str = None
    emit_svg: bool = False
    quad_nodes: int = DEFAULT_NODES
    n_test: int = 100_000

    def validate(self):
        if self.mode not in MODES:
            raise ConfigError(f"unknown mode {self.mode!r}")
        if not self.output_path:
            raise ConfigError("an output path is required")
        if not self.lambda_values:
            raise ConfigError("at least one lambda value is required")
        if any(not lam > 0 for lam in self.lambda_values):
            raise ConfigError("lambda values must be positive")
        if not 0.0 < self.rho1 < 1.0:
            raise ConfigError("rho1 must lie in (0, 1)")
        try:
            MarginLoss.from_name(self.loss)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
        if self.mode == "lambda_sweep":
            if self.alpha is None or not self.alpha > 0:
                raise ConfigError("lambda sweep needs a positive fixed alpha")
        else:
            self.alpha_values()
        if self.mode in ("simulate", "verify"):
            if self.d is None or self.d < 1:
                raise ConfigError("simulation needs a positive dimension")
            if len(self.lambda_values) != 1:
                raise ConfigError("simulation runs take exactly one lambda value")
            if self.n_test < 1:
                raise ConfigError("n_test must be positive")
        return self

    def alpha_values(self):
        if self.alphas:
            vals = [float(a) for a in self.alphas]
        elif self.alpha_grid:
            vals = alpha_grid(*self.alpha_grid)
        elif self.alpha is not None:
            vals = [float(self.alpha)]
        else:
            raise ConfigError("no alpha grid given")
        if any(not a > 0 for a in vals):
            raise ConfigError("alpha values must be positive")
        return vals


def alpha_grid(start, stop, step):
    """Inclusive grid ``start, start + step, ..., <= stop``, rounded to 12 decimals."""
    if not step > 0:
        raise ConfigError("alpha step must be positive")
    if stop < start:
        raise ConfigError("alpha stop must not be below start")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return [round(start + k * step, 12) for k in range(count)]


def fmt(x):
    """17-significant-digit float text; empty for missing values."""
    if x is None:
        return ""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, str):
        return x
    return format(float(x), ".17g")


def write_csv(path, columns, rows):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(columns)
        for row in rows:
            writer.writerow([fmt(row.get(c)) for c in columns])
    return path


def _thread_cap():
    raw = os.environ.get("DDLAB_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError:
            raise ConfigError(f"DDLAB_THREADS must be an integer, got {raw!r}") from None
    return os.cpu_count() or 1


def _ordered_map(func, items):
    items = list(items)
    workers = min(_thread_cap(), max(1, len(items)))
    if workers == 1:
        return [func(it) for it in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(func, items))


def theory_point(alpha, lam, rho1, loss, quad_nodes=DEFAULT_NODES):
    row = {"alpha": alpha, "lambda": lam, "rho1": rho1, "loss": MarginLoss.from_name(loss).value}
    try:
        cfg = ProblemConfig(alpha=alpha, lam=lam, rho1=rho1)
        sol = solve(cfg, loss, SolverOptions(quad_nodes=quad_nodes))
        err = asymptotic_test_error(sol, rho1)
    except Exception as exc:
        row["status"] = type(exc).__name__
        return row
    row.update(
        r_star=sol.r_star, s_star=sol.s_star, b_star=sol.b_star,
        gamma_star=sol.gamma_star, test_error=err, status="ok",
    )
    return row


def run_alpha_sweep(spec):
    """Theory curve over the alpha grid, one block of rows per lambda."""
    spec.validate()
    points = [(a, lam) for lam in spec.lambda_values for a in spec.alpha_values()]
    rows = _ordered_map(
        lambda p: theory_point(p[0], p[1], spec.rho1, spec.loss, spec.quad_nodes), points
    )
    write_csv(spec.output_path, THEORY_COLUMNS, rows)
    return rows


def run_lambda_sweep(spec):
    """Theory error over the explicit lambda list at a fixed alpha."""
    spec.validate()
    rows = _ordered_map(
        lambda lam: theory_point(spec.alpha, lam, spec.rho1, spec.loss, spec.quad_nodes),
        spec.lambda_values,
    )
    write_csv(spec.output_path, THEORY_COLUMNS, rows)
    return rows


def _sample_size(alpha, d):
    return max(1, int(math.floor(alpha * d + 0.5)))


def simulate_point(alpha, seed, d, lam, rho1, loss, n_test, opts=None):
    n = _sample_size(alpha, d)
    row = {"alpha": alpha, "seed": int(seed), "d": d, "n": n, "lambda": lam, "rho1": rho1,
           "loss": MarginLoss.from_name(loss).value}
    try:
        ds = generate_dataset(d, n, rho1, seed)
        st = train_erm(ds, lam, loss, opts)
        emp = empirical_test_error(st.beta, st.bias, ds.eta, rho1, n_test, seed)
    except Exception as exc:
        row["status"] = type(exc).__name__
        return row
    row.update(
        r_hat=st.r_hat, s_hat=st.s_hat, b_hat=st.bias, final_risk=st.final_risk,
        epochs=st.epochs, converged=st.converged, emp_test_error=emp, status="ok",
    )
    return row


def run_simulate(spec, opts=None):
    """Train one student per ``(alpha, seed)`` and record its test error."""
    spec.validate()
    lam = spec.lambda_values[0]
    points = [(a, s) for a in spec.alpha_values() for s in spec.seeds]
    rows = _ordered_map(
        lambda p: simulate_point(p[0], p[1], spec.d, lam, spec.rho1, spec.loss, spec.n_test, opts),
        points,
    )
    write_csv(spec.output_path, SIMULATE_COLUMNS, rows)
    return rows


def run_verify(spec, opts=None):
    """Simulation joined with the asymptotic prediction at the same alpha."""
    spec.validate()
    lam = spec.lambda_values[0]
    theory = {
        a: theory_point(a, lam, spec.rho1, spec.loss, spec.quad_nodes) for a in spec.alpha_values()
    }
    points = [(a, s) for a in spec.alpha_values() for s in spec.seeds]
    sims = _ordered_map(
        lambda p: simulate_point(p[0], p[1], spec.d, lam, spec.rho1, spec.loss, spec.n_test, opts),
        points,
    )
    rows = []
    for (a, _), sim in zip(points, sims):
        th = theory[a]
        row = {k: sim.get(k) for k in ("alpha", "seed", "d", "n", "r_hat", "s_hat", "b_hat")}
        row["emp_test_error"] = sim.get("emp_test_error")
        if sim["status"] != "ok":
            row["status"] = sim["status"]
        elif th["status"] != "ok":
            row["status"] = "theory:" + th["status"]
        else:
            row["theory_test_error"] = th["test_error"]
            row["abs_gap"] = abs(sim["emp_test_error"] - th["test_error"])
            row["status"] = "ok"
        rows.append(row)
    write_csv(spec.output_path, VERIFY_COLUMNS, rows)
    return rows
