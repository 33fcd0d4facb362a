"""Finite-size teacher/student simulation.

Data follow ``x_i = eta y_i / sqrt(d) + eps_i`` with ``eta, eps_i ~ N(0, I_d)``
and ``P(y = 1) = rho1``.  The student ``sigma(x^T beta / sqrt(d) + b)`` with a
ReLU ``sigma`` is fit by full-batch gradient descent on

    sum_i l(y_i sigma(x_i^T beta / sqrt(d) + b)) + (lambda / 2) ||beta||^2.

Randomness comes from three independent streams derived from one integer
seed (see :func:`rng_stream`): the dataset, fresh test samples and the
optimiser.
"""

from dataclasses import dataclass, field
import math

import numpy as np

from .exceptions import DimensionMismatch, Diverged
from .losses import MarginLoss, loss_derivative, loss_value

STREAM_DATASET = 0
STREAM_TEST = 1
STREAM_OPTIMIZER = 2

_TEST_CHUNK = 8192


def rng_stream(seed, stream):
    """Generator for one named stream; ``(seed, stream)`` fixes the bits."""
    return np.random.default_rng(np.random.SeedSequence(int(seed), spawn_key=(int(stream),)))


@dataclass(frozen=True, eq=False)
class Dataset:
    d: int
    n: int
    eta: np.ndarray
    features: np.ndarray
    labels: np.ndarray
    seed: int
    noise: np.ndarray = field(repr=False, default=None)


@dataclass(frozen=True)
class TrainOptions:
    learning_rate: float = 1.0
    max_epochs: int = 2000
    relu_smoothing_tau: float = 0.0
    tolerance: float = 1e-12
    seed: int = 0
    line_search: bool = True
    train_bias: bool = True
    warm_start: bool = True
    init_scale: float = 0.0

    def __post_init__(self):
        if not self.learning_rate > 0:
            raise ValueError("learning_rate must be positive")
        if self.relu_smoothing_tau < 0:
            raise ValueError("relu_smoothing_tau must be non-negative")


@dataclass(frozen=True, eq=False)
class TrainedStudent:
    beta: np.ndarray
    bias: float
    r_hat: float
    s_hat: float
    final_risk: float
    initial_risk: float = float("nan")
    epochs: int = 0
    converged: bool = False
    risk_history: tuple = ()


def generate_dataset(d, n, rho1, seed, eta=None):
    """Draw ``n`` teacher samples in dimension ``d``.

    ``eta`` overrides the teacher direction (it is still drawn, so the label
    and noise streams do not shift).
    """
    if d < 1 or n < 1:
        raise ValueError("d and n must be positive")
    if not 0.0 < rho1 < 1.0:
        raise ValueError("rho1 must lie in (0, 1)")
    rng = rng_stream(seed, STREAM_DATASET)
    drawn_eta = rng.standard_normal(d)
    labels = np.where(rng.random(n) < rho1, 1.0, -1.0)
    noise = rng.standard_normal((n, d))
    if eta is None:
        eta = drawn_eta
    else:
        eta = np.asarray(eta, dtype=float)
        if eta.shape != (d,):
            raise DimensionMismatch(f"eta has shape {eta.shape}, expected ({d},)")
    features = np.outer(labels, eta) / math.sqrt(d) + noise
    return Dataset(d=d, n=n, eta=eta, features=features, labels=labels, seed=int(seed), noise=noise)


def _activation(z, mode, tau):
    if mode == "linear":
        return z, np.ones_like(z)
    if mode == "relu" and tau == 0:
        return np.maximum(z, 0.0), (z > 0).astype(float)
    # softplus with temperature tau
    t = z / tau
    return tau * (np.maximum(t, 0.0) + np.log1p(np.exp(-np.abs(t)))), 0.5 * (1.0 + np.tanh(0.5 * t))


def _risk_grad(X, y, beta, bias, lam, loss, mode="relu", tau=0.0):
    d = X.shape[1]
    z = X @ beta / math.sqrt(d) + bias
    act, dact = _activation(z, mode, tau)
    margin = y * act
    risk = float(np.sum(loss_value(loss, margin)) + 0.5 * lam * beta @ beta)
    coef = loss_derivative(loss, margin) * y * dact
    g_beta = X.T @ coef / math.sqrt(d) + lam * beta
    g_bias = float(np.sum(coef))
    return risk, g_beta, g_bias


def _check_dims(ds, beta):
    beta = np.asarray(beta, dtype=float)
    if beta.shape != (ds.d,):
        raise DimensionMismatch(f"beta has shape {beta.shape}, expected ({ds.d},)")
    return beta


def empirical_risk(ds, beta, bias, lam, loss, tau=0.0):
    """Regularised empirical risk of the ReLU student (summed, not averaged)."""
    beta = _check_dims(ds, beta)
    loss = MarginLoss.from_name(loss)
    return _risk_grad(ds.features, ds.labels, beta, float(bias), lam, loss, "relu", tau)[0]


def risk_gradient(ds, beta, bias, lam, loss, tau=0.0):
    """Analytic (sub)gradient of :func:`empirical_risk`; ReLU'(0) is taken as 0."""
    beta = _check_dims(ds, beta)
    loss = MarginLoss.from_name(loss)
    _, gb, gbias = _risk_grad(ds.features, ds.labels, beta, float(bias), lam, loss, "relu", tau)
    return gb, gbias


def _descend(objective, beta, bias, opts, budget, baseline):
    """Gradient descent with optional Armijo backtracking.

    Returns the final point, its risk, the epochs used, whether the gradient
    test was met and the accepted risk sequence.
    """
    # trial steps may overshoot to inf before backtracking rejects them
    with np.errstate(over="ignore", invalid="ignore"):
        return _descend_loop(objective, beta, bias, opts, budget, baseline)


def _descend_loop(objective, beta, bias, opts, budget, baseline):
    risk, gb, gbias = objective(beta, bias)
    history = [risk]
    step = opts.learning_rate
    converged = False
    epoch = 0
    for epoch in range(1, budget + 1):
        if not opts.train_bias:
            gbias = 0.0
        gmax = max(float(np.max(np.abs(gb))), abs(gbias))
        if gmax <= 1e-4 * (1.0 + abs(risk)):
            converged = True
            epoch -= 1
            break
        gsq = float(gb @ gb) + gbias * gbias
        if opts.line_search:
            while True:
                nb = beta - step * gb
                nbias = bias - step * gbias
                new_risk, ngb, ngbias = objective(nb, nbias)
                if math.isfinite(new_risk) and new_risk <= risk - 1e-4 * step * gsq:
                    break
                step *= 0.5
                if step < 1e-300:
                    return beta, bias, risk, epoch, converged, history
        else:
            nb = beta - step * gb
            nbias = bias - step * gbias
            new_risk, ngb, ngbias = objective(nb, nbias)
        if not math.isfinite(new_risk) or new_risk > 1e6 * max(baseline, 1e-300):
            raise Diverged(f"risk rose to {new_risk:.3e} from {baseline:.3e}")
        rel_change = abs(risk - new_risk) / max(abs(risk), 1e-300)
        beta, bias, risk, gb, gbias = nb, nbias, new_risk, ngb, ngbias
        history.append(risk)
        if opts.line_search:
            step *= 2.0
        if rel_change <= opts.tolerance:
            break
    return beta, bias, risk, epoch, converged, history


def train_erm(ds, lam, loss, opts=None):
    """Fit the ReLU student by regularised ERM from ``beta = 0, b = 0``.

    The exact ReLU objective has a dead kink at the origin: every activation
    sits at 0 and any step that lowers the bias switches the whole sample
    off.  With ``opts.warm_start`` a first descent phase therefore runs on
    the ReLU's active (linear) branch, then the exact objective takes over
    from whichever of the warm point and the origin has lower risk.
    """
    if not lam > 0:
        raise ValueError("lambda must be positive")
    opts = opts or TrainOptions()
    loss = MarginLoss.from_name(loss)
    X, y = ds.features, ds.labels
    tau = opts.relu_smoothing_tau

    beta = np.zeros(ds.d)
    if opts.init_scale > 0:
        beta = opts.init_scale * rng_stream(opts.seed, STREAM_OPTIMIZER).standard_normal(ds.d)
    bias = 0.0

    def relu_objective(b_, c_):
        return _risk_grad(X, y, b_, c_, lam, loss, "relu", tau)

    initial_risk = relu_objective(beta, bias)[0]
    start_beta, start_bias = beta, bias
    epochs = 0
    if opts.warm_start:

        def linear_objective(b_, c_):
            return _risk_grad(X, y, b_, c_, lam, loss, "linear")

        lin_risk0 = linear_objective(beta, bias)[0]
        wb, wc, _, used, _, _ = _descend(linear_objective, beta, bias, opts, opts.max_epochs, lin_risk0)
        epochs += used
        if relu_objective(wb, wc)[0] < initial_risk:
            start_beta, start_bias = wb, wc

    beta, bias, risk, used, converged, history = _descend(
        relu_objective, start_beta, start_bias, opts, opts.max_epochs, initial_risk
    )
    epochs += used
    return TrainedStudent(
        beta=beta,
        bias=float(bias),
        r_hat=float(beta @ beta / ds.d),
        s_hat=float(beta @ ds.eta / ds.d),
        final_risk=float(risk),
        initial_risk=float(initial_risk),
        epochs=epochs,
        converged=converged,
        risk_history=tuple(history),
    )


def classify(beta, bias, x):
    """Predicted label: +1 iff ``x^T beta / sqrt(d) + b > 0``.

    ``x`` may be a single sample or a 2-d batch with one sample per row.
    """
    beta = np.asarray(beta, dtype=float)
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != beta.shape[0]:
        raise DimensionMismatch(f"x has {x.shape[-1]} features, beta has {beta.shape[0]}")
    z = x @ beta / math.sqrt(beta.shape[0]) + bias
    out = np.where(z > 0, 1, -1)
    return int(out) if out.ndim == 0 else out


def empirical_test_error(beta, bias, eta, rho1, n_test, seed):
    """Monte Carlo misclassification rate on ``n_test`` fresh teacher samples."""
    if n_test < 1:
        raise ValueError("n_test must be at least 1")
    beta = np.asarray(beta, dtype=float)
    eta = np.asarray(eta, dtype=float)
    d = beta.shape[0]
    if eta.shape != (d,):
        raise DimensionMismatch(f"eta has shape {eta.shape}, expected ({d},)")
    rng = rng_stream(seed, STREAM_TEST)
    wrong = 0
    done = 0
    while done < n_test:
        m = min(_TEST_CHUNK, n_test - done)
        y = np.where(rng.random(m) < rho1, 1, -1)
        x = np.outer(y, eta) / math.sqrt(d) + rng.standard_normal((m, d))
        wrong += int(np.count_nonzero(classify(beta, bias, x) != y))
        done += m
    return wrong / n_test
