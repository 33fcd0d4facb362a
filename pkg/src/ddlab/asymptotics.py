"""Limits ``(r*, s*, b*, gamma*)`` of the order parameters as ``n, d -> inf``.

The four stationarity conditions, written with ``D(w) = w - 2 v(w)`` where
``v`` solves the proximal relation ``gamma l'(v) + v = w/2``:

    (alpha / sqrt(r)) E[g D] = 1 - 4 lambda gamma
    -alpha E[D]              = s
    E[y D]                   = 0
    alpha E[D^2]             = r - s^2

Expectations run over ``y = +-1`` (probabilities ``rho1``, ``1 - rho1``) and
``w | y ~ N(s + y b, r)``.  Square loss admits a closed form; other losses go
through :func:`solve_fixed_point`.
"""

from dataclasses import dataclass, replace
import math

import numpy as np
from scipy.optimize import brentq

from .exceptions import DomainViolation, NegativeRStar, NonConvergence, SingularRStar
from .generalization import ErrorInputs, test_error
from .losses import MarginLoss, prox_solve
from .quadrature import DEFAULT_NODES, MixtureLaw, expect, hermite_rule

MIN_LAMBDA = 1e-12
_GAMMA_FLOOR = 1e-10
_R_FLOOR = 1e-12


@dataclass(frozen=True)
class ProblemConfig:
    alpha: float
    lam: float
    rho1: float

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")
        if not self.lam >= MIN_LAMBDA:
            raise ValueError(f"lambda must be at least {MIN_LAMBDA}, got {self.lam}")
        if not 0.0 < self.rho1 < 1.0:
            raise ValueError(f"rho1 must lie in (0, 1), got {self.rho1}")


@dataclass(frozen=True)
class AsymptoticSolution:
    r_star: float
    s_star: float
    b_star: float
    gamma_star: float

    def as_tuple(self):
        return (self.r_star, self.s_star, self.b_star, self.gamma_star)


@dataclass(frozen=True)
class SolverOptions:
    tolerance: float = 1e-8
    max_iterations: int = 500
    damping: float = 0.5
    quad_nodes: int = DEFAULT_NODES

    def __post_init__(self):
        if not self.tolerance > 0:
            raise ValueError("tolerance must be positive")
        if not 0.0 < self.damping <= 1.0:
            raise ValueError("damping must lie in (0, 1]")
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be at least 1")


def gamma_star_square(alpha, lam):
    """Positive root of ``4 lam g^2 + (alpha + 4 lam - 1) g - 1 = 0``."""
    bq = alpha + 4.0 * lam - 1.0
    disc = math.sqrt(bq * bq + 16.0 * lam)
    # the product of the roots is -1/(4 lam), so pick the cancellation-free form
    if bq >= 0:
        return 2.0 / (bq + disc)
    return (disc - bq) / (8.0 * lam)


def solve_square_closed_form(cfg):
    """Closed-form fixed quantities for square loss."""
    a, lam, rho = cfg.alpha, cfg.lam, cfg.rho1
    q = rho * (1.0 - rho)
    g = gamma_star_square(a, lam)
    s = 8.0 * a * g * q / (1.0 + g + 4.0 * a * g * q)
    b = (2.0 - s) * (2.0 * rho - 1.0)
    denom = (1.0 + g) ** 2 - a * g * g
    if abs(denom) < 1e-12:
        raise SingularRStar(f"r* denominator vanishes at alpha={a}, lambda={lam}")
    r = (a * g * g * ((s - 2.0) ** 2 - b * b) + (1.0 + g) ** 2 * s * s) / denom
    if r < 0:
        raise NegativeRStar(f"closed form gives r*={r} < 0 at alpha={a}, lambda={lam}")
    return AsymptoticSolution(r_star=r, s_star=s, b_star=b, gamma_star=g)


class _Integrands:
    """Quadrature moments of ``D = w - 2 v(w)`` at a given ``(r, s, b, gamma)``."""

    def __init__(self, cfg, loss, rule):
        self.cfg = cfg
        self.loss = MarginLoss.from_name(loss)
        self.rule = rule

    def moments(self, r, s, b, gamma):
        """Return ``(E[g D], E[D], E[y D], E[D^2])``."""
        rule = self.rule
        rho = self.cfg.rho1
        sr = math.sqrt(r)
        g = rule.nodes
        w = np.concatenate([s + b + sr * g, s - b + sr * g])
        d = w - 2.0 * prox_solve(self.loss, gamma, w)
        n = len(g)
        dp, dm = d[:n], d[n:]
        wt = rule.weights
        mp = np.array([wt @ (g * dp), wt @ dp, wt @ (dp * dp)])
        mm = np.array([wt @ (g * dm), wt @ dm, wt @ (dm * dm)])
        egd, ed, ed2 = rho * mp + (1.0 - rho) * mm
        eyd = rho * mp[1] - (1.0 - rho) * mm[1]
        return egd, ed, eyd, ed2

    def residuals(self, r, s, b, gamma):
        a, lam = self.cfg.alpha, self.cfg.lam
        egd, ed, eyd, ed2 = self.moments(r, s, b, gamma)
        return np.array(
            [
                a / math.sqrt(r) * egd - (1.0 - 4.0 * lam * gamma),
                -a * ed - s,
                eyd,
                a * ed2 - (r - s * s),
            ]
        )


def stationarity_residuals(sol, cfg, loss, rule=None):
    """Residual vector of the four stationarity conditions at ``sol``.

    Ordered as (norm condition, overlap condition, bias condition,
    variance condition); each vanishes at the true limit.  Evaluated through
    :func:`ddlab.quadrature.expect`, independently of the solver's own
    vectorised moments.
    """
    if rule is None:
        rule = hermite_rule()
    r, s, b, gamma = sol.as_tuple()
    if not gamma > 0:
        raise ValueError("gamma_star must be positive")
    if not r > 0:
        raise ValueError("r_star must be positive")
    loss = MarginLoss.from_name(loss)
    law = MixtureLaw(s=s, b=b, r=r, rho1=cfg.rho1)

    def gap(w):
        return w - 2.0 * prox_solve(loss, gamma, w)

    a, lam = cfg.alpha, cfg.lam
    egd = expect(law, rule, lambda w, g, y: g * gap(w))
    ed = expect(law, rule, lambda w, g, y: gap(w))
    eyd = expect(law, rule, lambda w, g, y: y * gap(w))
    ed2 = expect(law, rule, lambda w, g, y: gap(w) ** 2)
    return np.array(
        [
            a / math.sqrt(r) * egd - (1.0 - 4.0 * lam * gamma),
            -a * ed - s,
            eyd,
            a * ed2 - (r - s * s),
        ]
    )


def _bracket_root(func, x0, step, max_expand=80):
    """Find ``lo < hi`` with ``func(lo) <= 0 <= func(hi)`` for increasing ``func``."""
    lo, hi = x0 - step, x0 + step
    flo, fhi = func(lo), func(hi)
    for _ in range(max_expand):
        if flo <= 0 <= fhi:
            return lo, hi, flo, fhi
        step *= 2.0
        if flo > 0:
            lo = x0 - step
            flo = func(lo)
        if fhi < 0:
            hi = x0 + step
            fhi = func(hi)
    raise NonConvergence("could not bracket scalar root")


def _solve_increasing(func, x0, step):
    if func(x0) == 0:
        return x0
    lo, hi, flo, fhi = _bracket_root(func, x0, step)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    return brentq(func, lo, hi, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)


def _solve_gamma(ints, r, s, b, gamma0):
    """Root in gamma of the norm condition, which is increasing in gamma."""
    a, lam = ints.cfg.alpha, ints.cfg.lam
    sr = math.sqrt(r)

    def f(lg):
        gamma = math.exp(lg)
        egd = ints.moments(r, s, b, gamma)[0]
        return a / sr * egd - 1.0 + 4.0 * lam * gamma

    return math.exp(_solve_increasing(f, math.log(max(gamma0, _GAMMA_FLOOR)), 0.5))


def _solve_bias(ints, r, s, b0, gamma):
    """Root in b of ``E[y D] = 0``; ``E[y D]`` is nondecreasing in b."""

    def f(b):
        return ints.moments(r, s, b, gamma)[2]

    # with balanced classes the symmetric rule makes b = 0 an exact root
    if ints.cfg.rho1 == 0.5 and f(0.0) == 0:
        return 0.0
    return _solve_increasing(f, b0, 0.1 + 0.1 * math.sqrt(r))


def _initial_guess(cfg):
    try:
        return solve_square_closed_form(cfg)
    except (SingularRStar, NegativeRStar):
        return AsymptoticSolution(r_star=1.0, s_star=0.5, b_star=0.0, gamma_star=1.0)


def solve_fixed_point(cfg, loss, opts=None, initial=None):
    """Damped Gauss-Seidel iteration for the four fixed quantities.

    One sweep updates, in order, ``s`` from the overlap condition, ``b`` and
    ``gamma`` by exact 1-d root solves of the bias and norm conditions, and
    ``r`` from the variance condition.  ``s`` and ``r`` are blended with the
    previous iterate using ``opts.damping``.  The default start is the square
    loss closed form.

    Raises
    ------
    NonConvergence
        After ``opts.max_iterations`` sweeps; carries the last iterate and
        its residual max-norm.
    DomainViolation
        If an iterate turns non-finite.
    """
    opts = opts or SolverOptions()
    loss = MarginLoss.from_name(loss)
    ints = _Integrands(cfg, loss, hermite_rule(opts.quad_nodes))
    sol = initial if initial is not None else _initial_guess(cfg)
    r, s, b, gamma = sol.as_tuple()
    r = max(r, s * s, _R_FLOOR)
    gamma = max(gamma, _GAMMA_FLOOR)
    a, theta = cfg.alpha, opts.damping

    res_norm = np.inf
    for _ in range(opts.max_iterations):
        res = ints.residuals(r, s, b, gamma)
        res_norm = float(np.max(np.abs(res)))
        if not np.isfinite(res_norm):
            raise DomainViolation(f"non-finite residual at r={r}, s={s}, b={b}, gamma={gamma}")
        if res_norm <= opts.tolerance:
            return AsymptoticSolution(float(r), float(s), float(b), float(gamma))

        s_new = -a * ints.moments(r, s, b, gamma)[1]
        s = (1.0 - theta) * s + theta * s_new
        b = _solve_bias(ints, r, s, b, gamma)
        gamma = max(_solve_gamma(ints, r, s, b, gamma), _GAMMA_FLOOR)
        r_new = s * s + a * ints.moments(r, s, b, gamma)[3]
        r = (1.0 - theta) * r + theta * r_new
        r = max(r, s * s, _R_FLOOR)
        if not all(map(math.isfinite, (r, s, b, gamma))):
            raise DomainViolation(f"iterate left the domain: r={r}, s={s}, b={b}, gamma={gamma}")

    last = AsymptoticSolution(r_star=r, s_star=s, b_star=b, gamma_star=gamma)
    raise NonConvergence(
        f"fixed point not reached in {opts.max_iterations} sweeps (residual {res_norm:.3e})",
        last_iterate=last,
        residual_norm=res_norm,
    )


@dataclass(frozen=True)
class CurvePoint:
    alpha: float
    solution: AsymptoticSolution = None
    test_error: float = None
    status: str = "ok"

    @property
    def ok(self):
        return self.status == "ok"


def solve(cfg, loss, opts=None):
    """Closed form for square loss, fixed-point iteration otherwise."""
    loss = MarginLoss.from_name(loss)
    if loss is MarginLoss.SQUARE:
        return solve_square_closed_form(cfg)
    return solve_fixed_point(cfg, loss, opts)


def asymptotic_test_error(sol, rho1):
    return test_error(ErrorInputs(r=sol.r_star, s=sol.s_star, b=sol.b_star, rho1=rho1))


def error_curve(cfg_template, alphas, loss, opts=None):
    """Solve and score every ``alpha`` in ``alphas``.

    Points that fail carry the exception class name in ``status`` instead of
    aborting the sweep.
    """
    alphas = [float(a) for a in alphas]
    if any(a <= 0 for a in alphas):
        raise ValueError("alphas must be positive")
    if any(b <= a for a, b in zip(alphas, alphas[1:])):
        raise ValueError("alphas must be strictly increasing")
    out = []
    for a in alphas:
        cfg = replace(cfg_template, alpha=a)
        try:
            sol = solve(cfg, loss, opts)
            err = asymptotic_test_error(sol, cfg.rho1)
        except Exception as exc:  # per-point failure marker
            out.append(CurvePoint(alpha=a, status=type(exc).__name__))
            continue
        out.append(CurvePoint(alpha=a, solution=sol, test_error=err))
    return out
