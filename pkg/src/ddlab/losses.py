"""Margin losses, the scalar proximal relation and numeric Legendre conjugates.

Every loss here is a convex function of the margin ``x = y * f(x_i)``.  The
proximal relation solved by :func:`prox_solve` is

    gamma * l'(v) + v = w / 2,

whose left side is strictly increasing in ``v`` for any convex ``l`` and
``gamma > 0``, so the root is unique.
"""

import enum
import math

import numpy as np

from .exceptions import BoundaryMaximizer, NonConvergence

PROX_MAX_ITER = 200
_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


class MarginLoss(enum.Enum):
    SQUARE = "square"
    HINGE = "hinge"
    LOGISTIC = "logistic"

    @classmethod
    def from_name(cls, name):
        """Look a loss up by its CLI/config name (case-insensitive)."""
        if isinstance(name, cls):
            return name
        try:
            return cls(str(name).strip().lower())
        except ValueError:
            valid = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown loss {name!r}; expected one of {valid}") from None

    @property
    def strictly_convex(self):
        return self is not MarginLoss.HINGE


def loss_value(loss, x):
    """Evaluate ``l(x)``; works elementwise on arrays."""
    loss = MarginLoss.from_name(loss)
    x = np.asarray(x, dtype=float)
    if loss is MarginLoss.SQUARE:
        out = 0.5 * (1.0 - x) ** 2
    elif loss is MarginLoss.HINGE:
        out = np.maximum(0.0, 1.0 - x)
    else:
        # log(1 + e^{-x}) without overflow for large |x|
        out = np.maximum(0.0, -x) + np.log1p(np.exp(-np.abs(x)))
    return out[()] if out.ndim == 0 else out


def loss_derivative(loss, x):
    """Evaluate ``l'(x)``.

    The hinge kink at ``x = 1`` returns the subgradient 0.
    """
    loss = MarginLoss.from_name(loss)
    x = np.asarray(x, dtype=float)
    if loss is MarginLoss.SQUARE:
        out = x - 1.0
    elif loss is MarginLoss.HINGE:
        out = np.where(x < 1.0, -1.0, 0.0)
    else:
        # -1 / (1 + e^{x}), split by sign to keep exp() bounded
        e = np.exp(-np.abs(x))
        out = np.where(x >= 0, -e / (1.0 + e), -1.0 / (1.0 + e))
    return out[()] if out.ndim == 0 else out


def loss_second_derivative(loss, x):
    """``l''(x)``; zero almost everywhere for hinge."""
    loss = MarginLoss.from_name(loss)
    x = np.asarray(x, dtype=float)
    if loss is MarginLoss.SQUARE:
        out = np.ones_like(x)
    elif loss is MarginLoss.HINGE:
        out = np.zeros_like(x)
    else:
        e = np.exp(-np.abs(x))
        out = e / (1.0 + e) ** 2
    return out[()] if out.ndim == 0 else out


def prox_residual(loss, gamma, w, v):
    """Distance of ``w/2 - v`` from ``gamma * dl(v)``.

    For differentiable losses this is ``|gamma l'(v) + v - w/2|``.  At the
    hinge kink the full subdifferential ``[-1, 0]`` is used, so a root sitting
    exactly on ``v = 1`` has zero residual.
    """
    loss = MarginLoss.from_name(loss)
    w = np.asarray(w, dtype=float)
    v = np.asarray(v, dtype=float)
    res = np.abs(gamma * loss_derivative(loss, v) + v - 0.5 * w)
    if loss is MarginLoss.HINGE:
        target = 0.5 * w - v
        at_kink = v == 1.0
        kink_res = np.maximum(0.0, np.maximum(target, -gamma - target))
        res = np.where(at_kink, kink_res, res)
    return res[()] if res.ndim == 0 else res


def _prox_square(gamma, w):
    return (w + 2.0 * gamma) / (2.0 * (gamma + 1.0))


def _prox_hinge(gamma, w):
    half = 0.5 * w
    return np.where(half + gamma < 1.0, half + gamma, np.where(half > 1.0, half, 1.0))


def prox_bisect(loss, gamma, w, max_iter=PROX_MAX_ITER):
    """Solve ``gamma l'(v) + v = w/2`` by safeguarded Newton/bisection.

    Works for any convex loss exposing a derivative.  The bracket starts at
    ``w/2 -+ (gamma + 1)`` and is doubled until it straddles the root; Newton
    steps that leave the bracket are replaced by bisection.
    """
    loss = MarginLoss.from_name(loss)
    w = np.asarray(w, dtype=float)
    half = 0.5 * w

    def h(v):
        return gamma * loss_derivative(loss, v) + v - half

    width = gamma + 1.0
    lo = half - width
    hi = half + width
    for _ in range(64):
        bad = (h(lo) > 0) | (h(hi) < 0)
        if not np.any(bad):
            break
        width *= 2.0
        lo = np.where(h(lo) > 0, half - width, lo)
        hi = np.where(h(hi) < 0, half + width, hi)
    else:
        raise NonConvergence("could not bracket the proximal root")

    v = 0.5 * (lo + hi)
    smooth = loss is not MarginLoss.HINGE
    for _ in range(max_iter):
        hv = h(v)
        lo = np.where(hv < 0, v, lo)
        hi = np.where(hv > 0, v, hi)
        if smooth:
            slope = 1.0 + gamma * loss_second_derivative(loss, v)
            step = v - hv / slope
            inside = (step > lo) & (step < hi)
            v_new = np.where(inside, step, 0.5 * (lo + hi))
        else:
            v_new = 0.5 * (lo + hi)
        v_new = np.where(hv == 0, v, v_new)
        if np.all((v_new == v) | (hi - lo <= 4 * np.spacing(np.abs(v) + 1.0))):
            v = v_new
            break
        v = v_new
    else:
        raise NonConvergence(f"prox root search exceeded {max_iter} iterations")

    # pick whichever of the final candidates has the smallest residual
    best = v
    for cand in (lo, hi):
        better = np.abs(h(cand)) < np.abs(h(best))
        best = np.where(better, cand, best)
    return best[()] if best.ndim == 0 else best


def prox_solve(loss, gamma, w):
    """Return ``v`` with ``gamma l'(v) + v = w / 2``.

    Square and hinge use their closed forms; logistic goes through
    :func:`prox_bisect`.  ``w`` may be an array.
    """
    loss = MarginLoss.from_name(loss)
    if not gamma > 0:
        raise ValueError(f"gamma must be positive, got {gamma}")
    w = np.asarray(w, dtype=float)
    if loss is MarginLoss.SQUARE:
        v = _prox_square(gamma, w)
    elif loss is MarginLoss.HINGE:
        v = _prox_hinge(gamma, w)
    else:
        return prox_bisect(loss, gamma, w)
    return v[()] if v.ndim == 0 else v


def _golden_max(func, a, b, tol=1e-12, max_iter=500):
    c = b - _GOLDEN * (b - a)
    d = a + _GOLDEN * (b - a)
    fc, fd = func(c), func(d)
    for _ in range(max_iter):
        if abs(b - a) <= tol * (1.0 + abs(c) + abs(d)):
            break
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - _GOLDEN * (b - a)
            fc = func(c)
        else:
            a, c, fc = c, d, fd
            d = a + _GOLDEN * (b - a)
            fd = func(d)
    x = 0.5 * (a + b)
    return x, func(x)


def _conjugate_argmax(loss, y, search_bound):
    loss = MarginLoss.from_name(loss)
    if not search_bound > 0:
        raise ValueError("search_bound must be positive")

    def objective(x):
        return x * y - float(loss_value(loss, x))

    x, val = _golden_max(objective, -search_bound, search_bound)
    edge = 1e-6 * search_bound
    if x <= -search_bound + edge or x >= search_bound - edge:
        raise BoundaryMaximizer(
            f"maximiser of x*{y} - l(x) hit the search bound {search_bound}"
        )
    return x, val


def legendre_conjugate(loss, y, search_bound=50.0):
    """Numeric convex conjugate ``max_{|x| <= bound} {x y - l(x)}``.

    Raises
    ------
    BoundaryMaximizer
        If the maximiser lands on the edge of the search interval, which
        means the bound is too small (or the conjugate is infinite at ``y``).
    """
    return _conjugate_argmax(loss, y, search_bound)[1]


def legendre_identities_check(loss, v, search_bound=None):
    """Numerically check the conjugate identities at margin ``v``.

    Returns ``(u, u * lt'(u) - lt(u))`` with ``u = l'(v)``.  ``lt'(u)`` is
    taken as the conjugate's maximiser (Danskin), so nothing here uses the
    closed form.  For a strictly convex loss the second entry should equal
    ``l(v)``.
    """
    loss = MarginLoss.from_name(loss)
    if not loss.strictly_convex:
        raise ValueError(f"{loss.value} loss is not strictly convex")
    if search_bound is None:
        search_bound = 2.0 * abs(v) + 10.0
    u = float(loss_derivative(loss, v))
    x_star, conj = _conjugate_argmax(loss, u, search_bound)
    return u, u * x_star - conj
