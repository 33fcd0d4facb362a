"""Gauss-Hermite expectations over the two-cluster Gaussian law of ``w``.

Conditional on the label ``y``, ``w = s + y b + sqrt(r) g`` with ``g`` standard
normal.  Expectations over ``(w, g, y)`` reduce to a label-weighted pair of
one-dimensional Gaussian integrals, each evaluated with a probabilists'
Gauss-Hermite rule.
"""

from dataclasses import dataclass
import math

import numpy as np
from scipy.special import roots_hermitenorm

from .exceptions import UnsupportedOrder

DEFAULT_NODES = 61
MAX_NODES = 501


@dataclass(frozen=True)
class HermiteRule:
    """Nodes and weights for ``E[f(g)]``, ``g ~ N(0, 1)``; weights sum to 1."""

    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self):
        return len(self.nodes)

    def mean(self, values):
        return float(np.dot(self.weights, values))


@dataclass(frozen=True)
class MixtureLaw:
    s: float
    b: float
    r: float
    rho1: float

    def __post_init__(self):
        if not self.r >= 0:
            raise ValueError(f"r must be non-negative, got {self.r}")
        if not 0.0 <= self.rho1 <= 1.0:
            raise ValueError(f"rho1 must lie in [0, 1], got {self.rho1}")

    @property
    def rho_minus(self):
        return 1.0 - self.rho1


_RULE_CACHE = {}


def hermite_rule(n_nodes=DEFAULT_NODES):
    """Probabilists' Gauss-Hermite rule normalised to the standard normal.

    The rule is exact for polynomials of degree up to ``2 n - 1``.  Nodes and
    weights are symmetrised so odd moments vanish to rounding.
    """
    if isinstance(n_nodes, bool) or int(n_nodes) != n_nodes or not 1 <= n_nodes <= MAX_NODES:
        raise UnsupportedOrder(f"n_nodes must be an integer in [1, {MAX_NODES}], got {n_nodes}")
    n_nodes = int(n_nodes)
    if n_nodes not in _RULE_CACHE:
        x, w = roots_hermitenorm(n_nodes)
        x = 0.5 * (x - x[::-1])
        w = 0.5 * (w + w[::-1])
        w = w / math.fsum(w)
        x.setflags(write=False)
        w.setflags(write=False)
        _RULE_CACHE[n_nodes] = HermiteRule(nodes=x, weights=w)
    return _RULE_CACHE[n_nodes]


def expect(law, rule, f):
    """``rho_1 E[f | y=1] + rho_{-1} E[f | y=-1]`` under ``law``.

    ``f(w, g, y)`` is called once per label with ``w`` and ``g`` as arrays of
    node values and ``y`` as a scalar, so it should be written with numpy
    operations.  Scalar-returning callables are broadcast.
    """
    g = rule.nodes
    sr = math.sqrt(law.r)
    total = 0.0
    for y, p in ((1.0, law.rho1), (-1.0, law.rho_minus)):
        if p == 0.0:
            continue
        w = law.s + y * law.b + sr * g
        vals = np.broadcast_to(np.asarray(f(w, g, y), dtype=float), g.shape)
        total += p * float(np.dot(rule.weights, vals))
    return total
