"""Closed-form test error of the ReLU student on the two-cluster teacher."""

from dataclasses import dataclass
import math

import numpy as np
from scipy.special import erfc

from .exceptions import InvalidR

_SQRT1_2 = 1.0 / math.sqrt(2.0)


@dataclass(frozen=True)
class ErrorInputs:
    r: float
    s: float
    b: float
    rho1: float

    def __post_init__(self):
        if not self.r > 0:
            raise InvalidR(f"r must be positive, got {self.r}")
        if not 0.0 < self.rho1 < 1.0:
            raise ValueError(f"rho1 must lie in (0, 1), got {self.rho1}")


def std_normal_cdf(z):
    """Standard normal CDF through ``erfc``.

    Only the lower tail is computed directly; the upper half is defined as
    ``1 - Phi(-z)``, which makes the reflection identity hold bit-for-bit and
    keeps full relative accuracy deep in the lower tail.
    """
    z = np.asarray(z, dtype=float)
    tail = 0.5 * erfc(np.abs(z) * _SQRT1_2)
    out = np.where(z < 0, tail, 1.0 - tail)
    return out[()] if out.ndim == 0 else out


def test_error(inp):
    """Misclassification probability for order parameters ``(r, s, b)``.

    ``1 - rho1 Phi((s + b)/sqrt(r)) - rho_{-1} Phi((s - b)/sqrt(r))``.
    """
    if not isinstance(inp, ErrorInputs):
        inp = ErrorInputs(*inp)
    sr = math.sqrt(inp.r)
    rho_minus = 1.0 - inp.rho1
    hit = inp.rho1 * std_normal_cdf((inp.s + inp.b) / sr) + rho_minus * std_normal_cdf(
        (inp.s - inp.b) / sr
    )
    return float(min(1.0, max(0.0, 1.0 - hit)))


test_error.__test__ = False  # keep pytest from collecting the import
