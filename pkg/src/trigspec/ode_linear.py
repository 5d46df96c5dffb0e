"""Linear first-order ODE ``y' + P(x) y = Q(x)`` via spectral antiderivatives.

The solution is ``y = (y0 + G) / I`` with ``I = exp(int_{x0}^x P)`` and
``G = int_{x0}^x I Q``; both integrals come from cut-off extension fits.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .extension import DomainError, ExtensionConfig, extend_and_fit, extend_samples
from .interp import TrigPoly, antiderivative_at

LOG_RANGE = 700.0


class IntegratingFactorRangeError(ArithmeticError):
    """``exp(int P)`` leaves the double-precision range; split the interval."""


@dataclass(frozen=True)
class LinearOdeProblem:
    P: Callable
    Q: Callable
    x0: float
    y0: float
    cfg: ExtensionConfig

    @property
    def s(self) -> float:
        return self.cfg.s

    @property
    def e(self) -> float:
        return self.cfg.e

    def __post_init__(self):
        if not self.cfg.s <= self.x0 <= self.cfg.e:
            raise ValueError(f"x0={self.x0} lies outside [{self.cfg.s}, {self.cfg.e}]")


def _sample(fn, x):
    with np.errstate(all="ignore"):
        v = np.asarray(fn(x), dtype=np.float64) * np.ones_like(x)
    if not np.all(np.isfinite(v)):
        raise DomainError("coefficient function is not finite on the extension interval")
    return v


def solve_linear(prob: LinearOdeProblem) -> TrigPoly:
    """Fitted solution of ``y' + P y = Q, y(x0) = y0``; accurate on ``[s, e]``."""
    cfg = prob.cfg
    x = cfg.half_nodes()
    p_hat = extend_and_fit(prob.P, cfg)
    log_i = antiderivative_at(p_hat, prob.x0, x)
    worst = float(np.max(np.abs(log_i)))
    if worst > LOG_RANGE:
        raise IntegratingFactorRangeError(
            f"|int P| reaches {worst:.1f} on [{x[0]}, {x[-1]}]; "
            "solve on shorter sub-intervals and chain the initial values"
        )
    i_vals = np.exp(log_i)
    iq_hat = extend_samples(i_vals * _sample(prob.Q, x), cfg)
    g_vals = antiderivative_at(iq_hat, prob.x0, x)
    y_vals = (prob.y0 + g_vals) / i_vals
    return extend_samples(y_vals, cfg)
