"""Spectral and composite Newton-Cotes quadrature on ``[s, e]``."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .extension import ExtensionConfig, extend_and_fit
from .fft import SizeError
from .interp import antiderivative_definite


@dataclass(frozen=True)
class IntegralTask:
    integrand: Callable
    s: float
    e: float
    cfg: ExtensionConfig
    exact_value: Optional[float] = None

    def __post_init__(self):
        if not self.s < self.e:
            raise ValueError(f"need s < e, got s={self.s}, e={self.e}")


def integrate_spectral(task: IntegralTask) -> float:
    """Integral over ``[s, e]`` of the cut-off extension fitted on ``task.cfg``."""
    poly = extend_and_fit(task.integrand, task.cfg)
    return antiderivative_definite(poly, task.s, task.e)


def _samples(f, s, e, panels):
    x = np.linspace(s, e, panels + 1)
    return np.asarray(f(x), dtype=np.float64) * np.ones_like(x), (e - s) / panels


def integrate_trapezoid(f, s: float, e: float, panels: int) -> float:
    """Composite trapezoid rule with ``panels`` uniform panels."""
    if panels < 1:
        raise ValueError("panels must be >= 1")
    y, h = _samples(f, s, e, panels)
    return float(h * (y.sum() - 0.5 * (y[0] + y[-1])))


def integrate_simpson(f, s: float, e: float, panels: int) -> float:
    """Composite Simpson rule; ``panels`` must be even."""
    if panels < 2 or panels % 2:
        raise SizeError(f"Simpson needs an even panel count >= 2, got {panels}")
    y, h = _samples(f, s, e, panels)
    return float(h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum()))


def log10_error(estimate: float, exact: float) -> float:
    """``log10 |estimate - exact|``; ``-inf`` when they agree exactly."""
    err = abs(estimate - exact)
    return math.log10(err) if err > 0 else -math.inf


def baseline_panels(cfg: ExtensionConfig) -> int:
    """Default baseline panel count, ``2**q``."""
    return cfg.m_terms


METHODS = ("spectral", "trapezoid", "simpson")


def compare_methods(task: IntegralTask, panels: Optional[int] = None) -> dict:
    """Estimates and log10 errors of all three methods on one task."""
    if task.exact_value is None:
        raise ValueError("comparison needs an exact value")
    panels = baseline_panels(task.cfg) if panels is None else panels
    est = {
        "spectral": integrate_spectral(task),
        "trapezoid": integrate_trapezoid(task.integrand, task.s, task.e, panels),
        "simpson": integrate_simpson(task.integrand, task.s, task.e, panels),
    }
    return {m: (v, log10_error(v, task.exact_value)) for m, v in est.items()}
