"""Smooth unconstrained minimisation: Armijo backtracking with L-BFGS directions."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np


class Termination(enum.Enum):
    OBJECTIVE_TOL = "objective_tol"
    GRADIENT_TOL = "gradient_tol"
    MAX_ITER = "max_iter"
    STALLED = "stalled"


class NumericalFailure(ArithmeticError):
    """Objective or gradient became non-finite; ``last_iterate`` is the last finite point."""

    def __init__(self, message, last_iterate):
        super().__init__(message)
        self.last_iterate = last_iterate


@dataclass(frozen=True)
class OptimizerConfig:
    max_iterations: int = 5000
    tol_objective: float = 1e-14
    tol_gradient: float = 1e-10
    armijo_c: float = 1e-4
    backtrack_factor: float = 0.5
    memory: int = 10
    max_backtracks: int = 60

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be positive")
        if not (self.tol_objective > 0 and self.tol_gradient > 0):
            raise ValueError("tolerances must be positive")
        if not 0 < self.armijo_c < 1:
            raise ValueError("armijo_c must lie in (0, 1)")
        if not 0 < self.backtrack_factor < 1:
            raise ValueError("backtrack_factor must lie in (0, 1)")
        if self.memory < 0:
            raise ValueError("memory must be non-negative")


@dataclass
class OptimizerTrace:
    iterations: int = 0
    objective_history: list = field(default_factory=list)
    final_gradient_norm: float = float("nan")
    termination_reason: Optional[Termination] = None


def _two_loop(g, pairs):
    """L-BFGS product ``H g`` from stored ``(s, y, rho)`` pairs."""
    q = g.copy()
    alphas = []
    for s, y, rho in reversed(pairs):
        a = rho * (s @ q)
        q -= a * y
        alphas.append(a)
    s, y, _ = pairs[-1]
    q *= (s @ y) / (y @ y)
    for (s, y, rho), a in zip(pairs, reversed(alphas)):
        q += (a - rho * (y @ q)) * s
    return q


def minimize(objective: Callable, gradient: Callable, z0, cfg: OptimizerConfig = OptimizerConfig(),
             fixed_mask=None):
    """Minimise ``objective`` from ``z0``; components where ``fixed_mask`` is True stay put.

    Returns ``(z, trace)``. Every accepted step strictly decreases the objective.
    """
    z = np.array(z0, dtype=np.float64)
    free = np.ones(z.shape, dtype=bool) if fixed_mask is None else ~np.asarray(fixed_mask, bool)

    def grad(v):
        g = np.asarray(gradient(v), dtype=np.float64).copy()
        g[~free] = 0.0
        return g

    f = float(objective(z))
    g = grad(z)
    if not (np.isfinite(f) and np.all(np.isfinite(g))):
        raise NumericalFailure("non-finite objective or gradient at the starting point", z.copy())

    trace = OptimizerTrace(objective_history=[f])
    pairs: deque = deque(maxlen=cfg.memory) if cfg.memory else deque(maxlen=1)
    for it in range(cfg.max_iterations):
        gnorm = float(np.max(np.abs(g))) if g.size else 0.0
        if f <= cfg.tol_objective:
            trace.termination_reason = Termination.OBJECTIVE_TOL
            break
        if gnorm <= cfg.tol_gradient:
            trace.termination_reason = Termination.GRADIENT_TOL
            break

        d = -_two_loop(g, list(pairs)) if cfg.memory and pairs else -g
        slope = float(g @ d)
        if slope >= 0:  # not a descent direction; reset curvature memory
            pairs.clear()
            d, slope = -g, -float(g @ g)
        step = 1.0 if (cfg.memory and pairs) else min(1.0, 1.0 / max(gnorm, 1e-300))

        accepted = False
        for _ in range(cfg.max_backtracks):
            z_new = z + step * d
            z_new[~free] = z[~free]
            f_new = float(objective(z_new))
            if np.isfinite(f_new) and f_new <= f + cfg.armijo_c * step * slope and f_new < f:
                accepted = True
                break
            step *= cfg.backtrack_factor
        if not accepted:
            trace.termination_reason = Termination.STALLED
            break

        g_new = grad(z_new)
        if not np.all(np.isfinite(g_new)):
            raise NumericalFailure("non-finite gradient at accepted iterate", z.copy())
        s_vec, y_vec = z_new - z, g_new - g
        sy = float(s_vec @ y_vec)
        if cfg.memory and sy > 1e-300:
            pairs.append((s_vec, y_vec, 1.0 / sy))
        z, f, g = z_new, f_new, g_new
        trace.objective_history.append(f)
        trace.iterations = it + 1
    else:
        trace.termination_reason = Termination.MAX_ITER

    trace.final_gradient_norm = float(np.max(np.abs(g))) if g.size else 0.0
    return z, trace
