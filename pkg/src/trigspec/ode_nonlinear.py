"""Nonlinear first-order ODE ``y' = f(x, y), y(s) = xi`` by residual minimisation.

Work in the shifted frame ``x' = x - o`` with ``o = s - delta``. The solution
``u`` is extended evenly to ``[-b, b]`` and its derivative ``z = u'`` is odd.
The free variables are the samples ``z_k`` at the nodes ``x'_k = -b + k*lam``
for ``0 <= k < M``; ``u`` is recovered from their sine interpolant in closed
form and the mean-square mismatch ``z_k - F(x'_k, u_k)`` is minimised with an
FFT-assembled gradient.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from . import fft as _fft
from .extension import ExtensionConfig, cutoff_h
from .interp import Parity, TrigPoly
from .optimizer import OptimizerConfig, OptimizerTrace, minimize


class ConvergenceFailure(RuntimeError):
    """The optimiser stopped with the objective above the acceptance level."""

    def __init__(self, message, poly, report):
        super().__init__(message)
        self.poly = poly
        self.report = report


class DivergenceError(ArithmeticError):
    """A Runge-Kutta march produced a non-finite state."""


class ConfigurationError(ValueError):
    pass


@dataclass(frozen=True)
class NonlinearOdeProblem:
    f: Callable
    df_dy: Callable
    xi: float
    cfg: ExtensionConfig
    exact_solution: Optional[Callable] = None

    @property
    def s(self) -> float:
        return self.cfg.s

    @property
    def e(self) -> float:
        return self.cfg.e


def extend_field_F(prob: NonlinearOdeProblem, x, u):
    """Odd extension of ``f * h`` in the shifted frame, ``x`` in ``[-b, b]``."""
    x = np.asarray(x, dtype=np.float64)
    o = prob.cfg.offset
    ax = np.abs(x)
    h = cutoff_h(ax + o, prob.cfg.cutoff)
    with np.errstate(all="ignore"):
        val = np.where(h > 0, np.asarray(prob.f(ax + o, u)) * h, 0.0)
    out = np.where(x < 0, -val, val)
    return out if out.ndim else float(out)


def _extend_field_dF(prob, x, u):
    x = np.asarray(x, dtype=np.float64)
    o = prob.cfg.offset
    ax = np.abs(x)
    h = cutoff_h(ax + o, prob.cfg.cutoff)
    with np.errstate(all="ignore"):
        val = np.where(h > 0, np.asarray(prob.df_dy(ax + o, u)) * h, 0.0)
    return np.where(x < 0, -val, val)


@dataclass
class NonlinearOdeState:
    """Quantities derived from one ``Z`` during objective/gradient assembly."""

    Z: np.ndarray
    U: np.ndarray
    a0: float
    b_coeffs: np.ndarray
    F: np.ndarray
    DF: np.ndarray
    Psi: np.ndarray = field(repr=False)
    I_sum: float = 0.0


class ResidualModel:
    """Grid geometry and FFT weights shared by every objective evaluation."""

    def __init__(self, prob: NonlinearOdeProblem):
        cfg = prob.cfg
        self.prob = prob
        self.M = cfg.m_terms
        self.N = 2 * self.M
        self.b = cfg.half_period
        self.lam = cfg.spacing
        self.index_s = cfg.margin + cfg.n  # x'_{m+n} = -s'
        self.x = self.lam * (np.arange(self.N) - self.M)
        j = np.arange(self.N)
        self.J = np.zeros(self.N)
        self.J[1:self.M] = 1.0 / j[1:self.M]
        self.Phi_N = self.J * np.cos(2.0 * np.pi * j * self.index_s / self.N)
        self._im_phi = _fft.ifft(self.Phi_N).imag

    def pad(self, Z) -> np.ndarray:
        """Odd length-N node vector: ``z_0 = z_M = 0``, ``z_{N-k} = -z_k``."""
        Z = np.asarray(Z, dtype=np.float64)
        if Z.shape != (self.M,):
            raise ValueError(f"expected {self.M} unknowns, got shape {Z.shape}")
        full = np.zeros(self.N)
        full[1:self.M] = Z[1:]
        full[self.M + 1:] = -Z[1:][::-1]
        return full

    def sine_coefficients(self, Z) -> np.ndarray:
        """``b_j = (2/N) sum_k (-1)^j z_k sin(2 pi jk/N)``."""
        c = _fft.ifft(self.pad(Z)).imag[:self.M]
        return 2.0 * c * (-1.0) ** np.arange(self.M)

    def reconstruct_U(self, Z):
        """``(U, a0)`` at all ``N`` nodes with ``u(x'_{m+n}) = xi``."""
        c = _fft.ifft(self.pad(Z)).imag
        v = -(2.0 * self.b * self.N / math.pi) * _fft.ifft(self.J * c).real
        a0 = self.prob.xi - v[self.index_s]
        return a0 + v, a0

    def poly(self, Z) -> TrigPoly:
        """Cosine series for ``u`` in the original coordinate."""
        bj = self.sine_coefficients(Z)
        j = np.arange(1, self.M)
        a = np.empty(self.M)
        a[1:] = -self.b * bj[1:] / (j * math.pi)
        _, a[0] = self.reconstruct_U(Z)
        return TrigPoly(Parity.EVEN, a, self.b, self.prob.cfg.offset, 0.0)

    def evaluate(self, Z) -> NonlinearOdeState:
        Z = np.asarray(Z, dtype=np.float64)
        U_full, a0 = self.reconstruct_U(Z)
        U = U_full[:self.M]
        x = self.x[:self.M]
        F = extend_field_F(self.prob, x, U)
        DF = _extend_field_dF(self.prob, x, U)
        Zm = Z.copy()
        Zm[0] = 0.0
        psi = (Zm - F) * DF
        return NonlinearOdeState(Zm, U, a0, self.sine_coefficients(Z), F, DF, psi, float(psi.sum()))

    def objective(self, Z) -> float:
        st = self.evaluate(Z)
        r = st.Z - st.F
        return float(r @ r) / (2 * self.M)

    def gradient(self, Z) -> np.ndarray:
        st = self.evaluate(Z)
        psi_n = np.concatenate([st.Psi, np.zeros(self.M)])
        inner = _fft.ifft(self.J * _fft.ifft(psi_n).real).imag
        W = (4.0 * self.b / math.pi) * (st.I_sum * self._im_phi - self.N * inner)
        g = (st.Z - st.F - W[:self.M]) / self.M
        g[0] = 0.0
        return g


def reconstruct_U(model: ResidualModel, Z):
    return model.reconstruct_U(Z)


def reconstruct_U_direct(model: ResidualModel, Z):
    """O(M^2) double sum for ``U`` at the first ``M`` nodes (test oracle)."""
    Z = np.asarray(Z, dtype=np.float64).copy()
    Z[0] = 0.0
    M, N, b = model.M, model.N, model.b
    k = np.arange(N)[:, None]
    j = np.arange(1, M)[None, :]
    l = np.arange(M)[None, :]
    # inner[j] = sum_l z_l sin(2 pi j l / N)
    inner = (np.sin(2 * np.pi * (j.T * l % N) / N) @ Z)
    v = -(4.0 * b / (np.pi * N)) * (np.cos(2 * np.pi * (k * j % N) / N) @ (inner / j[0]))
    a0 = model.prob.xi - v[model.index_s]
    return (a0 + v)[:M], a0


def objective_phi(model: ResidualModel, Z) -> float:
    return model.objective(Z)


def gradient_phi(model: ResidualModel, Z) -> np.ndarray:
    return model.gradient(Z)


def finite_difference_gradient(objective, Z, h: float = 1e-6) -> np.ndarray:
    """Central differences of ``objective`` (gradient oracle)."""
    Z = np.asarray(Z, dtype=np.float64)
    g = np.empty_like(Z)
    for i in range(Z.shape[0]):
        zp, zm = Z.copy(), Z.copy()
        zp[i] += h
        zm[i] -= h
        g[i] = (objective(zp) - objective(zm)) / (2 * h)
    return g


def _rk4_step(f, x, y, lam):
    k1 = f(x, y)
    k2 = f(x + lam / 2, y + lam / 2 * k1)
    k3 = f(x + lam / 2, y + lam / 2 * k2)
    k4 = f(x + lam, y + lam * k3)
    return y + lam / 6 * (k1 + 2 * k2 + 2 * k3 + k4)


def _march(f, x, y0):
    y = np.empty_like(x)
    y[0] = y0
    with np.errstate(over="ignore", invalid="ignore"):
        for i in range(len(x) - 1):
            y[i + 1] = _rk4_step(f, x[i], y[i], x[i + 1] - x[i])
            if not math.isfinite(y[i + 1]):
                raise DivergenceError(f"RK4 state became non-finite at x={x[i + 1]}")
    return y


def _grid(prob, lam):
    if not lam > 0:
        raise ValueError("step must be positive")
    n = int(round((prob.e - prob.s) / lam))
    if n < 1 or not math.isclose(n * lam, prob.e - prob.s, rel_tol=1e-12):
        raise ValueError(f"step {lam} does not divide [{prob.s}, {prob.e}]")
    return prob.s + lam * np.arange(n + 1)


def rk4(prob: NonlinearOdeProblem, lam: float):
    """Classic RK4 from ``(s, xi)``; returns ``(x, y)`` arrays."""
    x = _grid(prob, lam)
    return x, _march(lambda t, y: float(prob.f(t, y)), x, float(prob.xi))


def benc(prob: NonlinearOdeProblem, lam: float):
    """RK4 steps restarted from the exact solution at every node."""
    if prob.exact_solution is None:
        raise ConfigurationError("benc needs the exact solution")
    x = _grid(prob, lam)
    exact = np.asarray(prob.exact_solution(x), dtype=np.float64)
    y = np.empty_like(x)
    y[0] = prob.xi
    f = lambda t, v: float(prob.f(t, v))
    for i in range(len(x) - 1):
        y[i + 1] = _rk4_step(f, x[i], exact[i], x[i + 1] - x[i])
    return x, y


def initial_guess(prob: NonlinearOdeProblem, model: Optional[ResidualModel] = None) -> np.ndarray:
    """Starting ``Z`` from RK4 on the cut-off field over the half grid ``[0, b]``."""
    model = model or ResidualModel(prob)
    cfg = prob.cfg
    xs = model.lam * np.arange(model.M + 1)  # shifted half grid, x'_k = k lam
    i0 = cfg.margin  # x' = s'
    field_ = lambda t, y: float(extend_field_F(prob, t, y))
    u = np.empty(model.M + 1)
    u[i0:] = _march(field_, xs[i0:], float(prob.xi))
    u[:i0 + 1] = _march(field_, xs[:i0 + 1][::-1], float(prob.xi))[::-1]
    # node x'_k for k < M sits at -(M - k) lam; u is even
    uk = u[model.M - np.arange(model.M)]
    Z = extend_field_F(prob, model.x[:model.M], uk)
    if not np.all(np.isfinite(Z)):
        raise DivergenceError("initial guess is not finite")
    Z[0] = 0.0
    return Z


@dataclass
class NonlinearReport:
    opt_err: float
    iterations: int
    termination: str
    intp: Optional[float] = None
    intp_g: Optional[float] = None
    residual_max: float = 0.0
    trace: Optional[OptimizerTrace] = field(default=None, repr=False)


def solve_nonlinear(prob: NonlinearOdeProblem, opt_cfg: OptimizerConfig = OptimizerConfig(),
                    accept_phi: float = 1e-12, z0=None):
    """Minimise the residual objective; returns ``(poly, report, Z)``.

    ``poly`` approximates ``y`` on ``[s, e]``. Raises :class:`ConvergenceFailure`
    when the final objective exceeds ``accept_phi``.
    """
    model = ResidualModel(prob)
    z0 = initial_guess(prob, model) if z0 is None else np.asarray(z0, dtype=np.float64)
    mask = np.zeros(model.M, dtype=bool)
    mask[0] = True
    z0 = z0.copy()
    z0[0] = 0.0
    Z, trace = minimize(model.objective, model.gradient, z0, opt_cfg, mask)
    poly = model.poly(Z)
    st = model.evaluate(Z)
    phi = trace.objective_history[-1]
    report = NonlinearReport(phi, trace.iterations, trace.termination_reason.value,
                             residual_max=float(np.max(np.abs(st.Z - st.F))), trace=trace)
    if prob.exact_solution is not None:
        cfg = prob.cfg
        grid = cfg.interval_nodes()
        fine = cfg.s + (cfg.spacing / 4) * np.arange(4 * cfg.n + 1)
        report.intp = float(np.max(np.abs(poly(grid) - prob.exact_solution(grid))))
        report.intp_g = float(np.max(np.abs(poly(fine) - prob.exact_solution(fine))))
    if not phi <= accept_phi:
        raise ConvergenceFailure(f"objective {phi:.3e} above {accept_phi:.1e} after "
                                 f"{trace.iterations} iterations", poly, report)
    return poly, report, Z


def ode_test_problem(theta: float, s: float = 1.0, e: float = 3.0, p: int = 6, q: int = 7,
                     r: float = 0.5) -> NonlinearOdeProblem:
    """``y' = g(x) + x y + y^2`` with exact solution ``x cos(theta x)``, ``y(s) = s cos(theta s)``."""
    def exact(x):
        return x * np.cos(theta * x)

    def f(x, y):
        Y = exact(x)
        g = np.cos(theta * x) - theta * x * np.sin(theta * x) - x * Y - Y * Y
        return g + x * y + y * y

    def df_dy(x, y):
        return x + 2.0 * y

    cfg = ExtensionConfig(s, e, p, q, r)
    return NonlinearOdeProblem(f, df_dy, float(exact(s)), cfg, exact)
