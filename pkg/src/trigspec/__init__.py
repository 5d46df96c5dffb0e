"""Adjusted trigonometric interpolation, cut-off extension and spectral solvers."""

from .extension import ExtensionConfig, extend_and_fit, extend_samples
from .fft import BACKEND
from .interp import Parity, SampleGrid, TrigPoly, fit
from .ode_linear import LinearOdeProblem, solve_linear
from .ode_nonlinear import NonlinearOdeProblem, solve_nonlinear
from .quadrature import IntegralTask, integrate_simpson, integrate_spectral, integrate_trapezoid

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "ExtensionConfig", "IntegralTask", "LinearOdeProblem", "NonlinearOdeProblem",
    "Parity", "SampleGrid", "TrigPoly", "extend_and_fit", "extend_samples", "fit",
    "integrate_simpson", "integrate_spectral", "integrate_trapezoid", "solve_linear",
    "solve_nonlinear",
]
