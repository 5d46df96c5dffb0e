"""Built-in test functions keyed by id, with exact derivatives and integrals."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np


class UnknownFunctionError(KeyError):
    pass


@dataclass(frozen=True)
class BuiltinFunction:
    name: str
    value: Callable
    d1: Optional[Callable] = None
    d2: Optional[Callable] = None
    antiderivative: Optional[Callable] = None

    def derivative(self, order: int) -> Callable:
        fn = (self.value, self.d1, self.d2)[order] if order < 3 else None
        if fn is None:
            raise ValueError(f"{self.name}: derivative of order {order} not available")
        return fn

    def integral(self, lo: float, hi: float) -> float:
        if self.antiderivative is None:
            raise ValueError(f"{self.name}: no closed-form integral")
        return float(self.antiderivative(hi) - self.antiderivative(lo))


def cos_theta(theta: float) -> BuiltinFunction:
    t = float(theta)
    return BuiltinFunction(
        f"cos_theta({t:g})",
        lambda x: np.cos(t * x),
        lambda x: -t * np.sin(t * x),
        lambda x: -t * t * np.cos(t * x),
        lambda x: np.sin(t * x) / t,
    )


def sin_theta(theta: float) -> BuiltinFunction:
    t = float(theta)
    return BuiltinFunction(
        f"sin_theta({t:g})",
        lambda x: np.sin(t * x),
        lambda x: t * np.cos(t * x),
        lambda x: -t * t * np.sin(t * x),
        lambda x: -np.cos(t * x) / t,
    )


def power(n: int) -> BuiltinFunction:
    n = int(n)
    if n < 0:
        raise ValueError("power needs n >= 0")
    return BuiltinFunction(
        f"power({n})",
        lambda x: np.asarray(x, dtype=np.float64) ** n,
        lambda x: n * np.asarray(x, dtype=np.float64) ** (n - 1) if n else 0.0 * x,
        lambda x: n * (n - 1) * np.asarray(x, dtype=np.float64) ** (n - 2) if n > 1 else 0.0 * x,
        lambda x: np.asarray(x, dtype=np.float64) ** (n + 1) / (n + 1),
    )


def exponential() -> BuiltinFunction:
    return BuiltinFunction("exp", np.exp, np.exp, np.exp, np.exp)


def parabola_sq() -> BuiltinFunction:
    return BuiltinFunction(
        "parabola_sq",
        lambda x: (x - 2.5) ** 2,
        lambda x: 2.0 * (x - 2.5),
        lambda x: 2.0 + 0.0 * x,
        lambda x: (x - 2.5) ** 3 / 3.0,
    )


def bump_d(d: int) -> BuiltinFunction:
    """``(1 - (x/pi)**2)**d`` on ``[-pi, pi]``, continued 2 pi-periodically."""
    d = int(d)
    if d < 1:
        raise ValueError("bump_d needs d >= 1")

    def wrap(x):
        x = np.asarray(x, dtype=np.float64)
        return x - 2 * math.pi * np.round(x / (2 * math.pi))

    def value(x):
        w = wrap(x)
        return (1.0 - (w / math.pi) ** 2) ** d

    def d1(x):
        w = wrap(x)
        return -2.0 * d * w / math.pi**2 * (1.0 - (w / math.pi) ** 2) ** (d - 1)

    def d2(x):
        w = wrap(x)
        u = 1.0 - (w / math.pi) ** 2
        out = -2.0 * d / math.pi**2 * u ** (d - 1)
        if d >= 2:
            out = out + 4.0 * d * (d - 1) * w**2 / math.pi**4 * u ** (d - 2)
        return out

    return BuiltinFunction(f"bump_d({d})", value, d1, d2)


def lookup(func_id: str, theta: Optional[float] = None, n: Optional[int] = None,
           d: Optional[int] = None) -> BuiltinFunction:
    """Resolve a function id and its parameter; missing parameters are an error."""
    def need(v, flag):
        if v is None:
            raise ValueError(f"function '{func_id}' needs --{flag}")
        return v

    if func_id == "cos_theta":
        return cos_theta(need(theta, "theta"))
    if func_id == "sin_theta":
        return sin_theta(need(theta, "theta"))
    if func_id == "power":
        return power(need(n, "n"))
    if func_id == "exp":
        return exponential()
    if func_id == "parabola_sq":
        return parabola_sq()
    if func_id == "bump_d":
        return bump_d(need(d, "d"))
    raise UnknownFunctionError(func_id)


FUNCTION_IDS = ("cos_theta", "sin_theta", "power", "exp", "parabola_sq", "bump_d", "ode_test")
