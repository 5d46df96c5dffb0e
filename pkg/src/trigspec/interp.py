"""Adjusted trigonometric interpolation of even/odd periodic samples.

An even sample set on ``N = 2M`` equispaced nodes ``x_j = -b + j*lam`` is
fitted by a cosine series of ``M`` terms whose constant term is the mean of
the even-indexed samples. The result reproduces every even-indexed sample
and misses every odd-indexed one by the same constant ``eps_M``. Odd sample
sets are fitted by a sine series that reproduces all samples.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import fft as _fft

NODE_RTOL = 1e-12


class Parity(enum.Enum):
    EVEN = "even"
    ODD = "odd"

    @classmethod
    def parse(cls, value) -> "Parity":
        if isinstance(value, cls):
            return value
        return cls(str(value).lower())


class InconsistentSamplesError(ValueError):
    """Samples do not have the symmetry their declared parity requires."""


class ConfigurationError(ValueError):
    """Two objects that must share a geometry do not."""


def nodes(half_period: float, n: int, offset: float = 0.0) -> np.ndarray:
    """Grid ``offset - b + j*2b/n`` for ``0 <= j < n``."""
    lam = 2.0 * half_period / n
    # (j - n/2) * lam keeps x_{n-j} == -x_j bit-for-bit
    return offset + lam * (np.arange(n) - n // 2)


@dataclass(frozen=True)
class SampleGrid:
    """Equispaced samples of an even or odd ``2b``-periodic function."""

    half_period: float
    values: np.ndarray
    parity: Parity = Parity.EVEN

    def __post_init__(self):
        y = np.asarray(self.values, dtype=np.float64)
        object.__setattr__(self, "values", y)
        object.__setattr__(self, "parity", Parity.parse(self.parity))
        n = y.shape[0]
        if y.ndim != 1 or n < 4 or not _fft.is_power_of_two(n):
            raise _fft.SizeError(f"sample count must be a power of two >= 4, got {n}")
        if not self.half_period > 0:
            raise ValueError("half period must be positive")

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def m(self) -> int:
        return self.n // 2

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_period / self.n

    def nodes(self) -> np.ndarray:
        return nodes(self.half_period, self.n)

    @classmethod
    def from_function(cls, f, half_period, n, parity=Parity.EVEN):
        """Sample ``f`` on the grid; ``f`` itself must carry the declared parity."""
        x = nodes(half_period, n)
        y = np.asarray(f(x), dtype=np.float64) * np.ones_like(x)
        parity = Parity.parse(parity)
        # the node at -b is shared with +b; use the exact symmetric value
        if parity is Parity.ODD:
            y[0] = 0.0
            y[n // 2] = 0.0
        return cls(half_period, y, parity)

    def check_symmetry(self) -> None:
        y = self.values
        scale = NODE_RTOL * max(np.max(np.abs(y)), np.finfo(float).tiny)
        mirror = y[1:][::-1]  # y_{N-j} for j = 1..N-1
        if self.parity is Parity.EVEN:
            bad = np.max(np.abs(y[1:] - mirror))
        else:
            bad = max(np.max(np.abs(y[1:] + mirror)), abs(y[0]), abs(y[self.m]))
        if bad > scale:
            raise InconsistentSamplesError(
                f"{self.parity.value} samples violate symmetry by {bad:.3e}"
            )


@dataclass(frozen=True)
class TrigPoly:
    """Finite cosine (EVEN) or sine (ODD) series in ``(x - offset) * pi / b``."""

    parity: Parity
    coefficients: np.ndarray
    half_period: float
    offset: float = 0.0
    eps_m: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "parity", Parity.parse(self.parity))
        a = np.array(self.coefficients, dtype=np.float64)
        a.setflags(write=False)
        object.__setattr__(self, "coefficients", a)

    @property
    def m(self) -> int:
        return self.coefficients.shape[0]

    def __call__(self, x):
        return self.eval(x)

    def eval(self, x):
        """Value of the series at ``x`` (scalar or array)."""
        return self.derivative(x, 0)

    def derivative(self, x, order: int = 1):
        """Exact ``order``-th derivative of the series at ``x``."""
        if order < 0:
            raise ValueError("derivative order must be non-negative")
        scalar = np.ndim(x) == 0
        flat = np.atleast_1d(np.asarray(x, dtype=np.float64)).ravel()
        out = _fft.trig_series(self.coefficients, flat, self.offset, 2.0 * self.half_period,
                               order, self.parity is Parity.ODD)
        if order:
            out *= (math.pi / self.half_period) ** order
        if scalar:
            return float(out[0])
        return out.reshape(np.shape(x))

    def integrate(self, lo: float, hi: float) -> float:
        """Definite integral of the series over ``[lo, hi]``."""
        return antiderivative_definite(self, lo, hi)

    def with_offset(self, offset: float) -> "TrigPoly":
        return TrigPoly(self.parity, self.coefficients, self.half_period, offset, self.eps_m)

    # flat record: parity, b, o, M, eps_M, a_0..a_{M-1}
    def to_record(self) -> list[str]:
        head = [self.parity.value, _fmt(self.half_period), _fmt(self.offset),
                str(self.m), _fmt(self.eps_m)]
        return head + [_fmt(a) for a in self.coefficients]

    @classmethod
    def from_record(cls, record) -> "TrigPoly":
        record = [str(r).strip() for r in record]
        parity, b, o, m, eps = record[:5]
        coef = [float(c) for c in record[5:]]
        if len(coef) != int(m):
            raise ValueError(f"record declares M={m} but carries {len(coef)} coefficients")
        return cls(Parity.parse(parity), np.array(coef), float(b), float(o), float(eps))


def _fmt(v: float) -> str:
    return repr(float(v))


def fit(grid: SampleGrid) -> TrigPoly:
    """Adjusted interpolant of ``grid`` computed with one inverse FFT."""
    grid.check_symmetry()
    y = grid.values
    m = grid.m
    c = _fft.ifft(y)
    sign = (-1.0) ** np.arange(m)
    if grid.parity is Parity.EVEN:
        a = 2.0 * c.real[:m] * sign
        a[0] = y[0::2].mean()
        eps = (y[0::2].sum() - y[1::2].sum()) / m
    else:
        a = 2.0 * c.imag[:m] * sign
        a[0] = 0.0
        eps = 0.0
    return TrigPoly(grid.parity, a, grid.half_period, 0.0, eps)


def fit_direct(grid: SampleGrid) -> TrigPoly:
    """O(N^2) term-by-term evaluation of the coefficient sums (test oracle)."""
    y = grid.values
    n, m = grid.n, grid.m
    j = np.arange(m)[:, None]
    k = np.arange(n)[None, :]
    ang = 2.0 * np.pi * ((j * k) % n) / n
    sign = (-1.0) ** np.arange(m)
    if grid.parity is Parity.EVEN:
        a = 2.0 / n * sign * (np.cos(ang) @ y)
        a[0] = sum(y[2 * i] for i in range(m)) / m
        eps = sum((-1) ** i * y[i] for i in range(n)) / m
    else:
        a = 2.0 / n * sign * (np.sin(ang) @ y)
        eps = 0.0
    return TrigPoly(grid.parity, a, grid.half_period, 0.0, eps)


def antiderivative_definite(p: TrigPoly, lo: float, hi: float) -> float:
    """Closed-form integral of a fitted series between ``lo`` and ``hi``."""
    if lo > hi:
        raise ValueError("lo must not exceed hi")
    b = p.half_period
    a = p.coefficients
    j = np.arange(1, p.m)
    k = j * (math.pi / b)
    t_hi, t_lo = hi - p.offset, lo - p.offset
    if p.parity is Parity.EVEN:
        osc = np.sin(k * t_hi) - np.sin(k * t_lo)
        return float(a[0] * (hi - lo) + np.sum(a[1:] / k * osc))
    osc = np.cos(k * t_lo) - np.cos(k * t_hi)
    return float(np.sum(a[1:] / k * osc))


def antiderivative_at(p: TrigPoly, lo: float, points) -> np.ndarray:
    """Integral of ``p`` from ``lo`` to each of ``points`` (any order)."""
    points = np.atleast_1d(np.asarray(points, dtype=np.float64))
    b = p.half_period
    a = p.coefficients
    k = np.arange(1, p.m) * (math.pi / b)
    w = np.concatenate([[0.0], a[1:] / k])
    period = 2.0 * b
    if p.parity is Parity.EVEN:
        at = _fft.trig_series(w, points, p.offset, period, odd=True)
        at0 = _fft.trig_series(w, [lo], p.offset, period, odd=True)[0]
        return a[0] * (points - lo) + (at - at0)
    at = _fft.trig_series(w, points, p.offset, period)
    at0 = _fft.trig_series(w, [lo], p.offset, period)[0]
    return at0 - at


def doubling_residual(fine: TrigPoly, coarse: TrigPoly) -> float:
    """max_j |a_j^N - (a_j^{2N} + a_{N-j}^{2N})| over ``1 <= j < M``."""
    if fine.parity is not coarse.parity:
        raise ConfigurationError("parity mismatch")
    if not math.isclose(fine.half_period, coarse.half_period, rel_tol=1e-15):
        raise ConfigurationError("half-period mismatch")
    if fine.m != 2 * coarse.m:
        raise ConfigurationError(f"fine fit must have twice the terms ({fine.m} vs {coarse.m})")
    m = coarse.m
    n = 2 * m
    j = np.arange(1, m)
    af, ac = fine.coefficients, coarse.coefficients
    if m < 2:
        return 0.0
    return float(np.max(np.abs(ac[j] - (af[j] + af[n - j]))))


def coefficient_decay_profile(p: TrigPoly, smoothness: int) -> np.ndarray:
    """Rows ``(j, |a_j| * (N sin(pi j/N))**(K+1))`` for ``1 <= j < M``."""
    n = 2 * p.m
    j = np.arange(1, p.m)
    scale = (n * np.sin(np.pi * j / n)) ** (smoothness + 1)
    return np.column_stack([j, np.abs(p.coefficients[1:]) * scale])


def fit_function(f, half_period: float, n: int, parity=Parity.EVEN) -> TrigPoly:
    """Sample a periodic even/odd ``f`` on ``n`` nodes and fit it."""
    return fit(SampleGrid.from_function(f, half_period, n, parity))
