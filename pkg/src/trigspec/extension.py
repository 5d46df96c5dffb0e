"""Smooth cut-off and periodic extension of functions on ``[s, e]``.

The cut-off ``h`` equals 1 on ``[s, e]``, vanishes outside
``(s - delta, e + delta)`` and is C-infinity in between. Multiplying ``f`` by
``h`` and reflecting about ``o = s - delta`` yields a ``2b``-periodic even
(or odd) function that agrees with ``f`` on ``[s, e]`` and can be fitted by
:func:`trigspec.interp.fit`.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .interp import Parity, SampleGrid, TrigPoly, fit

DEFAULT_SHAPE = 0.5


class DomainError(ValueError):
    """The sampled function is not finite somewhere on the extension interval."""


def bump_g(x, r: float):
    """``exp(-r / x**2)`` for ``x > 0`` and exactly 0 otherwise."""
    x = np.asarray(x, dtype=np.float64)
    pos = x > 0
    out = np.zeros_like(x)
    xp = x[pos]
    with np.errstate(under="ignore"):
        out[pos] = np.exp(-r / (xp * xp))
    return out if out.ndim else float(out)


def blend_b(x, r: float):
    """Smooth step: 0 for ``x <= 0``, 1 for ``x >= 1``, ``B(x) + B(1-x) = 1``."""
    x = np.asarray(x, dtype=np.float64)
    g = np.asarray(bump_g(x, r))
    gc = np.asarray(bump_g(1.0 - x, r))
    # g + gc > 0 everywhere: at least one of x, 1-x is >= 1/2
    out = g / (g + gc)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class CutoffParams:
    s: float
    e: float
    delta: float
    r: float = DEFAULT_SHAPE

    def __post_init__(self):
        if not self.s < self.e:
            raise ValueError(f"need s < e, got s={self.s}, e={self.e}")
        if not self.delta > 0:
            raise ValueError("delta must be positive")
        if not self.r > 0:
            raise ValueError("shape parameter r must be positive")


def cutoff_h(x, cp: CutoffParams):
    """Product of a rising blend at ``s - delta`` and a falling blend at ``e + delta``."""
    left = blend_b((np.asarray(x, dtype=np.float64) - (cp.s - cp.delta)) / cp.delta, cp.r)
    right = blend_b((cp.e + cp.delta - np.asarray(x, dtype=np.float64)) / cp.delta, cp.r)
    return left * right


@dataclass(frozen=True)
class ExtensionConfig:
    """Grid geometry for extending ``f`` from ``[s, e]``.

    ``n = 2**p`` nodes span ``[s, e]`` with spacing ``lam``; the half period
    carries ``M = 2**q`` spacings, leaving ``m = (M - n) / 2`` on each side
    for the cut-off ramp, so ``delta = m * lam``.
    """

    s: float
    e: float
    p: int
    q: int
    r: float = DEFAULT_SHAPE
    parity: Parity = Parity.EVEN

    def __post_init__(self):
        object.__setattr__(self, "parity", Parity.parse(self.parity))
        if not self.s < self.e:
            raise ValueError(f"need s < e, got s={self.s}, e={self.e}")
        if not 0 < self.p < self.q:
            raise ValueError(f"need 0 < p < q, got p={self.p}, q={self.q}")
        if not self.r > 0:
            raise ValueError("shape parameter r must be positive")

    @classmethod
    def with_delta(cls, s, e, p, q, delta, r=DEFAULT_SHAPE, parity=Parity.EVEN, rel_tol=1e-12):
        """Build a config and check a quoted ``delta`` against the derived one."""
        cfg = cls(s, e, p, q, r, parity)
        if not math.isclose(cfg.delta, delta, rel_tol=rel_tol):
            raise ValueError(
                f"delta={delta} is inconsistent with (s,e,p,q); derived delta is {cfg.delta}"
            )
        return cfg

    @property
    def n(self) -> int:
        return 2**self.p

    @property
    def m_terms(self) -> int:
        return 2**self.q

    @property
    def n_nodes(self) -> int:
        return 2 * self.m_terms

    @property
    def spacing(self) -> float:
        return (self.e - self.s) / self.n

    @property
    def margin(self) -> int:
        return (self.m_terms - self.n) // 2

    @property
    def delta(self) -> float:
        return self.margin * self.spacing

    @property
    def offset(self) -> float:
        return self.s - self.delta

    @property
    def half_period(self) -> float:
        return self.e + self.delta - self.offset

    @property
    def cutoff(self) -> CutoffParams:
        return CutoffParams(self.s, self.e, self.delta, self.r)

    def half_nodes(self) -> np.ndarray:
        """The ``M + 1`` nodes ``o + k*lam`` covering ``[s - delta, e + delta]``."""
        k = np.arange(self.m_terms + 1)
        return self.offset + k * self.spacing

    def interval_nodes(self) -> np.ndarray:
        """The ``n + 1`` grid nodes lying in ``[s, e]``."""
        return self.s + np.arange(self.n + 1) * self.spacing

    def interval_index(self) -> slice:
        """Slice of :meth:`half_nodes` that falls in ``[s, e]``."""
        return slice(self.margin, self.margin + self.n + 1)


def extend_samples(values, cfg: ExtensionConfig, apply_cutoff: bool = True) -> TrigPoly:
    """Fit from samples of ``f`` at ``cfg.half_nodes()``.

    ``values[k]`` is ``f(o + k*lam)`` for ``0 <= k <= M``. The samples are
    damped by the cut-off, reflected to the full ``2M``-node grid and fitted.
    """
    g = np.asarray(values, dtype=np.float64)
    m = cfg.m_terms
    if g.shape != (m + 1,):
        raise ValueError(f"expected {m + 1} samples on the half grid, got {g.shape}")
    if not np.all(np.isfinite(g)):
        raise DomainError("non-finite samples on the extension interval")
    if apply_cutoff:
        g = g * cutoff_h(cfg.half_nodes(), cfg.cutoff)
    # full grid x_j = (j - M) * lam, so |x_j| = |j - M| * lam
    idx = np.abs(np.arange(2 * m) - m)
    y = g[idx]
    if cfg.parity is Parity.ODD:
        y = np.where(np.arange(2 * m) < m, -y, y)
        y[0] = 0.0
        y[m] = 0.0
    poly = fit(SampleGrid(cfg.half_period, y, cfg.parity))
    return poly.with_offset(cfg.offset)


def extend_and_fit(f, cfg: ExtensionConfig) -> TrigPoly:
    """Cut-off, reflect and fit ``f`` (a vectorised callable) on ``cfg``'s grid."""
    x = cfg.half_nodes()
    with np.errstate(all="ignore"):
        try:
            values = np.asarray(f(x), dtype=np.float64) * np.ones_like(x)
        except (ValueError, ArithmeticError) as exc:
            raise DomainError(f"f could not be evaluated on [{x[0]}, {x[-1]}]: {exc}") from exc
    return extend_samples(values, cfg)


def direct_extension_fit(f, s: float, e: float, m_terms: int) -> TrigPoly:
    """Even reflection of ``f`` about ``s`` without any cut-off (negative control)."""
    b = e - s
    lam = b / m_terms
    x = s + lam * np.arange(m_terms + 1)
    g = np.asarray(f(x), dtype=np.float64) * np.ones_like(x)
    y = g[np.abs(np.arange(2 * m_terms) - m_terms)]
    return fit(SampleGrid(b, y, Parity.EVEN)).with_offset(s)


class TableSampler:
    """Callable backed by a table of exact node values.

    Lookups must hit a tabulated abscissa (within ``atol``); interpolating
    between entries is refused.
    """

    def __init__(self, x, y, atol: float = 1e-12):
        order = np.argsort(np.asarray(x, dtype=np.float64))
        self.x = np.asarray(x, dtype=np.float64)[order]
        self.y = np.asarray(y, dtype=np.float64)[order]
        self.atol = atol

    def __call__(self, x):
        x = np.atleast_1d(np.asarray(x, dtype=np.float64))
        i = np.clip(np.searchsorted(self.x, x), 1, len(self.x) - 1)
        left, right = self.x[i - 1], self.x[i]
        pick = np.where(np.abs(x - left) <= np.abs(right - x), i - 1, i)
        miss = np.abs(self.x[pick] - x) > self.atol
        if np.any(miss):
            raise DomainError(f"no tabulated value at x={x[miss][0]!r}")
        return self.y[pick]


def consecutive_error_series(f, fitted, points) -> np.ndarray:
    """First differences of ``fitted - f`` at sorted ``points``, over ``max|f|``."""
    points = np.asarray(points, dtype=np.float64)
    if np.any(np.diff(points) < 0):
        raise ValueError("points must be sorted ascending")
    fx = np.asarray(f(points), dtype=np.float64) * np.ones_like(points)
    scale = np.max(np.abs(fx))
    if scale == 0:
        raise ValueError("max|f| is zero on the points; series cannot be normalised")
    err = np.asarray(fitted(points), dtype=np.float64) - fx
    return np.diff(err) / scale


def sign_alternation_fraction(series) -> float:
    """Fraction of consecutive pairs in ``series`` with opposite signs."""
    s = np.sign(np.asarray(series))
    if s.shape[0] < 2:
        return 0.0
    return float(np.mean(s[1:] * s[:-1] < 0))


def longest_same_sign_run(series) -> int:
    s = np.sign(np.asarray(series))
    best = run = 0
    prev = 0
    for v in s:
        run = run + 1 if v != 0 and v == prev else (1 if v != 0 else 0)
        prev = v
        best = max(best, run)
    return best
