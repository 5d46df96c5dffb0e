"""Radix-2 FFT with a fixed normalisation convention.

``fft`` is unnormalised with kernel exp(-2 pi i jk/N); ``ifft`` carries the
1/N factor with kernel exp(+2 pi i jk/N). The butterflies run in the compiled
``_fftcore`` extension when it is importable, otherwise in the numpy fallback.
Set ``TRIGSPEC_PURE_PYTHON=1`` to force the fallback.
"""

import os

import numpy as np

from . import _fft_py

if os.environ.get("TRIGSPEC_PURE_PYTHON", "") not in ("", "0"):
    _core = _fft_py
    BACKEND = "python"
else:
    try:
        from . import _fftcore as _core
        BACKEND = "compiled"
    except ImportError:
        _core = _fft_py
        BACKEND = "python"


class SizeError(ValueError):
    """Raised when a transform length is not a power of two."""


def _check(v):
    v = np.asarray(v, dtype=np.complex128)
    if v.ndim != 1:
        raise SizeError(f"expected a 1-D vector, got shape {v.shape}")
    n = v.shape[0]
    if n < 2 or n & (n - 1):
        raise SizeError(f"length must be a power of two >= 2, got {n}")
    return v


def is_power_of_two(n):
    return n >= 1 and not n & (n - 1)


def fft(v):
    """Forward transform: out_j = sum_k v_k exp(-2 pi i jk/N)."""
    return _core.transform(_check(v), False)


def ifft(v):
    """Inverse transform: out_j = (1/N) sum_k v_k exp(+2 pi i jk/N)."""
    v = _check(v)
    return _core.transform(v, True) / v.shape[0]


def naive_dft(v):
    """O(N^2) forward DFT, used as an oracle."""
    v = np.asarray(v, dtype=np.complex128)
    n = v.shape[0]
    jk = np.outer(np.arange(n), np.arange(n)) % n
    return np.exp(-2j * np.pi * jk / n) @ v


def naive_idft(v):
    """O(N^2) normalised inverse DFT, used as an oracle."""
    v = np.asarray(v, dtype=np.complex128)
    n = v.shape[0]
    jk = np.outer(np.arange(n), np.arange(n)) % n
    return np.exp(2j * np.pi * jk / n) @ v / n


_SPLIT = 134217729.0  # 2**27 + 1, Veltkamp splitter


def _split(v):
    c = _SPLIT * v
    hi = c - (c - v)
    return hi, v - hi


def turns(x, offset, period):
    """``(x - offset) / period`` as an unevaluated sum ``hi + lo``.

    Both the subtraction and the division are compensated, so ``lo`` carries
    the rounding error of ``hi`` to roughly double-double accuracy.
    """
    x = np.atleast_1d(np.asarray(x, dtype=np.float64))
    t = x - offset
    # two-sum error of x + (-offset)
    bv = t - x
    t_err = (x - (t - bv)) + (-offset - bv)
    hi = t / period
    # exact product hi * period = p + e (Dekker)
    p = hi * period
    ah, al = _split(hi)
    bh, bl = _split(np.float64(period))
    e = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    lo = ((t - p) - e + t_err) / period
    return hi, lo


def trig_series(coef, x, offset, period, order=0, odd=False):
    """d^k/dt^k of sum_j coef[j] trig(j t), t = 2 pi (x - offset) / period.

    ``trig`` is cos, or sin when ``odd``. Returns the raw ``t``-derivative;
    multiply by ``(2 pi / period)**order`` for the ``x``-derivative.
    """
    hi, lo = turns(x, offset, period)
    return _core.series_turns(coef, hi, lo, int(order), bool(odd))
