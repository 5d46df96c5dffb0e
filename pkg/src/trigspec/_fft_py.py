"""Pure-Python radix-2 kernels (numpy-vectorised butterflies).

Used when the compiled ``_fftcore`` extension is unavailable, and as the
reference side of the backend benchmark.
"""

from functools import lru_cache

import numpy as np


@lru_cache(maxsize=32)
def _bit_reversal(n):
    bits = n.bit_length() - 1
    idx = np.arange(n)
    rev = np.zeros(n, dtype=np.intp)
    for _ in range(bits):
        rev = (rev << 1) | (idx & 1)
        idx = idx >> 1
    rev.setflags(write=False)
    return rev


@lru_cache(maxsize=32)
def _twiddles(n):
    # exp(-2 pi i k / n) for k < n/2, from exact angles rather than a recurrence
    k = np.arange(n // 2)
    w = np.exp(-2j * np.pi * k / n)
    w.setflags(write=False)
    return w


def transform(v, inverse):
    """Unnormalised radix-2 DIT transform of a power-of-two complex vector.

    ``inverse=False`` uses the kernel exp(-2 pi i jk/N), ``inverse=True``
    exp(+2 pi i jk/N). No scaling is applied here.
    """
    n = v.shape[0]
    a = np.array(v, dtype=np.complex128)[_bit_reversal(n)]
    tw = _twiddles(n)
    if inverse:
        tw = tw.conj()
    half = 1
    while half < n:
        span = 2 * half
        w = tw[:: n // span]
        blocks = a.reshape(n // span, span)
        top = blocks[:, :half].copy()
        bot = blocks[:, half:] * w
        blocks[:, :half] = top + bot
        blocks[:, half:] = top - bot
        half = span
    return a


def series_turns(coef, w_hi, w_lo, order, odd):
    """Sum_j coef[j] * d^order/dt^order trig(j t) with t = 2 pi (w_hi + w_lo).

    ``trig`` is cos (``odd=False``) or sin. The phase of every term is reduced
    to [0, 1) turns before multiplying by 2 pi, so large ``j * t`` loses no
    accuracy. The ``d/dt`` factors are ``j**order``; the caller rescales.
    """
    coef = np.asarray(coef, dtype=np.float64)
    w = np.asarray(w_hi, dtype=np.float64)
    w = w - np.floor(w)
    w1 = np.floor(w * 2.0**30) * 2.0**-30
    w2 = w - w1 + np.asarray(w_lo, dtype=np.float64)
    j = np.arange(coef.shape[0], dtype=np.float64)
    scaled = coef * j**order if order else coef
    # sin(x) = cos(x + 3pi/2); each derivative adds a quarter turn
    quarter = (order + 3 * odd) % 4
    func = np.sin if quarter % 2 else np.cos
    sign = -1.0 if quarter in (1, 2) else 1.0
    out = np.empty(w.shape[0])
    chunk = max(1, 2**20 // max(1, coef.shape[0]))
    for lo in range(0, w.shape[0], chunk):
        sl = slice(lo, lo + chunk)
        u = np.outer(w1[sl], j)  # exact: w1 has 30 bits, j < 2**23
        u -= np.floor(u)
        u += np.outer(w2[sl], j)
        u -= np.floor(u)
        out[sl] = sign * (func(2.0 * np.pi * u) @ scaled)
    return out
