#!/usr/bin/env python3
"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_fft.py --sizes 256 1024 4096 --repeat 20
"""

import argparse
import sys
import timeit

import numpy as np

from trigspec import _fft_py

try:
    from trigspec import _fftcore
except ImportError:
    _fftcore = None


def _best(fn, repeat):
    number = max(1, int(0.05 / max(timeit.timeit(fn, number=1), 1e-7)))
    return min(timeit.repeat(fn, number=number, repeat=repeat)) / number


def bench_transform(n, repeat, rng):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    row = {"kernel": "transform", "size": n,
           "python": _best(lambda: _fft_py.transform(v, True), repeat)}
    if _fftcore is not None:
        row["compiled"] = _best(lambda: _fftcore.transform(v, True), repeat)
        row["max_diff"] = float(np.max(np.abs(_fftcore.transform(v, True) - _fft_py.transform(v, True))))
    return row


def bench_series(m, repeat, rng, points=4097):
    coef = rng.normal(size=m) / (1 + np.arange(m)) ** 2
    hi = rng.uniform(0, 1, size=points)
    lo = np.zeros(points)
    row = {"kernel": "series", "size": m,
           "python": _best(lambda: _fft_py.series_turns(coef, hi, lo, 1, False), repeat)}
    if _fftcore is not None:
        row["compiled"] = _best(lambda: _fftcore.series_turns(coef, hi, lo, 1, False), repeat)
        a = _fftcore.series_turns(coef, hi, lo, 1, False)
        b = _fft_py.series_turns(coef, hi, lo, 1, False)
        row["max_diff"] = float(np.max(np.abs(a - b)))
    return row


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--sizes", type=int, nargs="+", default=[64, 256, 1024, 4096])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    rng = np.random.default_rng(args.seed)
    if _fftcore is None:
        print("compiled extension not built; timing the fallback only", file=sys.stderr)
    print(f"{'kernel':<10}{'size':>7}{'python [s]':>14}{'compiled [s]':>14}{'speedup':>9}{'max diff':>11}")
    for size in args.sizes:
        for row in (bench_transform(size, args.repeat, rng), bench_series(size, args.repeat, rng)):
            comp = row.get("compiled")
            speed = f"{row['python'] / comp:9.1f}" if comp else f"{'-':>9}"
            comp_s = f"{comp:14.3e}" if comp else f"{'-':>14}"
            diff = f"{row['max_diff']:11.1e}" if "max_diff" in row else f"{'-':>11}"
            print(f"{row['kernel']:<10}{row['size']:>7}{row['python']:14.3e}{comp_s}{speed}{diff}")


if __name__ == "__main__":
    main()
