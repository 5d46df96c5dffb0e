import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from trigspec.fft import SizeError
from trigspec.interp import (ConfigurationError, InconsistentSamplesError, Parity, SampleGrid,
                             TrigPoly, antiderivative_at, antiderivative_definite,
                             coefficient_decay_profile, doubling_residual, fit, fit_direct,
                             fit_function, nodes)
from trigspec.quadrature import integrate_simpson
from trigspec.registry import bump_d

PI = math.pi
PROBES = np.linspace(-PI, PI, 2**12 + 1)


def _probe_error(poly, fn, order=0):
    return float(np.max(np.abs(poly.derivative(PROBES, order) - fn.derivative(order)(PROBES))))


def test_nodes_are_symmetric():
    x = nodes(1.3, 64)
    assert x[0] == -1.3
    np.testing.assert_array_equal(x[1:], -x[1:][::-1])


def test_recovers_cosine_mode():
    p = fit_function(lambda x: np.cos(PI * x / PI), PI, 8)
    expected = np.zeros(4)
    expected[1] = 1.0
    np.testing.assert_allclose(p.coefficients, expected, atol=1e-13)
    assert abs(p.eps_m) < 1e-13


def test_recovers_sine_mode():
    p = fit_function(lambda x: np.sin(2 * PI * x / PI), PI, 16, Parity.ODD)
    expected = np.zeros(8)
    expected[2] = 1.0
    np.testing.assert_allclose(p.coefficients, expected, atol=1e-13)
    assert p.eps_m == 0.0


def test_bump_m16_error_level():
    err = _probe_error(fit_function(bump_d(2).value, PI, 32), bump_d(2))
    assert 4.29e-5 / 3 <= err <= 4.29e-5 * 3


def test_bump_m1024_error_level():
    err = _probe_error(fit_function(bump_d(2).value, PI, 2048), bump_d(2))
    assert 1.28e-10 / 10 <= err <= 1.28e-10 * 10


def test_bump_m64_derivative_error_level():
    err = _probe_error(fit_function(bump_d(2).value, PI, 128), bump_d(2), 1)
    assert 3.5e-5 / 3 <= err <= 3.5e-5 * 3


def test_kink_derivative_error_does_not_decay():
    fn = bump_d(1)
    errs = [_probe_error(fit_function(fn.value, PI, 2 * m), fn, 1) for m in (16, 1024)]
    assert all(abs(e - 2 / PI) < 0.05 for e in errs)


def _random_grid(rng, n, parity):
    y = rng.normal(size=n)
    k = np.arange(1, n)
    mirror = y[n - k]
    if parity is Parity.EVEN:
        y[k] = np.where(k < n - k, y[k], mirror)
    else:
        y[k] = np.where(k < n - k, y[k], -mirror)
        y[0] = y[n // 2] = 0.0
    return SampleGrid(float(rng.uniform(0.5, 3)), y, parity)


@pytest.mark.parametrize("parity", [Parity.EVEN, Parity.ODD])
@pytest.mark.parametrize("n", [8, 64, 256])
def test_fft_fit_matches_direct_sums(parity, n):
    grid = _random_grid(np.random.default_rng(n), n, parity)
    a, b = fit(grid), fit_direct(grid)
    np.testing.assert_allclose(a.coefficients, b.coefficients, atol=1e-12)
    assert abs(a.eps_m - b.eps_m) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(h=st.integers(2, 9), seed=st.integers(0, 2**31), odd=st.booleans())
def test_node_contracts(h, seed, odd):
    parity = Parity.ODD if odd else Parity.EVEN
    grid = _random_grid(np.random.default_rng(seed), 2**h, parity)
    p = fit(grid)
    y, v = grid.values, p(grid.nodes())
    tol = 1e-12 * np.max(np.abs(y))
    if odd:
        assert np.max(np.abs(v - y)) <= tol
    else:
        assert np.max(np.abs(v[0::2] - y[0::2])) <= tol
        assert np.max(np.abs(v[1::2] - y[1::2] - p.eps_m)) <= tol


def test_refit_is_unique():
    grid = _random_grid(np.random.default_rng(5), 64, Parity.EVEN)
    p = fit(grid)
    v = p(grid.nodes())
    v[1::2] -= p.eps_m
    q = fit(SampleGrid(grid.half_period, v, Parity.EVEN))
    np.testing.assert_allclose(q.coefficients, p.coefficients, atol=1e-12)


def test_rejects_asymmetric_samples():
    y = np.arange(8, dtype=float)
    with pytest.raises(InconsistentSamplesError):
        fit(SampleGrid(1.0, y, Parity.EVEN))
    with pytest.raises(InconsistentSamplesError):
        fit(SampleGrid(1.0, np.ones(8), Parity.ODD))


@pytest.mark.parametrize("n", [6, 2, 12])
def test_rejects_bad_sizes(n):
    with pytest.raises(SizeError):
        SampleGrid(1.0, np.ones(n))


def test_constant_poly_evaluates_to_constant():
    p = TrigPoly(Parity.EVEN, [1.0, 0, 0, 0], 2.0)
    np.testing.assert_array_equal(p(np.linspace(-9, 9, 11)), np.ones(11))
    assert isinstance(p(0.3), float)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**31), x=st.floats(-50, 50))
def test_periodicity(seed, x):
    rng = np.random.default_rng(seed)
    b = float(rng.uniform(0.5, 3))
    p = TrigPoly(Parity.EVEN, rng.normal(size=16) / (1 + np.arange(16)), b, float(rng.normal()))
    assert abs(p(x + 2 * b) - p(x)) <= 1e-12


def test_derivative_of_cos_at_zero():
    p = TrigPoly(Parity.EVEN, [0.0, 1.0, 0.0], 2.0)
    assert abs(p.derivative(0.0, 1)) < 1e-15
    assert p.derivative(0.0, 2) == pytest.approx(-(PI / 2) ** 2, rel=1e-14)


@pytest.mark.parametrize("parity", [Parity.EVEN, Parity.ODD])
def test_derivative_matches_finite_difference(parity):
    rng = np.random.default_rng(11)
    b = 1.7
    p = TrigPoly(parity, rng.normal(size=32) / (1 + np.arange(32)) ** 2, b, 0.3)
    x = rng.uniform(-b, b, size=20)
    h = 1e-6 * b
    fd = (p(x + h) - p(x - h)) / (2 * h)
    np.testing.assert_allclose(p.derivative(x, 1), fd, rtol=1e-5, atol=1e-7)


def test_derivative_rejects_negative_order():
    with pytest.raises(ValueError):
        TrigPoly(Parity.EVEN, [1.0], 1.0).derivative(0.0, -1)


def test_antiderivative_of_constant():
    p = TrigPoly(Parity.EVEN, [2.5, 0, 0], 1.0)
    assert antiderivative_definite(p, -0.3, 0.9) == pytest.approx(2.5 * 1.2, abs=1e-15)


def test_full_period_integral():
    rng = np.random.default_rng(3)
    p = TrigPoly(Parity.EVEN, rng.normal(size=20), 1.3, 0.4)
    assert p.integrate(0.4 - 1.3, 0.4 + 1.3) == pytest.approx(2 * 1.3 * p.coefficients[0], abs=1e-12)


@pytest.mark.parametrize("parity", [Parity.EVEN, Parity.ODD])
def test_antiderivative_against_dense_simpson(parity):
    rng = np.random.default_rng(4)
    p = TrigPoly(parity, rng.normal(size=24) / (1 + np.arange(24)), 1.1, -0.2)
    lo, hi = -0.9, 1.6
    assert abs(p.integrate(lo, hi) - integrate_simpson(p, lo, hi, 2**16)) <= 1e-10
    pts = np.array([hi, lo, 0.3])
    np.testing.assert_allclose(antiderivative_at(p, lo, pts),
                               [p.integrate(lo, hi), 0.0, p.integrate(lo, 0.3)], atol=1e-13)


def test_antiderivative_rejects_reversed_limits():
    with pytest.raises(ValueError):
        antiderivative_definite(TrigPoly(Parity.EVEN, [1.0], 1.0), 1.0, 0.0)


def test_doubling_identity_bump():
    f = bump_d(2).value
    assert doubling_residual(fit_function(f, PI, 64), fit_function(f, PI, 32)) <= 1e-12


def test_doubling_identity_single_mode():
    f = lambda x: np.cos(PI * x / 2.0)
    assert doubling_residual(fit_function(f, 2.0, 32), fit_function(f, 2.0, 16)) <= 1e-14


def test_doubling_identity_random_series():
    rng = np.random.default_rng(9)
    coef = rng.normal(size=8)  # degree < M/2 for M = 16
    f = lambda x: sum(c * np.cos(j * PI * x / 1.5) for j, c in enumerate(coef))
    assert doubling_residual(fit_function(f, 1.5, 64), fit_function(f, 1.5, 32)) <= 1e-12


def test_doubling_residual_checks_geometry():
    f = bump_d(2).value
    with pytest.raises(ConfigurationError):
        doubling_residual(fit_function(f, PI, 64), fit_function(f, 3.0, 32))
    with pytest.raises(ConfigurationError):
        doubling_residual(fit_function(f, PI, 64, Parity.EVEN),
                          fit_function(lambda x: np.sin(x), PI, 32, Parity.ODD))
    with pytest.raises(ConfigurationError):
        doubling_residual(fit_function(f, PI, 128), fit_function(f, PI, 32))


def test_decay_profile_bounded_for_smooth_input():
    f = bump_d(2).value
    peaks = [coefficient_decay_profile(fit_function(f, PI, n), 2)[:, 1].max() for n in (64, 128, 256)]
    assert peaks[1] <= 2 * peaks[0] and peaks[2] <= 2 * peaks[1]


def test_decay_profile_single_mode():
    prof = coefficient_decay_profile(fit_function(lambda x: np.cos(3 * x), PI, 32), 2)
    assert np.count_nonzero(prof[:, 1] > 1e-9) == 1


def test_decay_profile_grows_for_kink():
    f = bump_d(1).value
    peaks = [coefficient_decay_profile(fit_function(f, PI, n), 2)[:, 1].max() for n in (64, 128, 256)]
    assert peaks[0] < peaks[1] < peaks[2]


def test_eps_m_decay_rate():
    f = bump_d(2).value
    eps = [abs(fit_function(f, PI, n).eps_m) for n in (32, 64, 128, 256, 512)]
    assert all(a / b >= 4 for a, b in zip(eps, eps[1:]))


def test_record_roundtrip():
    rng = np.random.default_rng(2)
    p = TrigPoly(Parity.ODD, rng.normal(size=8), 1 / 3, 0.1, 0.0)
    rec = p.to_record()
    assert rec[:2] == ["odd", repr(1 / 3)]
    q = TrigPoly.from_record(rec)
    np.testing.assert_array_equal(q.coefficients, p.coefficients)
    assert (q.half_period, q.offset, q.parity) == (p.half_period, p.offset, p.parity)
    with pytest.raises(ValueError):
        TrigPoly.from_record(rec[:-1])


def test_coefficients_are_read_only():
    p = TrigPoly(Parity.EVEN, [1.0, 2.0], 1.0)
    with pytest.raises(ValueError):
        p.coefficients[0] = 3.0
