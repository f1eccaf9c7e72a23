import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import integrate, special

from flatcurve.distfit import (
    FitError,
    GammaParams,
    curve_points,
    digamma,
    fit_gamma,
    gamma_pdf,
    trigamma,
)


def test_pdf_special_cases():
    assert gamma_pdf(1.0, GammaParams(1.0, 2.0)) == pytest.approx(0.5 * math.exp(-0.5), abs=1e-12)
    assert gamma_pdf(1.0, GammaParams(2.0, 1.0)) == pytest.approx(math.exp(-1), abs=1e-12)
    with pytest.raises(ValueError):
        gamma_pdf(0.0, GammaParams(2.0, 1.0))


@pytest.mark.parametrize("a,b", [(2, 1), (5, 0.5), (9, 0.3)])
def test_pdf_integrates_to_one(a, b):
    p = GammaParams(a, b)
    total, _ = integrate.quad(lambda x: gamma_pdf(x, p) if x > 0 else 0.0, 0, np.inf, epsabs=1e-12)
    assert abs(total - 1) <= 1e-6


def test_digamma_against_scipy():
    xs = np.concatenate([np.logspace(-3, 6, 400), [1.0, 0.5, 2.5, 9.99, 10.0]])
    for x in xs:
        ref = special.digamma(x)
        assert abs(digamma(x) - ref) <= 1e-12 * max(1.0, abs(ref))
        ref1 = special.polygamma(1, x)
        assert abs(trigamma(x) - ref1) <= 1e-12 * max(1.0, abs(ref1))


def test_fit_recovers_synthetic_params():
    samples = np.random.default_rng(12345).gamma(3.0, 2.0, size=100_000)
    fit = fit_gamma(samples)
    assert 2.94 <= fit.shape <= 3.06
    assert 1.94 <= fit.scale <= 2.06
    assert fit.n_samples == 100_000 and not fit.shape_below_one


def test_fit_errors():
    with pytest.raises(FitError):
        fit_gamma([2.0, 2.0, 2.0])
    with pytest.raises(FitError):
        fit_gamma([1.0, -1.0, 3.0])
    with pytest.raises(FitError):
        fit_gamma([1.0])
    with pytest.raises(ValueError):
        fit_gamma([1.0, 2.0], method="median")


def test_fit_weights_equal_expansion():
    ds = np.array([1.0, 2.0, 3.0, 4.0, 6.0])
    ws = np.array([3, 10, 7, 2, 1])
    a = fit_gamma(ds, ws)
    b = fit_gamma(np.repeat(ds, ws))
    assert a.shape == pytest.approx(b.shape, rel=1e-12)
    assert a.scale == pytest.approx(b.scale, rel=1e-12)


def test_mom_option():
    x = np.random.default_rng(1).gamma(4.0, 0.5, size=5000)
    mom = fit_gamma(x, method="mom")
    assert mom.shape == pytest.approx(x.mean() ** 2 / x.var())
    assert mom.scale == pytest.approx(x.var() / x.mean())


positive_samples = st.lists(
    st.floats(0.01, 100, allow_nan=False), min_size=2, max_size=60
).filter(lambda xs: max(xs) / min(xs) > 1.01)


@settings(max_examples=100, deadline=None)
@given(positive_samples, st.floats(0.01, 100))
def test_scale_equivariance(xs, c):
    base = fit_gamma(xs)
    scaled = fit_gamma([c * x for x in xs])
    assert abs(scaled.shape - base.shape) <= 1e-6 * max(1.0, base.shape)
    assert abs(scaled.scale - c * base.scale) <= 1e-6 * c * base.scale


@settings(max_examples=100, deadline=None)
@given(positive_samples)
def test_mle_beats_initializer(xs):
    mle = fit_gamma(xs)
    mom = fit_gamma(xs, method="mom")
    assert mle.log_likelihood >= mom.log_likelihood - 1e-9 * abs(mom.log_likelihood)


def test_curve_points():
    p = GammaParams(5.0, 0.5)
    assert curve_points(p, [1.3]) == [(1.3, gamma_pdf(1.3, p))]
    grid = np.linspace(0.01, 8, 4000)
    pts = curve_points(p, grid)
    assert all(b[0] > a[0] for a, b in zip(pts, pts[1:]))
    x_best, y_best = max(pts, key=lambda t: t[1])
    mode = (p.shape - 1) * p.scale
    assert abs(x_best - mode) <= grid[1] - grid[0]
    assert y_best == pytest.approx(gamma_pdf(mode, p), rel=1e-5)
    with pytest.raises(ValueError):
        curve_points(p, [])
    with pytest.raises(ValueError):
        curve_points(p, [1.0, 0.5])
