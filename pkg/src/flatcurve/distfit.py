"""Gamma PDF and maximum-likelihood / moment fits of distance samples."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np


class FitError(ValueError):
    pass


# Bernoulli-number coefficients B_2k / (2k) for the digamma asymptotic series
_DIGAMMA_COEF = (
    1.0 / 12,
    -1.0 / 120,
    1.0 / 252,
    -1.0 / 240,
    1.0 / 132,
    -691.0 / 32760,
    1.0 / 12,
)
# B_2k for the trigamma series
_TRIGAMMA_COEF = (
    1.0 / 6,
    -1.0 / 30,
    1.0 / 42,
    -1.0 / 30,
    5.0 / 66,
    -691.0 / 2730,
    7.0 / 6,
)
_ASYMPTOTIC_FROM = 10.0


def digamma(x: float) -> float:
    """psi(x) for x > 0: recurrence up to x >= 10, then the asymptotic series."""
    if x <= 0:
        raise ValueError(f"digamma defined here for x > 0 only, got {x}")
    acc = 0.0
    while x < _ASYMPTOTIC_FROM:
        acc -= 1.0 / x
        x += 1.0
    inv2 = 1.0 / (x * x)
    series = 0.0
    p = inv2
    for c in _DIGAMMA_COEF:
        series += c * p
        p *= inv2
    return acc + math.log(x) - 0.5 / x - series


def trigamma(x: float) -> float:
    if x <= 0:
        raise ValueError(f"trigamma defined here for x > 0 only, got {x}")
    acc = 0.0
    while x < _ASYMPTOTIC_FROM:
        acc += 1.0 / (x * x)
        x += 1.0
    inv = 1.0 / x
    inv2 = inv * inv
    series = 0.0
    p = inv2 * inv
    for c in _TRIGAMMA_COEF:
        series += c * p
        p *= inv2
    return acc + inv + 0.5 * inv2 + series


@dataclass(frozen=True)
class GammaParams:
    shape: float
    scale: float
    n_samples: float = 0.0
    log_likelihood: float = float("nan")
    iterations: int = 0
    method: str = "mle"

    @property
    def shape_below_one(self) -> bool:
        """Diagnostic: the fitted curve has no interior mode."""
        return self.shape <= 1.0

    @property
    def mode(self) -> Optional[float]:
        if self.shape < 1:
            return None
        return (self.shape - 1.0) * self.scale


def log_gamma_pdf(x: float, shape: float, scale: float) -> float:
    return (
        (shape - 1.0) * math.log(x)
        - x / scale
        - math.lgamma(shape)
        - shape * math.log(scale)
    )


def gamma_pdf(x: float, p: GammaParams) -> float:
    if x <= 0:
        raise ValueError(f"gamma pdf evaluated at non-positive x={x}")
    return math.exp(log_gamma_pdf(x, p.shape, p.scale))


def curve_points(p: GammaParams, grid: Sequence[float]) -> list[tuple[float, float]]:
    xs = [float(x) for x in grid]
    if not xs:
        raise ValueError("empty grid")
    if xs[0] <= 0 or any(b <= a for a, b in zip(xs, xs[1:])):
        raise ValueError("grid must be strictly positive and strictly ascending")
    return [(x, gamma_pdf(x, p)) for x in xs]


def _weighted_stats(samples, weights):
    x = np.asarray(samples, dtype=np.float64)
    if x.ndim != 1 or len(x) == 0:
        raise FitError("need a non-empty 1-d sample")
    w = np.ones_like(x) if weights is None else np.asarray(weights, dtype=np.float64)
    if w.shape != x.shape:
        raise FitError("weights must match samples in length")
    if (w < 0).any():
        raise FitError("weights must be non-negative")
    keep = w > 0
    x, w = x[keep], w[keep]
    if (x <= 0).any():
        raise FitError("gamma fit requires strictly positive samples")
    total = w.sum()
    if total < 2:
        raise FitError("gamma fit needs at least two samples")
    mean = float((w * x).sum() / total)
    var = float((w * (x - mean) ** 2).sum() / total)
    mean_log = float((w * np.log(x)).sum() / total)
    if var <= 0 or np.all(x == x[0]):
        raise FitError("gamma fit undefined for zero-variance samples")
    return x, w, total, mean, var, mean_log


def _loglik(x, w, shape, scale) -> float:
    return float(
        (w * ((shape - 1.0) * np.log(x) - x / scale)).sum()
        - w.sum() * (math.lgamma(shape) + shape * math.log(scale))
    )


def fit_gamma(
    samples,
    weights=None,
    method: str = "mle",
    tol: float = 1e-10,
    max_iter: int = 200,
) -> GammaParams:
    """Fit shape and scale to positive samples (optionally weighted by counts).

    ``mle`` solves ``ln a - psi(a) = ln(mean) - mean(ln x)`` by Newton steps
    kept inside a shrinking bracket, starting from the moment estimate;
    ``mom`` returns the moment estimate itself.
    """
    x, w, total, mean, var, mean_log = _weighted_stats(samples, weights)
    a0 = mean * mean / var
    if method == "mom":
        b0 = var / mean
        return GammaParams(a0, b0, float(total), _loglik(x, w, a0, b0), 0, "mom")
    if method != "mle":
        raise ValueError(f"unknown fit method {method!r}")

    s = math.log(mean) - mean_log
    if s <= 0:
        raise FitError("degenerate sample: log-mean gap is not positive")

    def f(a):
        return math.log(a) - digamma(a) - s

    # f decreases from +inf to 0 over (0, inf); bracket the root
    lo, hi = a0, a0
    while f(lo) < 0:
        lo /= 2.0
    while f(hi) > 0:
        hi *= 2.0
    a = min(max(a0, lo), hi)
    for it in range(1, max_iter + 1):
        fa = f(a)
        if fa > 0:
            lo = a
        else:
            hi = a
        step = fa / (1.0 / a - trigamma(a))
        nxt = a - step
        if not lo < nxt < hi:
            nxt = 0.5 * (lo + hi)
        if abs(nxt - a) <= tol * a:
            a = nxt
            break
        a = nxt
    else:
        raise FitError(f"gamma shape solve did not converge within {max_iter} iterations")
    b = mean / a
    return GammaParams(a, b, float(total), _loglik(x, w, a, b), it, "mle")
