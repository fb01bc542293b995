"""Two-parameter least-squares model of measured reconciliation leakage.

Observed leaks are regressed (no intercept) on the two expansion features

    leak ~= xi1 * n*h(q) + xi2 * sqrt(n*v(q)) * PhiInv(1 - eps)

so xi1 measures distance from the asymptotic limit and xi2 the
second-order deficiency.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bounds import binary_entropy, entropy_variance, std_normal_quantile

__all__ = [
    "FitPoint",
    "FitResult",
    "RankDeficientError",
    "features",
    "fit_leak",
    "predict_leak",
    "filter_floor",
]

CONDITION_LIMIT = 1e12
DEFAULT_FLOOR_EPS = 1e-5


class RankDeficientError(ValueError):
    """The feature matrix does not span both model directions."""


@dataclass(frozen=True)
class FitPoint:
    """One observation: payload length, crossover, failure rate, leaked bits."""

    n: float
    q: float
    eps: float
    leak: float

    def __post_init__(self):
        if self.n <= 0 or self.q <= 0 or self.leak <= 0:
            raise ValueError("n, q and leak must be positive")
        if not 0.0 < self.eps < 1.0:
            raise ValueError("eps must be in (0, 1)")
        if self.q >= 1.0:
            raise ValueError("q must be below 1")


@dataclass(frozen=True)
class FitResult:
    xi1: float
    xi2: float
    rss: float
    max_abs_residual: float


def features(p: FitPoint) -> tuple[float, float]:
    """(n*h(q), sqrt(n*v(q)) * PhiInv(1 - eps)) for one point."""
    a = p.n * binary_entropy(p.q)
    b = float(np.sqrt(p.n * entropy_variance(p.q))) * -std_normal_quantile(p.eps)
    return a, b


def fit_leak(points) -> FitResult:
    """Ordinary least squares for (xi1, xi2), no intercept.

    Solved by the 2x2 normal equations; designs whose Gram matrix condition
    number exceeds 1e12 (for instance all points at eps = 0.5, where the
    second feature vanishes) are rejected.
    """
    points = list(points)
    if len(points) < 2:
        raise ValueError("need at least two points")
    design = np.array([features(p) for p in points])
    leaks = np.array([p.leak for p in points])
    gram = design.T @ design
    if np.linalg.cond(gram) > CONDITION_LIMIT:
        raise RankDeficientError("feature columns are (nearly) linearly dependent")
    coef = np.linalg.solve(gram, design.T @ leaks)
    resid = leaks - design @ coef
    return FitResult(
        xi1=float(coef[0]),
        xi2=float(coef[1]),
        rss=float(resid @ resid),
        max_abs_residual=float(np.abs(resid).max()),
    )


def predict_leak(r: FitResult, n: float, q: float, eps: float) -> float:
    """Model leak xi1*n*h(q) + xi2*sqrt(n*v(q))*PhiInv(1-eps) in bits."""
    a, b = features(FitPoint(n=n, q=q, eps=eps, leak=1.0))
    return r.xi1 * a + r.xi2 * b


def filter_floor(points, threshold: float = DEFAULT_FLOOR_EPS):
    """Drop error-floor observations (eps below the threshold); the model
    describes only the waterfall region."""
    return [p for p in points if p.eps >= threshold]
