"""Least-squares leakage model tests."""

import math

import numpy as np
import pytest

from finikey import bounds
from finikey.fit import (
    FitPoint,
    FitResult,
    RankDeficientError,
    features,
    filter_floor,
    fit_leak,
    predict_leak,
)

# Frozen via 40-digit evaluation of the feature formulas.
LEAK_113_382 = 1499.1370419995792


def make_grid_points(xi1, xi2, noise_sigma_frac=0.0, rng=None):
    points = []
    for n in (1000, 3000, 10000, 30000):
        for q in (0.01, 0.03, 0.05):
            for eps in (1e-1, 1e-2, 1e-3):
                p = FitPoint(n=n, q=q, eps=eps, leak=1.0)
                a, b = features(p)
                leak = xi1 * a + xi2 * b
                if noise_sigma_frac:
                    leak += rng.normal(0.0, noise_sigma_frac * a)
                points.append(FitPoint(n=n, q=q, eps=eps, leak=leak))
    return points


class TestFeatures:
    def test_eps_half_zeroes_second_feature(self):
        _, b = features(FitPoint(n=100, q=0.1, eps=0.5, leak=1.0))
        assert b == 0.0

    def test_q_half(self):
        a, b = features(FitPoint(n=100, q=0.5, eps=0.01, leak=1.0))
        assert a == pytest.approx(100.0, abs=1e-12)
        assert b == 0.0

    def test_values_match_bound_oracles(self):
        a, b = features(FitPoint(n=10**4, q=0.025, eps=1e-2, leak=1.0))
        assert a == pytest.approx(10**4 * bounds.binary_entropy(0.025), rel=1e-14)
        expected_b = math.sqrt(10**4 * bounds.entropy_variance(0.025)) * bounds.std_normal_quantile(0.99)
        assert b == pytest.approx(expected_b, rel=1e-12)


class TestFitLeak:
    def test_exact_recovery(self):
        res = fit_leak(make_grid_points(1.1, 1.5))
        assert res.xi1 == pytest.approx(1.1, abs=1e-9)
        assert res.xi2 == pytest.approx(1.5, abs=1e-9)
        assert res.rss <= 1e-12

    def test_two_points_interpolate(self):
        pts = [
            FitPoint(n=1000, q=0.02, eps=1e-1, leak=200.0),
            FitPoint(n=10000, q=0.02, eps=1e-3, leak=1800.0),
        ]
        res = fit_leak(pts)
        assert res.rss <= 1e-10
        assert res.max_abs_residual <= 1e-5
        for p in pts:
            assert predict_leak(res, p.n, p.q, p.eps) == pytest.approx(p.leak, abs=1e-6)

    def test_rank_deficiency(self):
        pts = [FitPoint(n=n, q=0.05, eps=0.5, leak=n * 0.3) for n in (100, 200, 400)]
        with pytest.raises(RankDeficientError):
            fit_leak(pts)

    def test_needs_two_points(self):
        with pytest.raises(ValueError):
            fit_leak([FitPoint(n=100, q=0.1, eps=0.01, leak=50.0)])

    def test_noisy_recovery_within_three_se(self):
        rng = np.random.default_rng(20)
        hits = 0
        reps = 30
        for _ in range(reps):
            pts = make_grid_points(1.1, 1.5, noise_sigma_frac=0.01, rng=rng)
            res = fit_leak(pts)
            design = np.array([features(p) for p in pts])
            sigma = np.diag((0.01 * design[:, 0]) ** 2)
            gram_inv = np.linalg.inv(design.T @ design)
            cov = gram_inv @ design.T @ sigma @ design @ gram_inv
            se1, se2 = np.sqrt(np.diag(cov))
            if abs(res.xi1 - 1.1) <= 3 * se1 and abs(res.xi2 - 1.5) <= 3 * se2:
                hits += 1
        assert hits >= reps - 1

    def test_scale_equivariance(self):
        pts = make_grid_points(1.2, 1.7)
        scaled = [FitPoint(n=p.n, q=p.q, eps=p.eps, leak=3.5 * p.leak) for p in pts]
        a = fit_leak(pts)
        b = fit_leak(scaled)
        assert b.xi1 == pytest.approx(3.5 * a.xi1, rel=1e-12)
        assert b.xi2 == pytest.approx(3.5 * a.xi2, rel=1e-12)

    def test_residual_orthogonality(self):
        rng = np.random.default_rng(21)
        pts = make_grid_points(1.15, 1.4, noise_sigma_frac=0.02, rng=rng)
        res = fit_leak(pts)
        design = np.array([features(p) for p in pts])
        leaks = np.array([p.leak for p in pts])
        resid = leaks - design @ np.array([res.xi1, res.xi2])
        # normalized stationarity of the normal equations
        for col in design.T:
            assert abs(resid @ col) / (np.linalg.norm(col) * max(np.linalg.norm(resid), 1e-30)) <= 1e-9

    def test_nests_the_expansion(self):
        # leak generated as exactly leading + gaussian term -> (1, 1)
        pts = []
        for n in (10**3, 10**4, 10**5):
            for q in (0.02, 0.05):
                for eps in (1e-2, 1e-1):
                    rep = bounds.converse_expansion(bounds.BoundQuery(n=n, eps=eps, q=q))
                    pts.append(FitPoint(n=n, q=q, eps=eps, leak=rep.leading + rep.gaussian))
        res = fit_leak(pts)
        assert res.xi1 == pytest.approx(1.0, abs=1e-9)
        assert res.xi2 == pytest.approx(1.0, abs=1e-9)


class TestPredictLeak:
    def test_asymptotic_limit(self):
        res = FitResult(xi1=1.0, xi2=0.0, rss=0.0, max_abs_residual=0.0)
        assert predict_leak(res, 5000, 0.03, 0.01) == pytest.approx(
            5000 * bounds.binary_entropy(0.03), rel=1e-12
        )

    def test_unit_coefficients_match_expansion_terms(self):
        res = FitResult(xi1=1.0, xi2=1.0, rss=0.0, max_abs_residual=0.0)
        rep = bounds.converse_expansion(bounds.BoundQuery(n=2000, eps=0.05, q=0.04))
        assert predict_leak(res, 2000, 0.04, 0.05) == pytest.approx(rep.leading + rep.gaussian, rel=1e-12)

    def test_table_style_value(self):
        res = FitResult(xi1=1.13, xi2=3.82, rss=0.0, max_abs_residual=0.0)
        assert predict_leak(res, 10**4, 0.01, 1e-2) == pytest.approx(LEAK_113_382, rel=1e-12)


class TestFilterFloor:
    def test_drops_floor_points(self):
        pts = [
            FitPoint(n=100, q=0.1, eps=1e-3, leak=60.0),
            FitPoint(n=100, q=0.1, eps=1e-6, leak=60.0),
        ]
        kept = filter_floor(pts)
        assert len(kept) == 1 and kept[0].eps == 1e-3
        assert len(filter_floor(pts, threshold=1e-7)) == 2


class TestValidation:
    def test_fit_point_rejects_bad_values(self):
        with pytest.raises(ValueError):
            FitPoint(n=0, q=0.1, eps=0.1, leak=10.0)
        with pytest.raises(ValueError):
            FitPoint(n=10, q=0.1, eps=1.5, leak=10.0)
        with pytest.raises(ValueError):
            FitPoint(n=10, q=0.1, eps=0.1, leak=-1.0)
