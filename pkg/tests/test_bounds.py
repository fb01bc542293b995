"""Closed-form bound tests against independent numeric oracles."""

import math

import numpy as np
import pytest

from finikey import bounds, infocalc
from finikey.bounds import BoundQuery

# Frozen from a 40-digit evaluation of the defining formulas.
H_0025 = 0.16866093149667022
V_0025 = 0.6809272424943782
PHI_INV_099 = 2.326347874040841
XI_1E4 = 1.1138178869168185


def erf_series(x):
    """Taylor series for erf, independent of scipy (|x| <= ~6 suffices)."""
    total = 0.0
    term = x
    k = 0
    while abs(term) > 1e-18 * max(abs(total), 1.0) and k < 300:
        total += term / (2 * k + 1)
        k += 1
        term *= -x * x / k
    return 2.0 / math.sqrt(math.pi) * total


def normal_cdf_oracle(x):
    return 0.5 * (1.0 + erf_series(x / math.sqrt(2.0)))


def normal_quantile_oracle(p):
    lo, hi = -10.0, 10.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if normal_cdf_oracle(mid) < p:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def binomial_cdf_bruteforce(k, n, p):
    """Term-by-term pmf summation at 60-digit precision (p taken at its
    exact float value), immune to underflow in the tails."""
    import decimal

    ctx = decimal.Context(prec=60, Emin=-10**6, Emax=10**6)
    pd = ctx.create_decimal(p)
    one = ctx.create_decimal(1)
    term = ctx.power(one - pd, n)  # j = 0
    total = term
    for j in range(k):
        term = term * (n - j) * pd / ((j + 1) * (one - pd))
        total = ctx.add(total, term)
    return float(total)


class TestScalarFunctions:
    def test_binary_entropy_endpoints(self):
        assert bounds.binary_entropy(0.5) == 1.0
        assert bounds.binary_entropy(0.0) == 0.0
        assert bounds.binary_entropy(1.0) == 0.0

    def test_binary_entropy_value(self):
        assert bounds.binary_entropy(0.025) == pytest.approx(H_0025, abs=1e-15)

    def test_binary_entropy_symmetric(self):
        rng = np.random.default_rng(0)
        for q in rng.uniform(0.01, 0.99, 25):
            assert bounds.binary_entropy(q) == pytest.approx(bounds.binary_entropy(1 - q), abs=1e-13)

    def test_binary_entropy_domain(self):
        with pytest.raises(ValueError):
            bounds.binary_entropy(-0.1)
        with pytest.raises(ValueError):
            bounds.binary_entropy(1.1)

    def test_entropy_variance(self):
        assert bounds.entropy_variance(0.5) == 0.0
        assert bounds.entropy_variance(0.025) == pytest.approx(V_0025, abs=1e-15)
        rng = np.random.default_rng(1)
        for q in rng.uniform(0.01, 0.99, 25):
            assert bounds.entropy_variance(q) == pytest.approx(bounds.entropy_variance(1 - q), abs=1e-12)
        with pytest.raises(ValueError):
            bounds.entropy_variance(0.0)

    def test_normal_cdf_quantile(self):
        assert bounds.std_normal_quantile(0.5) == 0.0
        assert bounds.std_normal_cdf(0.0) == 0.5
        assert bounds.std_normal_quantile(0.99) == pytest.approx(2.3263, abs=1e-4)
        assert bounds.std_normal_quantile(0.99) == pytest.approx(normal_quantile_oracle(0.99), abs=1e-10)
        for p in (1e-6, 1e-3, 0.2, 0.5, 0.9, 1 - 1e-6):
            assert abs(bounds.std_normal_cdf(bounds.std_normal_quantile(p)) - p) <= 1e-12
        for x in (-4.0, -1.3, 0.7, 3.2):
            assert bounds.std_normal_cdf(x) == pytest.approx(normal_cdf_oracle(x), abs=1e-14)
        with pytest.raises(ValueError):
            bounds.std_normal_quantile(0.0)
        with pytest.raises(ValueError):
            bounds.std_normal_quantile(1.0)


class TestEfficiency:
    def test_headline_value(self):
        xi = bounds.efficiency(BoundQuery(n=10**4, eps=1e-2, q=0.025))
        assert xi > 1.1
        assert xi == pytest.approx(XI_1E4, abs=1e-12)

    def test_eps_half_is_one(self):
        for n in (1, 100, 10**6):
            for q in (0.01, 0.2, 0.49):
                assert bounds.efficiency(BoundQuery(n=n, eps=0.5, q=q)) == 1.0

    def test_matches_expansion_terms(self):
        rng = np.random.default_rng(2)
        for _ in range(30):
            query = BoundQuery(
                n=int(rng.integers(10, 10**6)),
                eps=float(rng.uniform(0.001, 0.999)),
                q=float(rng.uniform(0.01, 0.49)),
            )
            rep = bounds.converse_expansion(query)
            lhs = bounds.efficiency(query) * query.n * bounds.binary_entropy(query.q)
            assert lhs == pytest.approx(rep.leading + rep.gaussian, abs=1e-9)


class TestExpansions:
    def test_converse_terms(self):
        query = BoundQuery(n=10**6, eps=1e-2, q=0.05)
        rep = bounds.converse_expansion(query)
        h = bounds.binary_entropy(0.05)
        v = bounds.entropy_variance(0.05)
        expected = 10**6 * h + 1000.0 * math.sqrt(v) * normal_quantile_oracle(0.99) - 0.5 * math.log2(10**6)
        assert rep.total == pytest.approx(expected, abs=1e-6)
        assert rep.constant == 0.0 and rep.constant_omitted
        assert rep.log_term == -0.5 * math.log2(query.n)
        assert rep.total == pytest.approx(rep.leading + rep.gaussian + rep.log_term + rep.constant, abs=1e-9)

    def test_explicit_constant(self):
        query = BoundQuery(n=10**6, eps=1e-2, q=0.05)
        rep = bounds.converse_expansion(query, include_constant=True)
        assert not rep.constant_omitted
        d = infocalc.FiniteJointDistribution.bsc_pair(0.05)
        v = infocalc.cond_entropy_variance(d)
        t = infocalc.cond_third_moment(d)
        x = bounds.std_normal_quantile(1e-2)
        gamma = math.sqrt(2 * math.pi) * math.exp(x * x / 2)
        assert rep.constant == pytest.approx(-gamma * (0.5 * t / v + math.sqrt(v)), rel=1e-12)
        assert rep.total == pytest.approx(rep.leading + rep.gaussian + rep.log_term + rep.constant, abs=1e-9)

    def test_constant_blowup_at_small_eps(self):
        # 1/phi(PhiInv(1e-4)) is about 2.5e3
        x = bounds.std_normal_quantile(1e-4)
        gamma = math.sqrt(2 * math.pi) * math.exp(x * x / 2)
        assert gamma == pytest.approx(2526.22, rel=1e-4)
        assert 2.4e3 < gamma < 2.6e3

    def test_constant_precondition(self):
        with pytest.raises(ValueError):
            bounds.converse_expansion(BoundQuery(n=2, eps=1e-3, q=0.025), include_constant=True)

    def test_achievability_gap_is_log_n(self):
        for n in (1, 10, 10**4):
            query = BoundQuery(n=n, eps=0.1, q=0.05)
            conv = bounds.converse_expansion(query)
            ach = bounds.achievability_expansion(query)
            assert ach.total - conv.total == pytest.approx(math.log2(n), abs=1e-9)
            assert ach.leading == conv.leading and ach.gaussian == conv.gaussian
            assert ach.log_term == 0.5 * math.log2(n)
            assert ach.constant_omitted


class TestDegenerateBounds:
    def test_known_values(self):
        assert bounds.degenerate_bounds(100, 0.5, 1.0) == pytest.approx((99.0, 101.0), abs=1e-12)
        conv, ach = bounds.degenerate_bounds(10, 0.01, 0.5)
        assert conv == pytest.approx(5 + math.log2(0.99), abs=1e-12)
        assert ach == pytest.approx(5 - math.log2(0.01), abs=1e-12)

    def test_ordering_below_half(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            eps = float(rng.uniform(0.001, 0.5))
            h = float(rng.uniform(0.0, 1.0))
            n = int(rng.integers(1, 1000))
            conv, ach = bounds.degenerate_bounds(n, eps, h)
            assert conv <= ach


class TestBinomial:
    def test_edges(self):
        assert bounds.binomial_cdf(5, 5, 0.3) == 1.0
        assert bounds.binomial_cdf(0, 2, 0.5) == pytest.approx(0.25, abs=1e-15)

    def test_matches_bruteforce(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            n = int(rng.integers(1, 1001))
            k = int(rng.integers(0, n + 1))
            p = float(rng.uniform(0.01, 0.99))
            ref = binomial_cdf_bruteforce(k, n, p)
            assert bounds.binomial_cdf(k, n, p) == pytest.approx(ref, rel=1e-10, abs=1e-300)

    def test_quantile_example(self):
        assert bounds.binomial_quantile(0.3, 2, 0.5) == 0

    def test_quantile_sentinel(self):
        # F(0; 4, 0.5) = 0.0625 > 0.01
        assert bounds.binomial_quantile(0.01, 4, 0.5) == -1

    def test_quantile_roundtrip(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            n = int(rng.integers(1, 400))
            p = float(rng.uniform(0.05, 0.95))
            eps = float(rng.uniform(0.001, 0.999))
            k = bounds.binomial_quantile(eps, n, p)
            if k >= 0:
                assert bounds.binomial_cdf(k, n, p) <= eps
            if k + 1 <= n:
                assert bounds.binomial_cdf(k + 1, n, p) > eps


class TestExactConverse:
    def test_close_to_expansion(self):
        query = BoundQuery(n=10**5, eps=1e-2, q=0.05)
        rep = bounds.converse_expansion(query)
        assert abs(bounds.exact_converse(query) - rep.total) <= 8.0

    def test_equals_with_delta_form(self):
        query = BoundQuery(n=1000, eps=0.05, q=0.1)
        delta = 0.05 / math.sqrt(1000)
        assert bounds.exact_converse(query) == bounds.exact_converse_with_delta(query, delta)

    def test_monotone_in_eps(self):
        for q in (0.025, 0.1, 0.3):
            values = [
                bounds.exact_converse(BoundQuery(n=2000, eps=eps, q=q))
                for eps in (0.001, 0.01, 0.05, 0.2, 0.4)
            ]
            assert all(a >= b - 1e-12 for a, b in zip(values, values[1:]))

    def test_precondition(self):
        with pytest.raises(ValueError):
            bounds.exact_converse(BoundQuery(n=4, eps=0.75, q=0.1))

    def test_growth_rate(self):
        for q in (0.025, 0.05, 0.1):
            for eps in (1e-2, 1e-1):
                for n in (10**4, 10**5):
                    query = BoundQuery(n=n, eps=eps, q=q)
                    slack = 2.0 * math.sqrt(bounds.entropy_variance(q) / n) * abs(
                        bounds.std_normal_quantile(1 - eps)
                    )
                    assert abs(bounds.exact_converse(query) / n - bounds.binary_entropy(q)) <= slack


class TestExactConverseOptimized:
    def test_dominates_fixed_delta(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            query = BoundQuery(
                n=int(rng.integers(4, 5000)),
                eps=float(rng.uniform(0.01, 0.4)),
                q=float(rng.uniform(0.02, 0.45)),
            )
            assert bounds.exact_converse_optimized(query) >= bounds.exact_converse(query) - 1e-9

    def test_against_bruteforce_search(self):
        query = BoundQuery(n=4, eps=0.1, q=0.1)
        ratio = math.log2(0.9 / 0.1)
        h4 = 4 * bounds.binary_entropy(0.1)
        cdf = np.array([binomial_cdf_bruteforce(k, 4, 0.9) for k in range(4)])
        delta = np.geomspace(1e-9, 0.9 * (1 - 1e-9), 2_000_000)
        kq = np.searchsorted(cdf, 0.1 + delta, side="right") - 1
        best = float(np.max(h4 + (4 * 0.9 - kq - 1) * ratio + np.log2(delta)))
        opt = bounds.exact_converse_optimized(query)
        assert opt >= best - 1e-9
        assert opt == pytest.approx(best, abs=1e-3)

    def test_strictly_above_leading_term(self):
        query = BoundQuery(n=10**4, eps=1e-2, q=0.025)
        val = bounds.exact_converse_optimized(query)
        assert math.isfinite(val)
        assert val > 10**4 * bounds.binary_entropy(0.025)


class TestQueryValidation:
    def test_rejects_bad_parameters(self):
        with pytest.raises(ValueError):
            BoundQuery(n=0, eps=0.1, q=0.1)
        with pytest.raises(ValueError):
            BoundQuery(n=10, eps=0.0, q=0.1)
        with pytest.raises(ValueError):
            BoundQuery(n=10, eps=0.1, q=0.5)
