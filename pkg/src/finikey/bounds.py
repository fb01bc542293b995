"""Finite-length bounds on reconciliation leakage for a BSC-correlated pair.

For a uniform bit string observed through a BSC(q), any one-way
reconciliation protocol with failure probability at most ``eps`` over blocks
of ``n`` symbols must disclose at least roughly

    n*h(q) + sqrt(n*v(q)) * PhiInv(1 - eps) - 0.5*log2(n) - O(1)

bits, and matching protocols exist up to the sign of the log term.  This
module evaluates that expansion term by term, the efficiency factor
``xi = leak / (n*h)`` it implies, and an exact converse built from binomial
quantiles that holds for every ``n`` with no unspecified constant.
All quantities are in bits (logs base 2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import special

from . import infocalc

__all__ = [
    "BoundQuery",
    "BoundReport",
    "binary_entropy",
    "entropy_variance",
    "std_normal_cdf",
    "std_normal_quantile",
    "efficiency",
    "converse_expansion",
    "achievability_expansion",
    "degenerate_bounds",
    "binomial_cdf",
    "binomial_quantile",
    "exact_converse",
    "exact_converse_with_delta",
    "exact_converse_optimized",
]

# Berry-Esseen constant for i.i.d. sums.
BERRY_ESSEEN_B0 = 0.5


@dataclass(frozen=True)
class BoundQuery:
    """A (block length, failure probability, crossover) triple."""

    n: int
    eps: float
    q: float

    def __post_init__(self):
        if self.n < 1 or int(self.n) != self.n:
            raise ValueError("n must be a positive integer")
        if not 0.0 < self.eps < 1.0:
            raise ValueError("eps must be in (0, 1)")
        if not 0.0 < self.q < 0.5:
            raise ValueError("q must be in (0, 0.5)")


@dataclass(frozen=True)
class BoundReport:
    """Term-by-term decomposition of an asymptotic leakage bound.

    ``total = leading + gaussian + log_term + constant``; all terms are
    signed contributions in bits.  ``constant_omitted`` marks reports where
    the O(1) term is not evaluated and reported as 0.
    """

    leading: float
    gaussian: float
    log_term: float
    constant: float
    total: float
    direction: str  # "converse" | "achievability"
    constant_omitted: bool


def binary_entropy(q: float) -> float:
    """h(q) = -q*log2(q) - (1-q)*log2(1-q), with h(0) = h(1) = 0."""
    if not 0.0 <= q <= 1.0:
        raise ValueError("q must be in [0, 1]")
    if q == 0.0 or q == 1.0:
        return 0.0
    return float(-q * math.log2(q) - (1.0 - q) * math.log2(1.0 - q))


def entropy_variance(q: float) -> float:
    """v(q) = q*(1-q)*log2(q/(1-q))**2; the second-order coefficient."""
    if not 0.0 < q < 1.0:
        raise ValueError("q must be in (0, 1)")
    return float(q * (1.0 - q) * math.log2(q / (1.0 - q)) ** 2)


def std_normal_cdf(x: float) -> float:
    """Standard normal CDF Phi(x)."""
    return float(special.ndtr(x))


def std_normal_quantile(p: float) -> float:
    """Inverse standard normal CDF; requires 0 < p < 1."""
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0, 1)")
    return float(special.ndtri(p))


def _std_normal_pdf(x: float) -> float:
    return math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi)


def _upper_quantile(eps: float) -> float:
    # PhiInv(1 - eps) computed as -PhiInv(eps) to keep precision for small eps.
    return -std_normal_quantile(eps)


def efficiency(query: BoundQuery) -> float:
    """Efficiency floor xi(n, eps; q) = 1 + sqrt(v/n)/h * PhiInv(1-eps).

    Any correct protocol leaks at least ``xi * n * h(q)`` bits up to the
    subleading log and constant terms; xi exceeds 1 exactly when eps < 1/2.
    """
    h = binary_entropy(query.q)
    v = entropy_variance(query.q)
    return 1.0 + math.sqrt(v) / h * _upper_quantile(query.eps) / math.sqrt(query.n)


def _expansion_terms(query: BoundQuery):
    h = binary_entropy(query.q)
    v = entropy_variance(query.q)
    leading = query.n * h
    gaussian = math.sqrt(query.n * v) * _upper_quantile(query.eps)
    half_log = 0.5 * math.log2(query.n)
    return leading, gaussian, half_log


def converse_expansion(query: BoundQuery, include_constant: bool = False) -> BoundReport:
    """Third-order converse: n*h + sqrt(n*v)*PhiInv(1-eps) - log2(n)/2 - O(1).

    With ``include_constant`` the O(1) term is evaluated explicitly as
    ``gamma * (B0*T/V + sqrt(V))`` where ``gamma = 1/phi(PhiInv(eps))`` and
    T, V are the third and second central moments of the per-symbol
    information spectrum; this requires ``n > (B+1)^2 (1-eps)^-2`` with
    ``B = B0*T/V^1.5`` and raises otherwise.
    """
    leading, gaussian, half_log = _expansion_terms(query)
    constant = 0.0
    omitted = True
    if include_constant:
        d = infocalc.FiniteJointDistribution.bsc_pair(query.q)
        v = infocalc.cond_entropy_variance(d)
        t = infocalc.cond_third_moment(d)
        b = BERRY_ESSEEN_B0 * t / v**1.5
        n_min = (b + 1.0) ** 2 / (1.0 - query.eps) ** 2
        if not query.n > n_min:
            raise ValueError(
                f"explicit constant requires n > {n_min:.3g} (got n = {query.n})"
            )
        gamma = 1.0 / _std_normal_pdf(std_normal_quantile(query.eps))
        constant = -gamma * (BERRY_ESSEEN_B0 * t / v + math.sqrt(v))
        omitted = False
    total = leading + gaussian - half_log + constant
    return BoundReport(leading, gaussian, -half_log, constant, total, "converse", omitted)


def achievability_expansion(query: BoundQuery) -> BoundReport:
    """Third-order achievability: n*h + sqrt(n*v)*PhiInv(1-eps) + log2(n)/2.

    The O(1) term has no explicit form here and is reported as omitted.
    """
    leading, gaussian, half_log = _expansion_terms(query)
    total = leading + gaussian + half_log
    return BoundReport(leading, gaussian, half_log, 0.0, total, "achievability", True)


def degenerate_bounds(n: int, eps: float, h: float) -> tuple[float, float]:
    """Zero-variance case: (n*h + log2(1-eps), n*h - log2(eps))."""
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must be in (0, 1)")
    return (n * h + math.log2(1.0 - eps), n * h - math.log2(eps))


def binomial_cdf(k: int, n: int, p: float) -> float:
    """F(k; n, p) = Pr[Bin(n, p) <= k] via the regularized incomplete beta."""
    if not 0 <= k <= n:
        raise ValueError("k must be in [0, n]")
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0, 1)")
    if k == n:
        return 1.0
    return float(special.betainc(n - k, k + 1, 1.0 - p))


def binomial_quantile(eps: float, n: int, p: float) -> int:
    """F^{-1}(eps; n, p) = max{k : F(k; n, p) <= eps}, or -1 if F(0) > eps."""
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must be in (0, 1)")
    if not 0.0 < p < 1.0:
        raise ValueError("p must be in (0, 1)")
    if binomial_cdf(0, n, p) > eps:
        return -1
    # F(n) = 1 > eps, so the answer lies in [0, n-1]; invariant below is
    # F(lo) <= eps < F(hi).
    lo, hi = 0, n
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if binomial_cdf(mid, n, p) <= eps:
            lo = mid
        else:
            hi = mid
    return lo


def exact_converse_with_delta(query: BoundQuery, delta: float) -> float:
    """Binomial-quantile converse at an explicit slack ``delta``:

        n*h(q) + (n*(1-q) - F^{-1}(eps+delta; n, 1-q) - 1) * log2((1-q)/q)
          + log2(delta)

    Lower-bounds the syndrome length of any eps-correct protocol for each
    ``0 < delta < 1 - eps``; the -1 sentinel from the quantile enters the
    arithmetic unchanged.
    """
    n, eps, q = query.n, query.eps, query.q
    if not 0.0 < delta < 1.0 - eps:
        raise ValueError("delta must be in (0, 1 - eps)")
    kq = binomial_quantile(eps + delta, n, 1.0 - q)
    ratio = math.log2((1.0 - q) / q)
    return n * binary_entropy(q) + (n * (1.0 - q) - kq - 1.0) * ratio + math.log2(delta)


def exact_converse(query: BoundQuery) -> float:
    """Exact converse with the canonical slack ``delta = eps/sqrt(n)``:

        n*h(q) + (n*(1-q) - F^{-1}(eps*(1+1/sqrt(n)); n, 1-q) - 1)
          * log2((1-q)/q) - log2(n)/2 - log2(1/eps)

    Requires ``eps * (1 + 1/sqrt(n)) < 1``.
    """
    delta = query.eps / math.sqrt(query.n)
    if query.eps + delta >= 1.0:
        raise ValueError("requires eps * (1 + 1/sqrt(n)) < 1")
    return exact_converse_with_delta(query, delta)


def exact_converse_optimized(query: BoundQuery, grid_points: int = 200) -> float:
    """Exact converse maximized over the slack delta.

    The objective is piecewise in delta through the binomial quantile plus a
    concave ``log2(delta)``, so within each quantile plateau it increases in
    delta.  Candidates are a log-spaced grid on ``(0, 1-eps)``, the point
    just below each plateau boundary, the upper endpoint, and the canonical
    ``eps/sqrt(n)``, which guarantees a result >= ``exact_converse``.
    """
    n, eps, q = query.n, query.eps, query.q
    hi = 1.0 - eps
    cands = [np.geomspace(hi * 1e-12, hi * (1.0 - 1e-12), grid_points)]
    if eps + eps / math.sqrt(n) < 1.0:
        cands.append(np.array([eps / math.sqrt(n)]))
    cands.append(np.array([np.nextafter(hi, 0.0)]))

    # Quantile plateau boundaries: delta = F(j; n, 1-q) - eps for the j whose
    # cumulative mass lies in (eps, 1).  Only a band of O(sqrt(n)) values of
    # j around the mean has F strictly between 0 and 1 at double precision.
    p_succ = 1.0 - q
    sigma = math.sqrt(n * q * (1.0 - q))
    j_lo = max(binomial_quantile(eps, n, p_succ), 0)
    j_hi = min(n - 1, int(math.ceil(n * p_succ + 15.0 * sigma)))
    j_arr = np.arange(j_lo, j_hi + 1)
    f_tbl = special.betainc(n - j_arr, j_arr + 1, q)
    deltas = f_tbl - eps
    ok = (deltas > 0.0) & (deltas < hi)
    cands.append(np.nextafter(deltas[ok], 0.0))

    delta = np.unique(np.concatenate(cands))
    delta = delta[(delta > 0.0) & (delta < hi)]
    # Vectorized quantile: F is monotone on the j band, so searchsorted on
    # the table gives max{j : F(j) <= eps+delta}; values below the band mean
    # the quantile sits left of j_lo, which only happens at the -1 sentinel.
    kq = j_lo + np.searchsorted(f_tbl, eps + delta, side="right") - 1.0
    ratio = math.log2((1.0 - q) / q)
    obj = n * binary_entropy(q) + (n * (1.0 - q) - kq - 1.0) * ratio + np.log2(delta)
    return float(obj.max())
