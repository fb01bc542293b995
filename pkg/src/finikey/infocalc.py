"""Exact information measures on small explicit distributions.

Everything here operates on fully enumerated probability tables, so these
functions double as brute-force references for the closed-form expressions
in :mod:`finikey.bounds`.  All logarithms are base 2 and all entropic
quantities are in bits.

Conventions for zero probabilities: cells with ``p = q = 0`` are dropped
from likelihood-ratio spectra, cells with ``p > 0, q = 0`` carry a ``+inf``
log-ratio, and ``0 * log(0/q)`` contributes nothing to entropy sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

__all__ = [
    "FiniteJointDistribution",
    "SpectrumPoint",
    "UnboundedDivergenceError",
    "cond_entropy",
    "cond_entropy_variance",
    "cond_third_moment",
    "min_entropy",
    "spectrum_points",
    "divergence_spectrum",
    "hypothesis_testing_divergence",
    "one_shot_converse",
]

_SUM_TOL = 1e-12
# Optimal-test divergence enumerates every outcome; reject anything larger.
_MAX_OUTCOMES = 1 << 20


class UnboundedDivergenceError(ValueError):
    """The requested divergence is infinite (supports too disjoint)."""


class FiniteJointDistribution:
    """Explicit joint distribution of a pair (X, Y) on finite alphabets.

    The table ``p`` is indexed ``p[x, y]`` (row-major).  Entries must be
    nonnegative and sum to one within ``1e-12``; the table is frozen after
    construction so instances are safe to share between threads.
    """

    __slots__ = ("p",)

    def __init__(self, p):
        arr = np.array(p, dtype=float)
        if arr.ndim == 1:
            raise ValueError("joint table must be 2-D; use from_flat for flat input")
        if arr.ndim != 2 or arr.size == 0:
            raise ValueError("joint table must be a nonempty 2-D array")
        if np.any(arr < 0):
            raise ValueError("probabilities must be nonnegative")
        total = float(arr.sum())
        if abs(total - 1.0) > _SUM_TOL:
            raise ValueError(f"probabilities sum to {total!r}, expected 1")
        arr.flags.writeable = False
        self.p = arr

    @classmethod
    def from_flat(cls, values, n_x, n_y):
        """Build from a dense row-major probability list."""
        arr = np.asarray(values, dtype=float)
        if arr.size != n_x * n_y:
            raise ValueError(f"expected {n_x * n_y} entries, got {arr.size}")
        return cls(arr.reshape(n_x, n_y))

    @classmethod
    def bsc_pair(cls, q):
        """Uniform bit X observed through a BSC(q): P(0,0)=P(1,1)=(1-q)/2,
        P(0,1)=P(1,0)=q/2."""
        if not 0.0 <= q <= 1.0:
            raise ValueError("crossover probability must be in [0, 1]")
        return cls([[(1.0 - q) / 2.0, q / 2.0], [q / 2.0, (1.0 - q) / 2.0]])

    @classmethod
    def uniform_x(cls, n_x, p_y):
        """Product of a uniform X-marginal with the given Y-marginal."""
        p_y = np.asarray(p_y, dtype=float)
        return cls(np.full((n_x, len(p_y)), 1.0 / n_x) * p_y[None, :])

    @property
    def n_x(self):
        return self.p.shape[0]

    @property
    def n_y(self):
        return self.p.shape[1]

    def marginal_x(self):
        return self.p.sum(axis=1)

    def marginal_y(self):
        return self.p.sum(axis=0)

    def flat(self):
        """Row-major 1-D view of the table."""
        return self.p.ravel()

    def product_power(self, n):
        """n-fold i.i.d. product, with alphabets (X^n, Y^n) enumerated
        row-major.  Table size grows as (n_x * n_y)**n."""
        if n < 1:
            raise ValueError("n must be >= 1")
        out = self.p
        for _ in range(n - 1):
            out = np.kron(out, self.p)
        return FiniteJointDistribution(out)

    def __repr__(self):
        return f"FiniteJointDistribution({self.n_x}x{self.n_y})"


@dataclass(frozen=True)
class SpectrumPoint:
    """One atom of the log-likelihood-ratio distribution log2(P/Q)."""

    log_ratio: float
    mass_p: float
    mass_q: float


def _as_flat(dist):
    if isinstance(dist, FiniteJointDistribution):
        return dist.flat()
    return np.asarray(dist, dtype=float).ravel()


def _spectrum_arrays(p, q):
    """Sorted atoms of log2(p/q): returns (log_ratios, p_mass, q_mass).

    Outcomes with ``p = q = 0`` are dropped; ``p > 0, q = 0`` yields ``+inf``
    and ``p = 0, q > 0`` yields ``-inf`` (zero P-mass, kept so the Q-mass
    still sums to one).
    """
    p = _as_flat(p)
    q = _as_flat(q)
    if p.shape != q.shape:
        raise ValueError("p and q must be over the same outcome set")
    if np.any(p < 0) or np.any(q < 0):
        raise ValueError("probabilities must be nonnegative")
    for name, vec in (("p", p), ("q", q)):
        total = float(vec.sum())
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"{name} sums to {total!r}, expected 1")
    keep = (p > 0) | (q > 0)
    p, q = p[keep], q[keep]
    ratios = np.full(p.shape, -np.inf)
    both = (p > 0) & (q > 0)
    ratios[both] = np.log2(p[both]) - np.log2(q[both])
    ratios[(p > 0) & (q == 0)] = np.inf
    order = np.argsort(ratios, kind="stable")
    return ratios[order], p[order], q[order]


def spectrum_points(p, q):
    """The divergence spectrum as a list of atoms sorted by log-ratio."""
    ratios, pm, qm = _spectrum_arrays(p, q)
    return [SpectrumPoint(float(r), float(a), float(b)) for r, a, b in zip(ratios, pm, qm)]


def cond_entropy(d: FiniteJointDistribution) -> float:
    """Conditional entropy H(X|Y) = sum P(x,y) log2(P(y)/P(x,y)) in bits."""
    p = d.p
    p_y = d.marginal_y()
    mask = p > 0
    terms = p[mask] * (np.log2(np.broadcast_to(p_y, p.shape)[mask]) - np.log2(p[mask]))
    return float(terms.sum())


def _centred_log_ratios(d):
    """Per-cell deviations log2(P_y/P_xy) - H(X|Y) with their weights."""
    p = d.p
    p_y = d.marginal_y()
    mask = p > 0
    lr = np.log2(np.broadcast_to(p_y, p.shape)[mask]) - np.log2(p[mask])
    w = p[mask]
    h = float((w * lr).sum())
    return w, lr - h


def cond_entropy_variance(d: FiniteJointDistribution) -> float:
    """Conditional entropy variance V(X|Y) in bits^2."""
    w, dev = _centred_log_ratios(d)
    return float((w * dev**2).sum())


def cond_third_moment(d: FiniteJointDistribution) -> float:
    """Third absolute central moment T(X|Y) of the information spectrum,
    in bits^3.  Satisfies T >= V**1.5."""
    w, dev = _centred_log_ratios(d)
    return float((w * np.abs(dev) ** 3).sum())


def min_entropy(d: FiniteJointDistribution) -> float:
    """Min-entropy H_min(X|Y) = -log2 sum_y max_x P(x,y) in bits."""
    return float(-np.log2(d.p.max(axis=0).sum()))


def divergence_spectrum(p, q, eps: float) -> float:
    """Likelihood-ratio quantile D_s^eps(P||Q) in bits.

    Returns ``sup { R : Pr_P[log2(P/Q) <= R] <= eps }``.  For discrete
    distributions the supremum sits on an atom: scanning atoms in ascending
    log-ratio order with inclusive cumulative P-mass, it is the log-ratio of
    the first atom whose cumulative mass exceeds ``eps``.

    Raises
    ------
    UnboundedDivergenceError
        If that atom has infinite log-ratio, i.e. all but at most ``eps`` of
        the P-mass sits where Q vanishes.
    """
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must be in (0, 1)")
    ratios, pm, _ = _spectrum_arrays(p, q)
    cum = np.cumsum(pm)
    idx = int(np.searchsorted(cum, eps, side="right"))
    if idx >= len(ratios):
        idx = len(ratios) - 1  # total mass is 1 > eps; guard rounding only
    r = float(ratios[idx])
    if math.isinf(r) and r > 0:
        raise UnboundedDivergenceError(
            "divergence spectrum unbounded: the eps-quantile falls on outcomes with Q = 0"
        )
    return r


def hypothesis_testing_divergence(p, q, eps: float) -> float:
    """Optimal-test divergence D_h^eps(P||Q) in bits.

    Runs the Neyman-Pearson test: outcomes are accepted in order of
    decreasing likelihood ratio until exactly ``1 - eps`` of the P-mass is
    covered, randomizing on the boundary outcome.  With ``beta`` the Q-mass
    so accepted, the result is ``-log2(beta / (1 - eps))``.

    Intended as an enumeration oracle for small alphabets; inputs with more
    than 2**20 outcomes are rejected.

    Raises
    ------
    UnboundedDivergenceError
        If ``beta = 0`` (the accepted region has no Q-mass).
    """
    if not 0.0 < eps < 1.0:
        raise ValueError("eps must be in (0, 1)")
    ratios, pm, qm = _spectrum_arrays(p, q)
    if len(ratios) > _MAX_OUTCOMES:
        raise ValueError(f"alphabet too large for the optimal-test route ({len(ratios)} outcomes)")
    # Descending likelihood ratio; reversing the ascending stable order keeps
    # determinism for tied ratios (beta is tie-invariant anyway).
    pm_d = pm[::-1]
    qm_d = qm[::-1]
    target = 1.0 - eps
    cum = np.cumsum(pm_d)
    k = int(np.searchsorted(cum, target, side="left"))
    if k >= len(pm_d):
        k = len(pm_d) - 1  # cum[-1] = 1 >= target; guard rounding only
    p_before = float(cum[k - 1]) if k > 0 else 0.0
    frac = (target - p_before) / pm_d[k] if pm_d[k] > 0 else 0.0
    beta = float(qm_d[:k].sum()) + frac * float(qm_d[k])
    if beta <= 0.0:
        raise UnboundedDivergenceError("optimal test accepts zero Q-mass; divergence infinite")
    return float(-math.log2(beta / target))


def one_shot_converse(
    p_xy: FiniteJointDistribution,
    q_xy: FiniteJointDistribution,
    eps: float,
    delta: float,
) -> float:
    """One-shot lower bound on the syndrome length of any eps-correct
    one-way reconciliation code for ``p_xy``, in bits:

        H_min(X|Y)_Q - D_s^{eps+delta}(P_XY || Q_XY) + log2(delta)

    valid for any auxiliary ``q_xy`` on the same alphabets and any
    ``delta`` with ``0 < delta < 1 - eps``.
    """
    if not (eps > 0.0 and delta > 0.0 and eps + delta < 1.0):
        raise ValueError("need eps > 0, delta > 0 and eps + delta < 1")
    if p_xy.p.shape != q_xy.p.shape:
        raise ValueError("p_xy and q_xy must share alphabets")
    ds = divergence_spectrum(p_xy.flat(), q_xy.flat(), eps + delta)
    return min_entropy(q_xy) - ds + math.log2(delta)
