"""LDPC syndrome coding: construction, rate adaptation, and decoding.

Codes are built with progressive edge growth (PEG) from edge-perspective
degree polynomials; the three built-in polynomials target coding rates 0.6,
0.7 and 0.8.  Rate is modulated on a fixed graph by shortening (pinning
variables to a known value) and puncturing (hiding variables from the
decoder while their share of the syndrome is discounted from the leak).
Decoding is flooding sum-product over the binary symmetric channel.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._kernels import (
    LLR_CLIP,
    PEG_OK,
    PEG_OVERFLOW,
    PEG_SATURATED,
    bp_single,
    peg_build,
)

__all__ = [
    "DegreeDistribution",
    "ParityCheckMatrix",
    "RateAdaptedCode",
    "InfeasibleCodeError",
    "LAMBDA_1",
    "LAMBDA_2",
    "LAMBDA_3",
    "BUILTIN_LAMBDAS",
    "DEFAULT_MAX_ITER",
    "node_degrees",
    "peg_construct",
    "syndrome",
    "adapt_rate",
    "bp_syndrome_decode",
    "to_alist",
    "from_alist",
    "write_alist",
    "read_alist",
]

DEFAULT_MAX_ITER = 200


class InfeasibleCodeError(ValueError):
    """The requested degree structure cannot be realized."""


@dataclass(frozen=True)
class DegreeDistribution:
    """Edge-perspective variable degree distribution.

    ``terms`` maps degree d to the fraction of edges attached to degree-d
    variable nodes (the coefficient of x**(d-1) in the usual generating
    polynomial).  Fractions must sum to one; degrees are distinct and >= 2.
    """

    terms: tuple[tuple[int, float], ...]

    def __post_init__(self):
        terms = tuple(sorted((int(d), float(f)) for d, f in self.terms))
        object.__setattr__(self, "terms", terms)
        degrees = [d for d, _ in terms]
        if len(set(degrees)) != len(degrees):
            raise ValueError("degrees must be distinct")
        if any(d < 2 for d in degrees):
            raise ValueError("degrees must be >= 2")
        if any(f <= 0 for _, f in terms):
            raise ValueError("edge fractions must be positive")
        total = sum(f for _, f in terms)
        if abs(total - 1.0) > 1e-9:
            raise ValueError(f"edge fractions sum to {total!r}, expected 1")

    @property
    def max_degree(self) -> int:
        return self.terms[-1][0]

    def node_fractions(self) -> dict[int, float]:
        """Node-perspective fractions: (f_d / d) / sum_i (f_i / i)."""
        inv = sum(f / d for d, f in self.terms)
        return {d: (f / d) / inv for d, f in self.terms}


# Built-in polynomials for design rates 0.6, 0.7, 0.8 (coefficient of x**k
# is the edge fraction on degree-(k+1) variables).
LAMBDA_1 = DegreeDistribution(((2, 0.1560), (3, 0.3482), (14, 0.1594), (15, 0.3364)))
LAMBDA_2 = DegreeDistribution(
    ((2, 0.1305), (3, 0.2892), (11, 0.1196), (13, 0.1837), (15, 0.2770))
)
LAMBDA_3 = DegreeDistribution(
    ((2, 0.1209), (3, 0.2738), (6, 0.1151), (11, 0.2611), (15, 0.2291))
)
BUILTIN_LAMBDAS = {"lambda1": LAMBDA_1, "lambda2": LAMBDA_2, "lambda3": LAMBDA_3}


def node_degrees(dist: DegreeDistribution, n_var: int, n_chk: int) -> np.ndarray:
    """Per-variable degree targets (ascending), by largest-remainder rounding
    of the node-perspective fractions.

    Every degree class must receive at least one node and no degree may
    exceed ``n_chk``, otherwise the structure is infeasible.  The implied
    edge total fixes the average check degree; checks end up concentrated on
    the two integers around E / n_chk because construction always prefers
    low-degree checks among equally distant candidates.
    """
    if n_var < 1 or n_chk < 1:
        raise InfeasibleCodeError("need at least one variable and one check")
    if dist.max_degree > n_chk:
        raise InfeasibleCodeError(
            f"max variable degree {dist.max_degree} exceeds n_chk = {n_chk}"
        )
    fracs = dist.node_fractions()
    degrees = sorted(fracs)
    targets = np.array([n_var * fracs[d] for d in degrees])
    counts = np.floor(targets).astype(int)
    leftover = n_var - int(counts.sum())
    # Hand the leftover nodes to the largest fractional parts; ties go to the
    # smaller degree for determinism.
    order = sorted(range(len(degrees)), key=lambda i: (-(targets[i] - counts[i]), degrees[i]))
    for i in order[:leftover]:
        counts[i] += 1
    if np.any(counts == 0):
        raise InfeasibleCodeError(f"n_var = {n_var} too small to realize all degree classes")
    return np.repeat(degrees, counts).astype(np.int64)


class ParityCheckMatrix:
    """Sparse bipartite parity-check graph.

    ``check_adj[c]`` is the sorted array of variable indices on check c.
    Instances are immutable after construction and safe to share.
    """

    __slots__ = ("n_var", "n_chk", "check_adj", "seed", "_csr")

    def __init__(self, n_var: int, n_chk: int, check_adj, seed: int = -1):
        self.n_var = int(n_var)
        self.n_chk = int(n_chk)
        adj = []
        var_deg = np.zeros(self.n_var, dtype=np.int64)
        for c, row in enumerate(check_adj):
            arr = np.asarray(row, dtype=np.int64)
            if arr.size != np.unique(arr).size:
                raise ValueError(f"duplicate edge within check {c}")
            if arr.size and (arr.min() < 0 or arr.max() >= self.n_var):
                raise ValueError(f"variable index out of range in check {c}")
            arr = np.sort(arr)
            arr.flags.writeable = False
            adj.append(arr)
            var_deg[arr] += 1
        if len(adj) != self.n_chk:
            raise ValueError("adjacency length does not match n_chk")
        if np.any(var_deg == 0):
            raise ValueError("every variable must have degree >= 1")
        self.check_adj = tuple(adj)
        self.seed = int(seed)
        self._csr = None

    @property
    def n_edges(self) -> int:
        return int(sum(len(a) for a in self.check_adj))

    def check_degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.check_adj], dtype=np.int64)

    def var_degrees(self) -> np.ndarray:
        deg = np.zeros(self.n_var, dtype=np.int64)
        for a in self.check_adj:
            deg[a] += 1
        return deg

    def var_adjacency(self) -> list[np.ndarray]:
        """Per-variable sorted check lists (derived)."""
        lists: list[list[int]] = [[] for _ in range(self.n_var)]
        for c, a in enumerate(self.check_adj):
            for v in a:
                lists[int(v)].append(c)
        return [np.array(l, dtype=np.int64) for l in lists]

    def csr(self):
        """(chk_ptr, edge_var) in check-major order for the kernels."""
        if self._csr is None:
            deg = self.check_degrees()
            chk_ptr = np.zeros(self.n_chk + 1, dtype=np.int64)
            np.cumsum(deg, out=chk_ptr[1:])
            edge_var = np.concatenate(self.check_adj) if self.n_edges else np.empty(0, np.int64)
            chk_ptr.flags.writeable = False
            edge_var.flags.writeable = False
            self._csr = (chk_ptr, edge_var)
        return self._csr

    def __eq__(self, other):
        if not isinstance(other, ParityCheckMatrix):
            return NotImplemented
        return (
            self.n_var == other.n_var
            and self.n_chk == other.n_chk
            and all(np.array_equal(a, b) for a, b in zip(self.check_adj, other.check_adj))
        )

    def __hash__(self):
        return hash((self.n_var, self.n_chk, self.n_edges))

    def __repr__(self):
        return f"ParityCheckMatrix(n_var={self.n_var}, n_chk={self.n_chk}, edges={self.n_edges})"


def peg_construct(n_var: int, rate: float, dist: DegreeDistribution, seed: int) -> ParityCheckMatrix:
    """Build a parity-check matrix by progressive edge growth.

    ``n_chk = round(n_var * (1 - rate))``.  Variables are processed in
    ascending target degree; the seed only shuffles the processing order
    within equal-degree classes, so the degree sequence is seed-independent
    and the whole construction is reproducible bit for bit.
    """
    if not 0.0 < rate < 1.0:
        raise ValueError("rate must be in (0, 1)")
    n_chk = round(n_var * (1.0 - rate))
    if n_chk < 1:
        raise InfeasibleCodeError("rate too high: no checks")
    degrees = node_degrees(dist, n_var, n_chk)

    rng = np.random.default_rng(seed)
    proc = np.empty(n_var, dtype=np.int64)
    pos = 0
    for d in np.unique(degrees):
        idx = np.nonzero(degrees == d)[0]
        proc[pos : pos + idx.size] = rng.permutation(idx)
        pos += idx.size

    n_edges = int(degrees.sum())
    chk_cap = int(math.ceil(n_edges / n_chk)) + 32
    var_adj, var_cnt, status = peg_build(proc, degrees, n_chk, chk_cap)
    if status == PEG_SATURATED:
        raise InfeasibleCodeError("a variable would need edges to every check")
    if status == PEG_OVERFLOW:
        raise InfeasibleCodeError("check degree capacity exceeded; graph too uneven")
    assert status == PEG_OK

    check_lists: list[list[int]] = [[] for _ in range(n_chk)]
    for v in range(n_var):
        for e in range(var_cnt[v]):
            check_lists[int(var_adj[v, e])].append(v)
    return ParityCheckMatrix(n_var, n_chk, check_lists, seed=seed)


def syndrome(h: ParityCheckMatrix, x) -> np.ndarray:
    """Syndrome s with s[c] = XOR of x over check c's variables."""
    x = np.asarray(x, dtype=np.uint8)
    if x.shape != (h.n_var,):
        raise ValueError(f"x must have length {h.n_var}")
    chk_ptr, edge_var = h.csr()
    sums = np.add.reduceat(x[edge_var].astype(np.int64), chk_ptr[:-1])
    return (sums & 1).astype(np.uint8)


class RateAdaptedCode:
    """A base matrix plus disjoint shortened and punctured variable sets.

    Shortened variables are pinned to an agreed value (0 here) and drop out
    of the payload without leaking; punctured variables stay part of the
    string to reconcile but give the decoder no observation, and each one
    discounts one syndrome bit from the leak: ``leak_bits = n_chk -
    n_punctured``.
    """

    __slots__ = ("base", "shortened", "punctured", "payload")

    def __init__(self, base: ParityCheckMatrix, shortened, punctured):
        shortened = np.sort(np.asarray(shortened, dtype=np.int64))
        punctured = np.sort(np.asarray(punctured, dtype=np.int64))
        if np.intersect1d(shortened, punctured).size:
            raise ValueError("shortened and punctured sets must be disjoint")
        if shortened.size + punctured.size >= base.n_var:
            raise ValueError("payload must keep at least one variable")
        if punctured.size > base.n_chk:
            raise ValueError("cannot puncture more variables than there are checks")
        mask = np.ones(base.n_var, dtype=bool)
        mask[shortened] = False
        mask[punctured] = False
        payload = np.nonzero(mask)[0]
        for arr in (shortened, punctured, payload):
            arr.flags.writeable = False
        self.base = base
        self.shortened = shortened
        self.punctured = punctured
        self.payload = payload

    @property
    def n_pay(self) -> int:
        return int(self.payload.size)

    @property
    def leak_bits(self) -> int:
        return int(self.base.n_chk - self.punctured.size)

    def __repr__(self):
        return (
            f"RateAdaptedCode(n_var={self.base.n_var}, n_chk={self.base.n_chk}, "
            f"n_short={self.shortened.size}, n_punct={self.punctured.size})"
        )


def adapt_rate(h: ParityCheckMatrix, n_short: int, n_punct: int, seed: int) -> RateAdaptedCode:
    """Pick shortened then punctured positions uniformly without replacement,
    deterministically from the seed."""
    if n_short < 0 or n_punct < 0:
        raise ValueError("counts must be nonnegative")
    if n_short + n_punct >= h.n_var:
        raise ValueError("n_short + n_punct must leave at least one payload variable")
    rng = np.random.default_rng(seed)
    shortened = rng.choice(h.n_var, size=n_short, replace=False)
    rest = np.setdiff1d(np.arange(h.n_var), shortened)
    punctured = rest[rng.choice(rest.size, size=n_punct, replace=False)]
    return RateAdaptedCode(h, shortened, punctured)


def channel_llr(q: float) -> float:
    """Magnitude of the per-bit prior log((1-q)/q) for a BSC(q), clipped."""
    if not 0.0 < q < 0.5:
        raise ValueError("q must be in (0, 0.5)")
    return min(math.log((1.0 - q) / q), LLR_CLIP)


def bp_syndrome_decode(
    code: RateAdaptedCode, y, s, q: float, max_iter: int = DEFAULT_MAX_ITER
):
    """Sum-product syndrome decoding against side information y on the
    payload positions.

    Returns ``(x_hat, converged, iterations)`` where ``x_hat`` is the full
    length-n_var hard decision, ``converged`` means its syndrome equals
    ``s``, and ``iterations`` counts BP rounds (0 when the priors alone
    already satisfy the syndrome).  Non-convergence is a returned state.
    """
    y = np.asarray(y, dtype=np.uint8)
    s = np.asarray(s, dtype=np.uint8)
    if y.shape != (code.n_pay,):
        raise ValueError(f"y must cover the {code.n_pay} payload positions")
    if s.shape != (code.base.n_chk,):
        raise ValueError(f"s must have length {code.base.n_chk}")
    llr0 = channel_llr(q)
    prior = np.zeros(code.base.n_var)
    prior[code.payload] = (1.0 - 2.0 * y.astype(np.float64)) * llr0
    prior[code.shortened] = LLR_CLIP
    chk_ptr, edge_var = code.base.csr()
    bits, iters, conv = bp_single(prior, edge_var, chk_ptr, s, max_iter)
    return bits, bool(conv), int(iters)


# ---------------------------------------------------------------------------
# alist serialization (1-indexed, zero-padded rows)
# ---------------------------------------------------------------------------


def to_alist(h: ParityCheckMatrix) -> str:
    var_adj = h.var_adjacency()
    var_deg = [len(a) for a in var_adj]
    chk_deg = [len(a) for a in h.check_adj]
    max_v = max(var_deg)
    max_c = max(chk_deg)
    lines = [
        f"{h.n_var} {h.n_chk}",
        f"{max_v} {max_c}",
        " ".join(str(d) for d in var_deg),
        " ".join(str(d) for d in chk_deg),
    ]
    for a in var_adj:
        row = [str(int(c) + 1) for c in a] + ["0"] * (max_v - len(a))
        lines.append(" ".join(row))
    for a in h.check_adj:
        row = [str(int(v) + 1) for v in a] + ["0"] * (max_c - len(a))
        lines.append(" ".join(row))
    return "\n".join(lines) + "\n"


def from_alist(text: str) -> ParityCheckMatrix:
    rows = [[int(t) for t in line.split()] for line in text.splitlines() if line.strip()]
    if len(rows) < 4:
        raise ValueError("truncated alist")
    n_var, n_chk = rows[0]
    var_deg = rows[2]
    chk_deg = rows[3]
    if len(var_deg) != n_var or len(chk_deg) != n_chk:
        raise ValueError("alist degree lists do not match header")
    if len(rows) != 4 + n_var + n_chk:
        raise ValueError("alist row count does not match header")
    check_adj = []
    for c in range(n_chk):
        row = rows[4 + n_var + c]
        vals = [v - 1 for v in row if v != 0]
        if len(vals) != chk_deg[c]:
            raise ValueError(f"check {c} degree mismatch")
        check_adj.append(vals)
    return ParityCheckMatrix(n_var, n_chk, check_adj)


def write_alist(h: ParityCheckMatrix, path) -> None:
    with open(path, "w") as fh:
        fh.write(to_alist(h))


def read_alist(path) -> ParityCheckMatrix:
    with open(path) as fh:
        return from_alist(fh.read())
