"""Compiled inner loops: progressive-edge-growth search and BP decoding.

Kept separate so the hot paths stay plain loops over flat arrays; everything
here is deterministic given its inputs.  Batch decoding parallelizes over
trials with ``prange``; per-trial outputs are written to disjoint slots, so
results do not depend on the thread count.
"""

from __future__ import annotations

import numpy as np
import numba
from numba import njit, prange

# workqueue is always available and fork-safe; picking it explicitly also
# avoids the noisy TBB version probe on import.
numba.config.THREADING_LAYER = "workqueue"

LLR_CLIP = 30.0
# tanh(LLR_CLIP / 2); pin for saturated products so arctanh stays finite.
_TANH_MAX = 0.9999999999999999

PEG_OK = 0
PEG_SATURATED = 1  # a variable is already adjacent to every check
PEG_OVERFLOW = 2  # check adjacency capacity exceeded


@njit(cache=True)
def peg_build(proc_order, var_deg, n_chk, chk_cap):
    """Greedy girth-aware edge placement.

    Variables are handled in ``proc_order``; each gets ``var_deg[v]`` edges.
    The first edge of a variable goes to a lowest-degree check; every later
    edge expands a BFS tree from the variable and attaches to a check at
    maximal graph distance (unreached checks count as infinitely far), ties
    broken by lowest current degree then lowest index.
    """
    n_var = var_deg.shape[0]
    max_var_deg = int(var_deg.max())
    var_adj = np.full((n_var, max_var_deg), -1, np.int64)
    var_cnt = np.zeros(n_var, np.int64)
    chk_adj = np.full((n_chk, chk_cap), -1, np.int64)
    chk_cnt = np.zeros(n_chk, np.int64)

    chk_stamp = np.full(n_chk, -1, np.int64)
    chk_level = np.zeros(n_chk, np.int64)
    var_stamp = np.full(n_var, -1, np.int64)
    frontier_c = np.empty(n_chk, np.int64)
    next_c = np.empty(n_chk, np.int64)
    frontier_v = np.empty(n_var, np.int64)
    stamp = 0

    for oi in range(n_var):
        v = proc_order[oi]
        d = var_deg[v]
        if d > n_chk:
            return var_adj, var_cnt, PEG_SATURATED
        for k in range(d):
            if k == 0:
                target = 0
                for c in range(1, n_chk):
                    if chk_cnt[c] < chk_cnt[target]:
                        target = c
            else:
                stamp += 1
                var_stamp[v] = stamp
                nc = 0
                for e in range(var_cnt[v]):
                    c = var_adj[v, e]
                    if chk_stamp[c] != stamp:
                        chk_stamp[c] = stamp
                        chk_level[c] = 0
                        frontier_c[nc] = c
                        nc += 1
                n_reached = nc
                if n_reached == n_chk:
                    return var_adj, var_cnt, PEG_SATURATED
                level = 0
                saturated = False
                while True:
                    nv = 0
                    for i in range(nc):
                        c = frontier_c[i]
                        for e in range(chk_cnt[c]):
                            u = chk_adj[c, e]
                            if var_stamp[u] != stamp:
                                var_stamp[u] = stamp
                                frontier_v[nv] = u
                                nv += 1
                    mc = 0
                    for i in range(nv):
                        u = frontier_v[i]
                        for e in range(var_cnt[u]):
                            c = var_adj[u, e]
                            if chk_stamp[c] != stamp:
                                chk_stamp[c] = stamp
                                chk_level[c] = level + 1
                                next_c[mc] = c
                                mc += 1
                    if mc == 0:
                        # tree stopped growing: some checks are unreachable
                        break
                    n_reached += mc
                    if n_reached == n_chk:
                        # the final BFS wave is the farthest level
                        saturated = True
                        break
                    for i in range(mc):
                        frontier_c[i] = next_c[i]
                    nc = mc
                    level += 1
                target = -1
                for c in range(n_chk):
                    if saturated:
                        cand = chk_stamp[c] == stamp and chk_level[c] == level + 1
                    else:
                        cand = chk_stamp[c] != stamp
                    if cand and (target == -1 or chk_cnt[c] < chk_cnt[target]):
                        target = c
            if chk_cnt[target] >= chk_cap:
                return var_adj, var_cnt, PEG_OVERFLOW
            var_adj[v, var_cnt[v]] = target
            var_cnt[v] += 1
            chk_adj[target, chk_cnt[target]] = v
            chk_cnt[target] += 1
    return var_adj, var_cnt, PEG_OK


@njit(cache=True)
def bp_core(prior, edge_var, chk_ptr, syndrome, max_iter, v2c, c2v, tanh_buf, total, bits):
    """Sum-product syndrome decoding in the LLR domain.

    Flooding schedule, exact tanh check rule with the sign flipped on checks
    whose syndrome bit is one, messages clipped to +-LLR_CLIP.  A hard
    decision is taken before the first iteration and after each one; decoding
    stops as soon as the decision reproduces the target syndrome.  Returns
    (iterations_used, converged).
    """
    E = edge_var.shape[0]
    n_chk = chk_ptr.shape[0] - 1
    n_var = prior.shape[0]

    for v in range(n_var):
        bits[v] = 1 if prior[v] < 0.0 else 0
    ok = True
    for c in range(n_chk):
        acc = np.uint8(syndrome[c])
        for e in range(chk_ptr[c], chk_ptr[c + 1]):
            acc ^= bits[edge_var[e]]
        if acc:
            ok = False
            break
    if ok:
        return 0, True

    for e in range(E):
        v2c[e] = prior[edge_var[e]]

    for it in range(max_iter):
        for c in range(n_chk):
            lo, hi = chk_ptr[c], chk_ptr[c + 1]
            for e in range(lo, hi):
                tanh_buf[e] = np.tanh(0.5 * v2c[e])
            prod = 1.0
            for e in range(lo, hi):
                c2v[e] = prod  # prefix product, excluding self
                prod *= tanh_buf[e]
            suf = 1.0
            for e in range(hi - 1, lo - 1, -1):
                o = c2v[e] * suf
                suf *= tanh_buf[e]
                if o > _TANH_MAX:
                    o = _TANH_MAX
                elif o < -_TANH_MAX:
                    o = -_TANH_MAX
                val = 2.0 * np.arctanh(o)
                if syndrome[c]:
                    val = -val
                if val > LLR_CLIP:
                    val = LLR_CLIP
                elif val < -LLR_CLIP:
                    val = -LLR_CLIP
                c2v[e] = val
        for v in range(n_var):
            total[v] = prior[v]
        for e in range(E):
            total[edge_var[e]] += c2v[e]
        for e in range(E):
            val = total[edge_var[e]] - c2v[e]
            if val > LLR_CLIP:
                val = LLR_CLIP
            elif val < -LLR_CLIP:
                val = -LLR_CLIP
            v2c[e] = val
        for v in range(n_var):
            bits[v] = 1 if total[v] < 0.0 else 0
        ok = True
        for c in range(n_chk):
            acc = np.uint8(syndrome[c])
            for e in range(chk_ptr[c], chk_ptr[c + 1]):
                acc ^= bits[edge_var[e]]
            if acc:
                ok = False
                break
        if ok:
            return it + 1, True
    return max_iter, False


@njit(cache=True)
def bp_single(prior, edge_var, chk_ptr, syndrome, max_iter):
    E = edge_var.shape[0]
    n_var = prior.shape[0]
    v2c = np.empty(E)
    c2v = np.empty(E)
    tanh_buf = np.empty(E)
    total = np.empty(n_var)
    bits = np.empty(n_var, np.uint8)
    iters, conv = bp_core(
        prior, edge_var, chk_ptr, syndrome, max_iter, v2c, c2v, tanh_buf, total, bits
    )
    return bits, iters, conv


@njit(cache=True, parallel=True)
def bp_batch(priors, x_true, watch, edge_var, chk_ptr, max_iter, err_out, iter_out):
    """Decode a batch of trials; trial b fails if the decoded word differs
    from ``x_true[b]`` anywhere on ``watch``.  Syndromes are recomputed from
    ``x_true`` internally."""
    B = priors.shape[0]
    E = edge_var.shape[0]
    n_chk = chk_ptr.shape[0] - 1
    n_var = priors.shape[1]
    for b in prange(B):
        syndrome = np.zeros(n_chk, np.uint8)
        for c in range(n_chk):
            acc = np.uint8(0)
            for e in range(chk_ptr[c], chk_ptr[c + 1]):
                acc ^= x_true[b, edge_var[e]]
            syndrome[c] = acc
        v2c = np.empty(E)
        c2v = np.empty(E)
        tanh_buf = np.empty(E)
        total = np.empty(n_var)
        bits = np.empty(n_var, np.uint8)
        iters, conv = bp_core(
            priors[b], edge_var, chk_ptr, syndrome, max_iter, v2c, c2v, tanh_buf, total, bits
        )
        bad = np.uint8(0)
        for i in range(watch.shape[0]):
            w = watch[i]
            if bits[w] != x_true[b, w]:
                bad = np.uint8(1)
                break
        err_out[b] = bad
        iter_out[b] = iters
