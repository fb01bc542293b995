"""Monte Carlo block-error-rate and leakage-efficiency measurement.

Determinism contract: every result is a pure function of the code and the
trial configuration.  Trial t draws its randomness from an independent
stream keyed by ``(seed, stream, t)``, trials are consumed in index order,
and the stopping rule truncates at the exact trial index where the error
budget is reached, so the outcome does not depend on batch sizes or on how
many threads decode in parallel.  ``FINIKEY_THREADS`` caps the decoding
thread count (default: hardware parallelism).
"""

from __future__ import annotations

import dataclasses
import math
import os
from dataclasses import dataclass

import numba
import numpy as np
from scipy import stats

from . import ldpc
from ._kernels import LLR_CLIP, bp_batch
from .bounds import binary_entropy, entropy_variance, std_normal_quantile

__all__ = [
    "TrialConfig",
    "FerEstimate",
    "EfficiencyPoint",
    "UnreachableTargetError",
    "worker_count",
    "clopper_pearson",
    "sample_pair",
    "estimate_fer",
    "calibrate_to_fer",
    "sweep_q",
    "sweep_eps",
]

DEFAULT_STOP_ERRORS = 100
DEFAULT_MAX_TRIALS = 10_000_000

_FINAL_STREAM = 0  # estimate_fer stream id; probes use 1000+k


class UnreachableTargetError(RuntimeError):
    """No modulation of the base code brackets the target error rate."""


@dataclass(frozen=True)
class TrialConfig:
    """Channel, seeding and stopping parameters for one measurement."""

    q: float
    seed: int
    stop_errors: int = DEFAULT_STOP_ERRORS
    max_trials: int = DEFAULT_MAX_TRIALS
    max_iter: int = ldpc.DEFAULT_MAX_ITER

    def __post_init__(self):
        if not 0.0 < self.q < 0.5:
            raise ValueError("q must be in (0, 0.5)")
        if self.stop_errors < 1:
            raise ValueError("stop_errors must be >= 1")
        if self.max_trials < self.stop_errors:
            raise ValueError("max_trials must be >= stop_errors")


@dataclass(frozen=True)
class FerEstimate:
    """Observed error count with a 95% Clopper-Pearson interval."""

    errors: int
    trials: int
    fer: float
    ci_low: float
    ci_high: float


@dataclass(frozen=True)
class EfficiencyPoint:
    """One operating point: measured failure rate and leak per payload bit.

    ``f = leak_bits / (n_pay * h(q))`` is the ratio to the asymptotic
    optimum.  ``eps`` is the measured block error rate; ``eps_target`` and
    the full ``estimate`` are carried for reporting.
    """

    n_pay: int
    q: float
    eps: float
    leak_bits: int
    f: float
    eps_target: float | None = None
    estimate: FerEstimate | None = None


def worker_count() -> int:
    """Decoding thread count: FINIKEY_THREADS, capped by what numba offers."""
    env = os.environ.get("FINIKEY_THREADS", "")
    try:
        requested = int(env) if env else numba.config.NUMBA_NUM_THREADS
    except ValueError:
        requested = numba.config.NUMBA_NUM_THREADS
    return max(1, min(requested, numba.config.NUMBA_NUM_THREADS))


def clopper_pearson(errors: int, trials: int, confidence: float = 0.95):
    """Exact binomial confidence interval for errors/trials."""
    if trials < 1 or not 0 <= errors <= trials:
        raise ValueError("need 0 <= errors <= trials, trials >= 1")
    alpha = 1.0 - confidence
    lo = 0.0 if errors == 0 else float(stats.beta.ppf(alpha / 2, errors, trials - errors + 1))
    hi = 1.0 if errors == trials else float(stats.beta.ppf(1 - alpha / 2, errors + 1, trials - errors))
    return lo, hi


def sample_pair(n: int, q: float, rng: np.random.Generator):
    """One i.i.d. source draw: x uniform bits, y = x XOR Bernoulli(q)."""
    if not 0.0 < q < 0.5:
        raise ValueError("q must be in (0, 0.5)")
    x = rng.integers(0, 2, size=n, dtype=np.uint8)
    e = (rng.random(n) < q).astype(np.uint8)
    return x, x ^ e


def _batch_cap(n_var: int) -> int:
    # Bounds the priors buffer to ~30 MB; schedule depends only on n_var.
    return max(64, min(4096, 4_000_000 // max(n_var, 1)))


def _run_trials(code, cfg: TrialConfig, stream: int, stop_errors: int, max_trials: int, escape_band=None):
    """Run trials in index order until ``stop_errors`` errors or
    ``max_trials``; returns (errors, trials).

    ``escape_band = (lo, hi)`` optionally stops at a batch boundary once the
    95% interval lies entirely outside [lo, hi]; the check happens at fixed
    batch sizes, so it is deterministic too.
    """
    h = code.base
    n_var = h.n_var
    payload = code.payload
    shortened = code.shortened
    watch = np.sort(np.concatenate([payload, code.punctured]))
    chk_ptr, edge_var = h.csr()
    llr0 = ldpc.channel_llr(cfg.q)

    numba.set_num_threads(worker_count())

    errors = 0
    trials = 0
    batch = 256
    cap = _batch_cap(n_var)
    while trials < max_trials and errors < stop_errors:
        b = min(batch, max_trials - trials)
        xs = np.empty((b, n_var), dtype=np.uint8)
        flips = np.empty((b, payload.size), dtype=np.uint8)
        for j in range(b):
            rng = np.random.default_rng([cfg.seed, stream, trials + j])
            x = rng.integers(0, 2, size=n_var, dtype=np.uint8)
            x[shortened] = 0
            xs[j] = x
            flips[j] = rng.random(payload.size) < cfg.q
        y = xs[:, payload] ^ flips
        priors = np.zeros((b, n_var))
        priors[:, payload] = (1.0 - 2.0 * y.astype(np.float64)) * llr0
        priors[:, shortened] = LLR_CLIP
        err = np.empty(b, dtype=np.uint8)
        iters = np.empty(b, dtype=np.int64)
        bp_batch(priors, xs, watch, edge_var, chk_ptr, cfg.max_iter, err, iters)

        cum = errors + np.cumsum(err.astype(np.int64))
        hit = np.nonzero(cum >= stop_errors)[0]
        if hit.size:
            t = int(hit[0])
            return int(cum[t]), trials + t + 1
        errors = int(cum[-1])
        trials += b
        if escape_band is not None:
            lo, hi = clopper_pearson(errors, trials)
            if hi < escape_band[0] or lo > escape_band[1]:
                break
        batch = min(batch * 2, cap)
    return errors, trials


def _estimate(code, cfg, stream, stop_errors, max_trials, escape_band=None) -> FerEstimate:
    errors, trials = _run_trials(code, cfg, stream, stop_errors, max_trials, escape_band)
    lo, hi = clopper_pearson(errors, trials)
    return FerEstimate(errors, trials, errors / trials, lo, hi)


def estimate_fer(code: ldpc.RateAdaptedCode, cfg: TrialConfig) -> FerEstimate:
    """Measure the block error rate of a rate-adapted code.

    A trial draws the full string x (shortened positions fixed to 0,
    punctured positions random but unobserved), gives the decoder the
    syndrome of x plus the noisy payload observation, and fails if the
    decoded word differs from x on any payload or punctured position.
    Stops at ``cfg.stop_errors`` errors or ``cfg.max_trials`` trials.
    """
    return _estimate(code, cfg, _FINAL_STREAM, cfg.stop_errors, cfg.max_trials)


def _efficiency_point(code, q, est, target) -> EfficiencyPoint:
    f = code.leak_bits / (code.n_pay * binary_entropy(q))
    return EfficiencyPoint(code.n_pay, q, est.fer, code.leak_bits, f, target, est)


def _knobs(t: float, n_var: int, n_chk: int):
    """Map the scalar modulation t in [-1, 1] to (n_short, n_punct):
    positive t shortens, negative t punctures, t = 0 is the base code."""
    n_max_short = n_var - n_chk
    if t >= 0.0:
        return min(round(t * n_max_short), n_var - 1), 0
    return 0, min(round(-t * n_chk), n_chk)


def _model_bracket(n_var, n_chk, q, target_eps):
    """Initial bisection bracket predicted by the two-parameter leakage
    model over generous coefficient bands; the calibration probes verify it
    and widen to the schedule extremes if the prediction is off."""
    h = binary_entropy(q)
    v = entropy_variance(q)
    z = -std_normal_quantile(target_eps)

    def model_t(xi1, xi2):
        # solve leak(t) = xi1*n_pay(t)*h + xi2*sqrt(n_pay(t)*v)*z on the
        # continuous schedule; the residual is decreasing in t
        def g(t):
            if t >= 0.0:
                n_pay = n_var - t * (n_var - n_chk)
                leak = n_chk
            else:
                n_pay = n_var + t * n_chk
                leak = n_chk * (1.0 + t)
            return xi1 * n_pay * h + xi2 * math.sqrt(max(n_pay, 1.0) * v) * z - leak

        if g(-1.0) <= 0.0:
            return -1.0
        if g(1.0) >= 0.0:
            return 1.0
        lo, hi = -1.0, 1.0
        for _ in range(40):
            mid = 0.5 * (lo + hi)
            if g(mid) > 0.0:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)

    corners = [model_t(xi1, xi2) for xi1 in (0.9, 1.6) for xi2 in (0.0, 4.0)]
    return max(min(corners) - 0.1, -1.0), min(max(corners) + 0.1, 1.0)


def calibrate_to_fer(
    base: ldpc.ParityCheckMatrix,
    q: float,
    target_eps: float,
    cfg: TrialConfig,
    bracket: tuple[float, float] | None = None,
):
    """Search shortening/puncturing until the measured FER meets the target.

    Bisects the one-parameter modulation schedule (FER decreases from the
    fully punctured end t = -1 to the fully shortened end t = +1) using
    cheap probe estimates, then measures the chosen operating point with the
    full configuration, nudging by the locally estimated FER-per-bit slope
    if the final interval misses [target/2, 2*target].  Deterministic given
    (base, q, target_eps, cfg).

    Returns ``(RateAdaptedCode, EfficiencyPoint)``.

    Raises
    ------
    UnreachableTargetError
        If even the extreme modulations cannot bracket the target.
    """
    if not 0.0 < target_eps < 1.0:
        raise ValueError("target_eps must be in (0, 1)")
    cfg = dataclasses.replace(cfg, q=q)
    n_var, n_chk = base.n_var, base.n_chk

    probe_errors = 10
    probe_trials = min(cfg.max_trials, max(1500, int(14 / target_eps)))
    band = (target_eps, target_eps)

    def make(t):
        ns, npu = _knobs(t, n_var, n_chk)
        return ldpc.adapt_rate(base, ns, npu, seed=cfg.seed)

    probes = [0]

    def probe(t):
        probes[0] += 1
        code = make(t)
        est = _estimate(code, cfg, 1000 + probes[0], probe_errors, probe_trials, band)
        return est

    lo, hi = bracket if bracket is not None else _model_bracket(n_var, n_chk, q, target_eps)
    est_lo = None
    est_hi = probe(hi)
    if est_hi.ci_low > target_eps:
        # predicted end not protective enough: the old end is a confirmed
        # high-FER side, retry at the schedule extreme
        if hi >= 1.0:
            raise UnreachableTargetError(
                f"FER {est_hi.fer:.3g} at maximum shortening still above target {target_eps:.3g}"
            )
        lo, est_lo = hi, est_hi
        hi, est_hi = 1.0, probe(1.0)
        if est_hi.ci_low > target_eps:
            raise UnreachableTargetError(
                f"FER {est_hi.fer:.3g} at maximum shortening still above target {target_eps:.3g}"
            )
    if est_lo is None:
        est_lo = probe(lo)
    if est_lo.ci_high < target_eps:
        if lo <= -1.0:
            raise UnreachableTargetError(
                f"FER {est_lo.fer:.3g} at maximum puncturing below target {target_eps:.3g}"
            )
        hi, est_hi = lo, est_lo
        lo, est_lo = -1.0, probe(-1.0)
        if est_lo.ci_high < target_eps:
            raise UnreachableTargetError(
                f"FER {est_lo.fer:.3g} at maximum puncturing below target {target_eps:.3g}"
            )

    fer_lo, fer_hi = max(est_lo.fer, 1e-12), max(est_hi.fer, 1e-12)
    while _knob_distance(lo, hi, n_var, n_chk) > 1:
        mid = 0.5 * (lo + hi)
        est = probe(mid)
        if est.fer > target_eps:
            lo, fer_lo = mid, max(est.fer, 1e-12)
        else:
            hi, fer_hi = mid, max(est.fer, 1e-12)

    # Slope of log FER per leaked bit, from the final bracket; used for
    # corrective jumps after the full-budget measurement.
    dleak = _leak_of(hi, n_var, n_chk) - _leak_of(lo, n_var, n_chk)
    slope = (math.log(fer_lo) - math.log(fer_hi)) / max(dleak, 1)

    t_star = hi if abs(math.log(fer_hi / target_eps)) <= abs(math.log(fer_lo / target_eps)) else lo
    ns, npu = _knobs(t_star, n_var, n_chk)
    for _ in range(4):
        code = ldpc.adapt_rate(base, ns, npu, seed=cfg.seed)
        est = _estimate(code, cfg, _FINAL_STREAM, cfg.stop_errors, cfg.max_trials)
        if est.ci_high >= target_eps / 2 and est.ci_low <= 2 * target_eps:
            break
        # measured point missed the window: jump by the slope estimate
        fer = max(est.fer, 0.5 / est.trials)
        steps = max(1, round(abs(math.log(fer / target_eps)) / slope)) if slope > 0 else 1
        ns, npu = _shift_knobs(ns, npu, steps, n_var, n_chk, toward_protection=fer > target_eps)
    return code, _efficiency_point(code, q, est, target_eps)


def _leak_of(t, n_var, n_chk):
    ns, npu = _knobs(t, n_var, n_chk)
    # shortening shrinks the payload instead of adding syndrome; express
    # both on one axis as "protection bits per payload bit" proxy
    return (n_chk - npu) + ns


def _knob_distance(lo, hi, n_var, n_chk):
    a = _knobs(lo, n_var, n_chk)
    b = _knobs(hi, n_var, n_chk)
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def _shift_knobs(ns, npu, steps, n_var, n_chk, toward_protection):
    """Move the operating point ``steps`` integer knobs; protection means
    more shortening / less puncturing (lower FER)."""
    for _ in range(max(1, steps)):
        if toward_protection:
            if npu > 0:
                npu -= 1
            elif ns < n_var - n_chk:
                ns += 1
        else:
            if ns > 0:
                ns -= 1
            elif npu < n_chk:
                npu += 1
    return ns, npu


def sweep_q(code: ldpc.RateAdaptedCode, q_list, cfg: TrialConfig):
    """FER estimates across crossover probabilities, one per q."""
    return [(q, estimate_fer(code, dataclasses.replace(cfg, q=q))) for q in q_list]


def sweep_eps(base: ldpc.ParityCheckMatrix, q: float, eps_list, cfg: TrialConfig):
    """Calibrated operating points for each target error rate.

    Targets are processed from the largest down so each solution warm-starts
    the next bracket; output order matches ``eps_list``.  Unreachable
    targets yield ``None`` in their slot and the sweep continues.
    """
    order = sorted(range(len(eps_list)), key=lambda i: -eps_list[i])
    results: list[EfficiencyPoint | None] = [None] * len(eps_list)
    prev_t = None
    for i in order:
        target = eps_list[i]
        bracket = (prev_t, 1.0) if prev_t is not None else None
        try:
            code, point = calibrate_to_fer(base, q, target, cfg, bracket=bracket)
        except UnreachableTargetError:
            continue
        results[i] = point
        ns, npu = code.shortened.size, code.punctured.size
        prev_t = (ns / max(base.n_var - base.n_chk, 1)) if npu == 0 else (-npu / base.n_chk)
    return results
