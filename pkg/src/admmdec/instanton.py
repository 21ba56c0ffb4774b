"""Instanton search: most-likely noise vectors that make decoding fail.

All-zero transmission over AWGN is assumed throughout, with the noise
convention y = 1 - n, so gamma(n) = 2 (1 - n) / sigma^2 and the failure
probability of a noise direction is governed by ||n||^2.  A decoding is
counted as failed when the output is nonzero, fractional, or the solver
did not converge.

Two searches are provided.  The coordinate-descent style search
(``isa_pd``) alternates between (a) the decoder output omega at the
current noise and (b) the smallest noise that puts omega on the decision
boundary against the zero word, rescaled along its ray until decoding
actually fails.  The random refinement (``isa_r``) is a gradient-free
descent of a norm-vs-failure objective restricted to the support of its
starting point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .admm import DecoderConfig, decode


class RaySearchError(RuntimeError):
    """No failing scale was bracketed along the candidate noise ray."""


@dataclass(frozen=True)
class IsaPdParams:
    """Outer iteration budget, stop tolerance, and ray-search controls."""

    sigma: float = 0.5
    max_iters: int = 50
    tol: float = 1e-5
    expand_factor: float = 1.3
    bisect_tol: float = 1e-3
    ray_cap: float = 50.0

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")
        if not self.expand_factor > 1:
            raise ValueError("expand_factor must exceed 1")
        if not 0 < self.bisect_tol < 1:
            raise ValueError("bisect_tol is a relative width in (0, 1)")


@dataclass(frozen=True)
class IsaRParams:
    """Gradient-free refinement constants.

    The objective is ||n||^2 on failing noise and cap_c * (1 - ||n||^2)
    on successful noise; steps follow a one-sided random directional
    difference with smoothing eta and step size step_h, each step's
    2-norm capped at step_norm_cap.  Directions live on the support of
    the starting noise (entries above support_tol in magnitude).
    """

    iters: int = 200
    cap_c: float = 20000.0
    eta: float = 1e-10
    step_h: float = 1.0 / 40000.0
    step_norm_cap: float = 1.0
    support_tol: float = 1e-6


@dataclass
class InstantonRecord:
    noise: np.ndarray
    sq_norm: float
    omega: np.ndarray
    trial_seed: int
    iterations_used: int
    refined: bool

    def to_dict(self):
        return {
            "noise": self.noise.tolist(),
            "sq_norm": self.sq_norm,
            "omega": self.omega.tolist(),
            "trial_seed": self.trial_seed,
            "iterations_used": self.iterations_used,
            "refined": self.refined,
        }


def decode_noise(noise, graph, cfg, sigma):
    """Decoder output for all-zero transmission hit by the given noise."""
    noise = np.asarray(noise, dtype=np.float64)
    gamma = 2.0 * (1.0 - noise) / (sigma * sigma)
    return decode(gamma, graph, cfg)


def decoding_fails(noise, graph, cfg, sigma):
    out = decode_noise(noise, graph, cfg, sigma)
    return bool((not out.converged) or (not out.integral) or out.x_hard.any())


def _penalty_values(penalty, w):
    if penalty.kind == "none":
        return np.zeros_like(w)
    if penalty.kind == "l1":
        return -penalty.alpha * np.abs(w - 0.5)
    return -penalty.alpha * (w - 0.5) ** 2


def min_confusion_noise(omega, sigma, penalty, n_len):
    """Smallest-norm noise that makes omega beat the zero word.

    The decoder prefers omega to 0 once
    gamma(n) . omega + sum_i g(omega_i) <= n_len * g(0); substituting
    gamma(n) = 2 (1 - n) / sigma^2 turns this into the halfspace
    n . omega >= ||omega||_1 + (sigma^2 / 2) (sum_i g(omega_i) - n_len g(0)),
    whose minimum-norm point is omega scaled by the threshold over
    ||omega||_2^2.  The penalty correction is nonnegative (fractional
    omega needs extra noise to pay its penalty) and vanishes for binary
    omega or no penalty.
    """
    omega = np.asarray(omega, dtype=np.float64)
    if omega.shape != (n_len,):
        raise ValueError(f"omega has shape {omega.shape}, expected ({n_len},)")
    if np.any(omega < -1e-9) or np.any(omega > 1 + 1e-9):
        raise ValueError("omega entries must lie in [0, 1]")
    sq = float(omega @ omega)
    if sq == 0.0:
        raise ValueError("omega must be nonzero")
    g = _penalty_values(penalty, omega)
    g0 = _penalty_values(penalty, np.zeros(1))[0]
    threshold = float(np.abs(omega).sum()) + (sigma * sigma / 2.0) * float(g.sum() - n_len * g0)
    return omega * (threshold / sq)


def _smallest_failing_scale(direction, graph, cfg, params):
    """Bracketed bisection for the smallest failing scale along a ray.

    Returns (scale, output at scale).  Starts at scale 1: if it already
    fails, shrink by expand_factor to find a succeeding lower end (zero
    noise always succeeds); otherwise grow until failure or the ray cap.
    """

    def fails(a):
        out = decode_noise(a * direction, graph, cfg, params.sigma)
        return bool((not out.converged) or (not out.integral) or out.x_hard.any()), out

    hi = 1.0
    hi_fails, hi_out = fails(hi)
    if hi_fails:
        lo = hi / params.expand_factor
        while lo > 1e-9:
            lo_fails, lo_out = fails(lo)
            if not lo_fails:
                break
            hi, hi_out = lo, lo_out
            lo /= params.expand_factor
        else:
            lo = 0.0
    else:
        lo = hi
        while True:
            hi = lo * params.expand_factor
            if hi > params.ray_cap:
                raise RaySearchError(f"no failure up to scale {params.ray_cap} along ray")
            hi_fails, hi_out = fails(hi)
            if hi_fails:
                break
            lo = hi
    while (hi - lo) > params.bisect_tol * hi:
        mid = 0.5 * (lo + hi)
        mid_fails, mid_out = fails(mid)
        if mid_fails:
            hi, hi_out = mid, mid_out
        else:
            lo = mid
    return hi, hi_out


def isa_pd(init_noise, graph, cfg, params, trial_seed=0):
    """Alternating search for a small failing noise vector.

    Each outer iteration maps the current failing decoder output omega to
    its minimal confusion noise, rescales that direction to the smallest
    actually-failing multiple, and keeps the best (smallest-norm) failing
    noise seen.  Stops when the iterate moves less than ``tol`` in
    2-norm, or after ``max_iters``.
    """
    init_noise = np.asarray(init_noise, dtype=np.float64)
    out = decode_noise(init_noise, graph, cfg, params.sigma)
    if out.converged and out.integral and not out.x_hard.any():
        raise ValueError("initial noise must make decoding fail")
    omega = out.x_soft
    n_prev = init_noise
    best_noise = None
    best_omega = None
    best_sq = math.inf
    used = 0
    for k in range(1, params.max_iters + 1):
        used = k
        if float(omega @ omega) <= 1e-18:
            # Degenerate failing output (all-zero soft vector from a
            # non-converged run) gives no confusion direction.
            if best_noise is None:
                raise RaySearchError("failing decode produced a zero soft output")
            break
        direction = min_confusion_noise(omega, params.sigma, cfg.penalty, graph.n)
        scale, out_k = _smallest_failing_scale(direction, graph, cfg, params)
        n_k = scale * direction
        sq = float(n_k @ n_k)
        if sq < best_sq:
            best_sq = sq
            best_noise = n_k
            best_omega = out_k.x_soft
        step = n_k - n_prev
        if float(np.sqrt(step @ step)) <= params.tol:
            break
        n_prev = n_k
        omega = out_k.x_soft
    return InstantonRecord(
        noise=best_noise,
        sq_norm=best_sq,
        omega=best_omega,
        trial_seed=trial_seed,
        iterations_used=used,
        refined=False,
    )


def _objective(noise, graph, cfg, sigma, cap_c):
    """Failure-aware objective: ||n||^2 when decoding fails, else cap_c (1 - ||n||^2)."""
    out = decode_noise(noise, graph, cfg, sigma)
    failed = bool((not out.converged) or (not out.integral) or out.x_hard.any())
    sq = float(noise @ noise)
    return (sq if failed else cap_c * (1.0 - sq)), failed, out


def isa_r(record, graph, cfg, params, sigma, seed=0):
    """Random gradient-free refinement of a failing noise vector.

    Perturbs only the support of the starting noise.  Returns the best
    failing noise encountered (possibly the input unchanged) with
    ``refined`` set.
    """
    noise = np.asarray(record.noise, dtype=np.float64)
    f_x, failed, _ = _objective(noise, graph, cfg, sigma, params.cap_c)
    if not failed:
        raise ValueError("refinement must start from a failing noise vector")
    support = np.nonzero(np.abs(noise) > params.support_tol)[0]
    best = replace(record, refined=True)
    if support.size == 0:
        return best
    rng = np.random.default_rng(seed)
    x = noise.copy()
    for _ in range(params.iters):
        u = np.zeros(graph.n)
        u[support] = rng.standard_normal(support.size)
        f_probe, _, _ = _objective(x + params.eta * u, graph, cfg, sigma, params.cap_c)
        grad = ((f_probe - f_x) / params.eta) * u
        step = params.step_h * grad
        norm = float(np.sqrt(step @ step))
        if norm > params.step_norm_cap:
            step *= params.step_norm_cap / norm
        x = x - step
        f_x, failed, out = _objective(x, graph, cfg, sigma, params.cap_c)
        if failed and f_x < best.sq_norm:
            best = replace(best, noise=x.copy(), sq_norm=f_x, omega=out.x_soft)
    return best


@dataclass(frozen=True)
class CampaignResult:
    records: tuple
    min_sq_norm: float
    quantile_sq_norm: float
    skipped_trials: int

    def to_dict(self):
        return {
            "records": [r.to_dict() for r in self.records],
            "min_sq_norm": self.min_sq_norm,
            "quantile_sq_norm": self.quantile_sq_norm,
            "skipped_trials": self.skipped_trials,
        }


def _failing_start(graph, cfg, sigma, rng, start_scale, start_growth):
    """Scale an i.i.d. Gaussian direction up until decoding fails usefully.

    The failing output must also be nonzero, otherwise the first search
    step has no direction to follow.  Starting small keeps the first
    failing point near the failure boundary, which lands the search in
    better basins than a far-out start.
    """
    direction = rng.standard_normal(graph.n)
    scale = start_scale
    for _ in range(96):
        noise = scale * direction
        out = decode_noise(noise, graph, cfg, sigma)
        failed = (not out.converged) or (not out.integral) or out.x_hard.any()
        if failed and float(np.abs(out.x_soft).max()) > 1e-6:
            return noise
        scale *= start_growth
    raise RaySearchError("could not find a failing starting noise")


def instanton_campaign(
    graph,
    cfg,
    pd_params,
    k_trials,
    seed,
    refine=True,
    r_params=IsaRParams(),
    start_scale=0.3,
    start_growth=1.2,
):
    """Run k_trials independent searches and summarize the smallest norms.

    Trial i draws its starting noise from a generator seeded by
    (seed, i); records are returned sorted by squared norm.  The
    summary quantile is the ceil(k/100)-th smallest squared norm.
    Trials whose ray search never brackets a failure are skipped and
    counted.
    """
    if k_trials < 1:
        raise ValueError("k_trials must be >= 1")
    records = []
    skipped = 0
    for i in range(k_trials):
        rng = np.random.default_rng(np.random.SeedSequence([seed, i]))
        try:
            start = _failing_start(graph, cfg, pd_params.sigma, rng, start_scale, start_growth)
            rec = isa_pd(start, graph, cfg, pd_params, trial_seed=i)
            if refine:
                rec = isa_r(rec, graph, cfg, r_params, pd_params.sigma, seed=np.random.SeedSequence([seed, i, 1]))
        except RaySearchError:
            skipped += 1
            continue
        records.append(rec)
    if not records:
        raise RaySearchError("every trial failed to bracket a decoding failure")
    records.sort(key=lambda r: r.sq_norm)
    q_idx = math.ceil(len(records) / 100.0) - 1
    return CampaignResult(
        records=tuple(records),
        min_sq_norm=records[0].sq_norm,
        quantile_sq_norm=records[q_idx].sq_norm,
        skipped_trials=skipped,
    )


def trapping_set_profile(graph, noise, top_k=5):
    """(a, b) profile of the subgraph induced by the top-k noise coordinates.

    a is top_k; b counts the checks with an odd number of neighbors among
    those variables.  A diagnostic only; nothing is asserted about it.
    """
    noise = np.asarray(noise, dtype=np.float64)
    top = np.argsort(-np.abs(noise), kind="stable")[:top_k]
    marker = np.zeros(graph.n, dtype=np.int64)
    marker[top] = 1
    counts = np.add.reduceat(marker[graph.edge_var], graph.check_ptr[:-1])
    odd = int(np.sum(counts % 2 == 1))
    return top_k, odd
