"""Monte-Carlo word-error-rate harness.

All-zero transmission is statistically sufficient here: decoder failure
events are invariant under the codeword symmetry maps, so every point
simulates the all-zero word over AWGN and counts as an error any trial
whose output is nonzero, fractional, or unconverged.

Trial t of a point draws its noise from a generator seeded by
(seed, trial index), so results are independent of threading and
chunking, and a point can be reproduced in isolation.
"""

from __future__ import annotations

import csv
import datetime
import hashlib
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .admm import ConfigError, DecoderConfig, PenaltySpec, decode
from .channels import AwgnParams, awgn_llr, awgn_transmit_zero
from .reweighted import RlpdConfig, rlpd

DECODER_KINDS = ("lp", "pd-l1", "pd-l2", "rlpd", "rlpd-inf")

_CSV_COLUMNS = [
    "decoder",
    "penalty",
    "alpha",
    "mu",
    "rho",
    "t_max",
    "epsilon",
    "ebn0_db",
    "sigma",
    "trials",
    "word_errors",
    "wer",
    "ci_low",
    "ci_high",
    "mean_iter_correct",
    "mean_iter_all",
    "wall_seconds",
    "seed",
]


def ebn0_to_sigma(ebn0_db, rate):
    """AWGN noise deviation for a given Eb/N0 in dB at the given code rate."""
    if not 0 < rate < 1:
        raise ValueError(f"rate must lie in (0, 1), got {rate}")
    return math.sqrt(1.0 / (2.0 * rate * 10.0 ** (ebn0_db / 10.0)))


def wilson_interval(errors, trials, z=1.959963984540054):
    """95% Wilson score interval for a binomial proportion."""
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if not 0 <= errors <= trials:
        raise ValueError("errors must lie in 0..trials")
    p = errors / trials
    z2 = z * z
    denom = 1.0 + z2 / trials
    center = (p + z2 / (2.0 * trials)) / denom
    half = (z / denom) * math.sqrt(p * (1.0 - p) / trials + z2 / (4.0 * trials * trials))
    return max(0.0, center - half), min(1.0, center + half)


@dataclass(frozen=True)
class StopRule:
    """Stop a point at target_errors word errors or max_trials trials."""

    target_errors: int = 200
    max_trials: int = 1_000_000

    def __post_init__(self):
        if self.target_errors < 1 or self.max_trials < 1:
            raise ValueError("target_errors and max_trials must be >= 1")


@dataclass(frozen=True)
class DecoderSetup:
    """Decoder family plus the scalar knobs the harness reports.

    ``alpha`` is the penalty strength for pd-l1/pd-l2 and the
    reweighting strength for rlpd; it is ignored for lp and rlpd-inf.
    ``rounds`` only matters for rlpd.
    """

    kind: str = "lp"
    alpha: float = 0.0
    mu: float = 3.0
    epsilon: float = 1e-5
    t_max: int = 1000
    rho: float = 1.9
    rounds: int = 2

    def __post_init__(self):
        if self.kind not in DECODER_KINDS:
            raise ConfigError(f"decoder kind must be one of {DECODER_KINDS}, got {self.kind!r}")

    def penalty_name(self):
        return {"lp": "none", "pd-l1": "l1", "pd-l2": "l2", "rlpd": "none", "rlpd-inf": "none"}[self.kind]

    def reported_alpha(self):
        if self.kind in ("lp",):
            return 0.0
        if self.kind == "rlpd-inf":
            return math.inf
        return self.alpha

    def decoder_config(self):
        penalty = {
            "lp": PenaltySpec.none(),
            "pd-l1": PenaltySpec.l1(self.alpha),
            "pd-l2": PenaltySpec.l2(self.alpha),
            "rlpd": PenaltySpec.none(),
            "rlpd-inf": PenaltySpec.none(),
        }[self.kind]
        return DecoderConfig(penalty=penalty, mu=self.mu, epsilon=self.epsilon, t_max=self.t_max, rho=self.rho)

    def build(self, graph):
        """Validated closure gamma -> DecodeOutput for this setup."""
        cfg = self.decoder_config()
        cfg.validate_for_graph(graph)
        if self.kind == "rlpd":
            rcfg = RlpdConfig(alpha=self.alpha, rounds=self.rounds, inner=cfg)
            return lambda gamma: rlpd(gamma, graph, rcfg).output
        if self.kind == "rlpd-inf":
            rcfg = RlpdConfig(alpha=math.inf, rounds=2, inner=cfg)
            return lambda gamma: rlpd(gamma, graph, rcfg).output
        return lambda gamma: decode(gamma, graph, cfg)


@dataclass(frozen=True)
class WerPoint:
    """One simulated operating point; fields mirror the CSV columns."""

    decoder: str
    penalty: str
    alpha: float
    mu: float
    rho: float
    t_max: int
    epsilon: float
    ebn0_db: float
    sigma: float
    trials: int
    word_errors: int
    wer: float
    ci_low: float
    ci_high: float
    mean_iter_correct: float
    mean_iter_all: float
    wall_seconds: float
    seed: int

    def to_dict(self):
        return {c: getattr(self, c) for c in _CSV_COLUMNS}


def _run_trial(graph, decoder, ch, entropy, trial):
    y = awgn_transmit_zero(graph, ch, np.random.SeedSequence(list(entropy) + [trial]))
    out = decoder(awgn_llr(y, ch))
    error = (not out.converged) or (not out.integral) or bool(out.x_hard.any())
    return error, out.iterations


def run_wer_point(graph, setup, ebn0_db, stop, seed, threads=1, _entropy=None):
    """Simulate one (decoder, Eb/N0) point under the stop rule.

    Deterministic in (seed, setup, ebn0_db, stop): the number of trials
    and every count match a serial run regardless of ``threads``.
    """
    t_start = time.perf_counter()
    sigma = ebn0_to_sigma(ebn0_db, graph.rate())
    ch = AwgnParams(sigma)
    decoder = setup.build(graph)
    entropy = tuple(_entropy) if _entropy is not None else (seed,)

    results = []  # (error, iterations) per trial index

    def target_reached():
        errors = 0
        for i, (err, _) in enumerate(results):
            if err:
                errors += 1
                if errors >= stop.target_errors:
                    return i + 1
        return None

    chunk = max(1, 64 * threads)
    pool = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        next_trial = 0
        cut = None
        while next_trial < stop.max_trials:
            hi = min(stop.max_trials, next_trial + chunk)
            batch = range(next_trial, hi)
            if pool is None:
                results.extend(_run_trial(graph, decoder, ch, entropy, t) for t in batch)
            else:
                results.extend(pool.map(lambda t: _run_trial(graph, decoder, ch, entropy, t), batch))
            next_trial = hi
            cut = target_reached()
            if cut is not None:
                break
    finally:
        if pool is not None:
            pool.shutdown()

    if cut is not None:
        results = results[:cut]
    trials = len(results)
    word_errors = sum(1 for err, _ in results if err)
    iters_all = [it for _, it in results]
    iters_ok = [it for err, it in results if not err]
    ci_low, ci_high = wilson_interval(word_errors, trials)
    return WerPoint(
        decoder=setup.kind,
        penalty=setup.penalty_name(),
        alpha=setup.reported_alpha(),
        mu=setup.mu,
        rho=setup.rho,
        t_max=setup.t_max,
        epsilon=setup.epsilon,
        ebn0_db=ebn0_db,
        sigma=sigma,
        trials=trials,
        word_errors=word_errors,
        wer=word_errors / trials,
        ci_low=ci_low,
        ci_high=ci_high,
        mean_iter_correct=math.fsum(iters_ok) / len(iters_ok) if iters_ok else math.nan,
        mean_iter_all=math.fsum(iters_all) / trials,
        wall_seconds=time.perf_counter() - t_start,
        seed=seed,
    )


SWEEP_AXES = ("alpha", "mu", "rho", "tmax", "ebn0")


def run_sweep(graph, setup, axis, values, ebn0_db, stop, seed, threads=1):
    """Sweep one axis; invalid points are reported and skipped.

    Returns (points, rejected) where rejected is a list of
    (value, message) pairs; len(points) + len(rejected) == len(values).
    Each point gets its own seed stream derived from (seed, index).
    """
    if axis not in SWEEP_AXES:
        raise ValueError(f"axis must be one of {SWEEP_AXES}, got {axis!r}")
    points = []
    rejected = []
    for idx, value in enumerate(values):
        point_ebn0 = ebn0_db
        s = setup
        if axis == "ebn0":
            point_ebn0 = value
        elif axis == "alpha":
            s = replace(setup, alpha=value)
        elif axis == "mu":
            s = replace(setup, mu=value)
        elif axis == "rho":
            s = replace(setup, rho=value)
        elif axis == "tmax":
            s = replace(setup, t_max=int(value))
        try:
            points.append(
                run_wer_point(graph, s, point_ebn0, stop, seed, threads=threads, _entropy=(seed, idx))
            )
        except (ConfigError, ValueError) as exc:
            rejected.append((value, str(exc)))
    return points, rejected


# ------------------------------------------------------------------ reporting


def write_csv(points, path):
    """One row per point, full float precision, fixed column order."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(_CSV_COLUMNS)
        for p in points:
            writer.writerow([repr(v) if isinstance(v, float) else v for v in (getattr(p, c) for c in _CSV_COLUMNS)])


def file_sha256(path):
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        digest.update(fh.read())
    return digest.hexdigest()


def results_json(points, code_path=None, extra=None):
    """JSON-ready dict with run metadata; timestamps are informational only."""
    from . import __version__

    meta = {
        "version": __version__,
        "generated_at": datetime.datetime.now(datetime.timezone.utc).isoformat(),
    }
    if code_path is not None:
        meta["code_file"] = str(code_path)
        meta["code_sha256"] = file_sha256(code_path)
    if extra:
        meta.update(extra)
    return {"meta": meta, "points": [p.to_dict() for p in points]}
