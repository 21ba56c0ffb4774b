"""Reweighted LP decoding and a related reweighted x-update.

When plain LP decoding stops at a fractional optimum (a pseudocodeword),
a second objective biased against that point often recovers the
transmitted word.  Round k >= 1 re-solves the LP with

    gamma_k[i] = gamma[i] - alpha * sgn(x_prev[i] - 1/2),

always offsetting the ORIGINAL objective, with sgn(0) = 0.  The limit
alpha -> infinity keeps only the bias term, gamma_k = -sgn(x_prev - 1/2);
its classic form is the two-round decoder ``rlpd_inf``.  Every round
restarts the ADMM solver from the default initialization.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .admm import ConfigError, DecodeOutput, DecoderConfig, decode


@dataclass(frozen=True)
class RlpdConfig:
    """Reweighting strength, round budget, and the inner LP solver settings."""

    alpha: float = 0.6
    rounds: int = 2
    inner: DecoderConfig = DecoderConfig()

    def __post_init__(self):
        if not self.alpha >= 0.0:
            raise ConfigError(f"alpha must be >= 0 (or +inf), got {self.alpha}")
        if not (isinstance(self.rounds, int) and self.rounds >= 2):
            raise ConfigError(f"rounds must be an integer >= 2, got {self.rounds}")
        if self.inner.penalty.kind != "none":
            raise ConfigError("reweighted LP rounds use the penalty-free decoder")


@dataclass(frozen=True)
class RlpdResult:
    output: DecodeOutput
    rounds_used: int
    round_outputs: tuple


def reweight_llr(gamma, x_prev, alpha):
    """Objective for the next round; alpha = inf drops gamma entirely."""
    s = np.sign(np.asarray(x_prev, dtype=np.float64) - 0.5)
    if math.isinf(alpha):
        return -s
    return np.asarray(gamma, dtype=np.float64) - alpha * s


def rlpd(gamma, graph, cfg):
    """Multi-round reweighted LP decoding.

    Round 0 is plain LP decoding; any round that produces an integral
    solution ends the run (further reweighting has nothing to repair).
    Returns the final round's output plus the full per-round trace.
    """
    outputs = [decode(gamma, graph, cfg.inner)]
    while len(outputs) < cfg.rounds and not outputs[-1].integral:
        gamma_k = reweight_llr(gamma, outputs[-1].x_soft, cfg.alpha)
        outputs.append(decode(gamma_k, graph, cfg.inner))
    return RlpdResult(output=outputs[-1], rounds_used=len(outputs), round_outputs=tuple(outputs))


def rlpd_inf(gamma, graph, inner=DecoderConfig()):
    """Two rounds with the pure sign objective in round two."""
    cfg = RlpdConfig(alpha=math.inf, rounds=2, inner=inner)
    return rlpd(gamma, graph, cfg).output


@dataclass(frozen=True)
class KdhvbParams:
    """Reweighted-objective x-update parameters.

    ``t_set`` indexes the variables treated as trusted: those use weight
    c1 < 0, the rest c2 > 0.  ``received`` is the hard-decision word the
    objective is anchored to.  Selecting the trusted set is the caller's
    business.
    """

    t_set: np.ndarray
    c1: float
    c2: float
    received: np.ndarray

    def __post_init__(self):
        if not self.c1 < 0:
            raise ConfigError(f"c1 must be negative, got {self.c1}")
        if not self.c2 > 0:
            raise ConfigError(f"c2 must be positive, got {self.c2}")


def kdhvb_x_update(state, params, cfg, graph):
    """x-update for the weighted-distance objective; mutates state.x.

    Variable i minimizes c_v |x_i - y_i| plus the usual augmented terms,
    where v = 1 on the trusted set and 2 elsewhere.  The closed form is
    the accumulator sum_j (z_j^(i) - lam_j^(i)/mu) shifted by -c_v/mu for
    y_i = 0 and +c_v/mu for y_i = 1, divided by the degree and clipped.
    With c1 = c2 = 0 this is exactly the penalty-free LP x-update at
    gamma = 0.
    """
    received = np.asarray(params.received)
    if received.shape != (graph.n,):
        raise ValueError(f"received word has shape {received.shape}, expected ({graph.n},)")
    contrib = state.z - state.lam / cfg.mu
    acc = np.bincount(graph.edge_var, weights=contrib, minlength=graph.n)
    c = np.full(graph.n, params.c2)
    c[np.asarray(params.t_set, dtype=np.int64)] = params.c1
    shift = np.where(received == 0, -c, c) / cfg.mu
    state.t[:] = acc
    state.x[:] = np.clip((acc + shift) / graph.var_degrees, 0.0, 1.0)
    return state.x
