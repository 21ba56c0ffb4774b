"""Channel models, log-likelihood ratios, and codeword symmetry maps.

Bits are BPSK-modulated as 0 -> +1, 1 -> -1.  LLRs follow the decoder's
sign convention: positive means "bit 0 more likely", so the decoder
minimizes gamma . x over the relaxed codeword polytope.

Gaussian draws come from numpy's ``default_rng`` (PCG64 + ziggurat
normal), so a given integer seed reproduces the exact same noise on any
platform with the same numpy build.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class AwgnParams:
    """Real AWGN with noise standard deviation ``sigma`` per dimension."""

    sigma: float

    def __post_init__(self):
        if not self.sigma > 0:
            raise ValueError(f"sigma must be positive, got {self.sigma}")


@dataclass(frozen=True)
class BscParams:
    """Binary symmetric channel with crossover probability ``p``."""

    p: float

    def __post_init__(self):
        if not 0 < self.p < 0.5:
            raise ValueError(f"p must lie in (0, 0.5), got {self.p}")


def awgn_transmit_zero(graph, ch, seed):
    """Receive vector for the all-zero codeword: y = 1 + sigma * N(0, I)."""
    rng = np.random.default_rng(seed)
    return 1.0 + ch.sigma * rng.standard_normal(graph.n)


def awgn_llr(y, ch):
    """LLR vector gamma = 2 y / sigma^2."""
    return 2.0 * np.asarray(y, dtype=np.float64) / (ch.sigma**2)


def bsc_llr(received, ch):
    """Per-bit LLR for hard-decision input: +log((1-p)/p) for a received 0."""
    received = np.asarray(received)
    mag = math.log((1.0 - ch.p) / ch.p)
    return np.where(received == 0, mag, -mag)


def relative_vector(c, a):
    """Mirror a around the codeword c: entries with c_i = 1 map to 1 - a_i.

    An involution; with c all-zero it is the identity.
    """
    c = np.asarray(c)
    a = np.asarray(a, dtype=np.float64)
    if c.shape != a.shape:
        raise ValueError(f"shape mismatch: {c.shape} vs {a.shape}")
    return np.where(c == 1, 1.0 - a, a)


def symmetry_map_awgn(c, y):
    """Map a receive vector for codeword c to the equivalent one for all-zero.

    Flips the sign of y_i wherever c_i = 1; the channel density is
    preserved because the Gaussian is symmetric about its mean.
    """
    c = np.asarray(c)
    y = np.asarray(y, dtype=np.float64)
    if c.shape != y.shape:
        raise ValueError(f"shape mismatch: {c.shape} vs {y.shape}")
    return np.where(c == 1, -y, y)
