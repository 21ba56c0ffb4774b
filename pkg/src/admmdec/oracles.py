"""Brute-force references and consistency checkers used by the tests.

Nothing here is needed to decode; the CLI never imports this module.
The routines trade speed for independence so the test suite can compare
the production paths against explicit enumeration.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .admm import decode
from .channels import awgn_llr, relative_vector, symmetry_map_awgn
from .code_graph import gf2_nullspace


def enumerate_codewords(graph, limit_dim=20):
    """All codewords of the graph's code, one per row; dimension capped."""
    basis = gf2_nullspace(graph.parity_check_matrix())
    k = basis.shape[0]
    if k > limit_dim:
        raise ValueError(f"code dimension {k} exceeds enumeration cap {limit_dim}")
    count = 1 << k
    coeffs = ((np.arange(count, dtype=np.uint32)[:, None] >> np.arange(k, dtype=np.uint32)[None, :]) & 1).astype(
        np.uint8
    )
    return (coeffs.astype(np.int64) @ basis.astype(np.int64) % 2).astype(np.uint8)


def ml_bruteforce(gamma, graph, tie_tol=1e-9):
    """Exact ML decoding by enumeration: argmin gamma . c over all codewords.

    Returns (codeword, unique) where unique is False when another
    codeword scores within tie_tol of the minimum.
    """
    gamma = np.asarray(gamma, dtype=np.float64)
    words = enumerate_codewords(graph)
    scores = words.astype(np.float64) @ gamma
    best = int(np.argmin(scores))
    unique = int(np.sum(scores <= scores[best] + tie_tol)) == 1
    return words[best].copy(), unique


def oracle_min_confusion_halfspace(omega, sigma, penalty, n_len):
    """Independent reference for the minimum confusion noise.

    Works directly from the decoder preference margin

        m(n) = [gamma(n) . omega + sum_i g(omega_i)] - n_len * g(0),

    with gamma(n) = 2 (1 - n) / sigma^2, and never rearranges it: m is
    affine in n, so probing it at the origin and at each unit vector
    recovers the exact offset and gradient, and the least-norm point of
    the failure halfspace {m <= 0} is the projection of the origin onto
    its boundary hyperplane.
    """
    omega = np.asarray(omega, dtype=np.float64)

    if penalty.kind == "none":
        def g(x):
            return np.zeros_like(x)
    elif penalty.kind == "l1":
        def g(x):
            return -penalty.alpha * np.abs(x - 0.5)
    else:
        def g(x):
            return -penalty.alpha * (x - 0.5) ** 2

    g_zero = n_len * float(g(np.zeros(1))[0])

    def margin(n):
        gamma = 2.0 * (1.0 - n) / (sigma * sigma)
        return float(gamma @ omega) + float(g(omega).sum()) - g_zero

    offset = margin(np.zeros(n_len))
    grad = np.array([margin(np.eye(n_len)[i]) for i in range(n_len)]) - offset
    return -(offset / float(grad @ grad)) * grad


@dataclass(frozen=True)
class EquivarianceReport:
    max_x_dev: float
    max_z_dev: float
    max_lambda_dev: float
    iterations_equal: bool
    iterations: tuple


def equivariance_check(c, y, ch, cfg, graph):
    """Compare a decode of y against the mirrored decode of its zero-codeword image.

    Runs the decoder on gamma(y) and on gamma(symmetry_map(c, y)), and
    measures, iteration by iteration, how far the first run's iterates
    are from the mirror image of the second run's: x vs the c-relative
    vector, z likewise edge-wise, and lambda vs its edge-wise negation
    (duals flip sign exactly on edges whose variable is flipped).  For
    exact arithmetic all deviations would be zero at every iteration and
    both runs would stop together.
    """
    c = np.asarray(c)
    trace_a, trace_b = [], []

    def collect(trace):
        return lambda k, state: trace.append((state.x.copy(), state.z.copy(), state.lam.copy()))

    out_a = decode(awgn_llr(y, ch), graph, cfg, on_iteration=collect(trace_a))
    y0 = symmetry_map_awgn(c, y)
    out_b = decode(awgn_llr(y0, ch), graph, cfg, on_iteration=collect(trace_b))

    c_edge = c[graph.edge_var]
    max_x = max_z = max_lam = 0.0
    for (xa, za, la), (xb, zb, lb) in zip(trace_a, trace_b):
        max_x = max(max_x, float(np.abs(xa - relative_vector(c, xb)).max()))
        max_z = max(max_z, float(np.abs(za - np.where(c_edge == 1, 1.0 - zb, zb)).max()))
        max_lam = max(max_lam, float(np.abs(la - np.where(c_edge == 1, -lb, lb)).max()))
    return EquivarianceReport(
        max_x_dev=max_x,
        max_z_dev=max_z,
        max_lambda_dev=max_lam,
        iterations_equal=out_a.iterations == out_b.iterations and out_a.converged == out_b.converged,
        iterations=(out_a.iterations, out_b.iterations),
    )
