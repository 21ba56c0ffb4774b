"""ADMM decoder core: LP decoding and its l1/l2 penalized variants.

The decoder minimizes gamma . x + sum_i g(x_i) subject to every check's
sub-vector lying in the parity polytope, by alternating a coordinate-wise
x-update, a replica update that projects each check's relaxed sub-vector
onto the polytope, and a dual ascent step.  g is zero for plain LP
decoding, g(x) = -alpha |x - 1/2| for the l1 penalty, and
g(x) = -alpha (x - 1/2)^2 for the l2 penalty; both push iterates away
from the fractional center of the cube.

Replicas and duals are stored flat, one entry per (check, variable) edge,
in check-major order; ``TannerGraph`` carries the index maps.  Plain
calls run a compiled kernel; passing an ``on_iteration`` callback selects
an equivalent pure-numpy loop so callers can observe every iterate.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np
from numba import njit

from .code_graph import syndrome_ok
from .parity_polytope import _simplex_project_rows, _worst_odd_set

PENALTY_KINDS = ("none", "l1", "l2")
_PENALTY_CODE = {"none": 0, "l1": 1, "l2": 2}

#: x is declared integral when every entry is within this of {0, 1}.
INTEGRALITY_TOL = 1e-5


class ConfigError(ValueError):
    """Decoder configuration rejected before any iteration runs."""


@dataclass(frozen=True)
class PenaltySpec:
    """Penalty family and strength; kind 'none' forces alpha = 0."""

    kind: str = "none"
    alpha: float = 0.0

    def __post_init__(self):
        if self.kind not in PENALTY_KINDS:
            raise ConfigError(f"penalty kind must be one of {PENALTY_KINDS}, got {self.kind!r}")
        if self.kind == "none" and self.alpha != 0.0:
            raise ConfigError("penalty 'none' requires alpha = 0")
        if not self.alpha >= 0.0:
            raise ConfigError(f"alpha must be >= 0, got {self.alpha}")

    @classmethod
    def none(cls):
        return cls("none", 0.0)

    @classmethod
    def l1(cls, alpha=0.6):
        return cls("l1", alpha)

    @classmethod
    def l2(cls, alpha=0.8):
        return cls("l2", alpha)


@dataclass(frozen=True)
class DecoderConfig:
    """ADMM parameters.

    ``rho`` is the over-relaxation weight applied to the replica target;
    rho = 1 recovers the plain update and 1.9 is a good default.
    """

    penalty: PenaltySpec = PenaltySpec.none()
    mu: float = 3.0
    epsilon: float = 1e-5
    t_max: int = 1000
    rho: float = 1.9

    def __post_init__(self):
        if not self.mu > 0:
            raise ConfigError(f"mu must be positive, got {self.mu}")
        if not self.epsilon > 0:
            raise ConfigError(f"epsilon must be positive, got {self.epsilon}")
        if not (isinstance(self.t_max, int) and self.t_max >= 1):
            raise ConfigError(f"t_max must be an integer >= 1, got {self.t_max}")
        if not 0 < self.rho <= 2:
            raise ConfigError(f"rho must lie in (0, 2], got {self.rho}")

    def validate_for_graph(self, graph):
        """Graph-dependent checks; the l2 update needs a positive denominator."""
        if self.penalty.kind == "l2":
            dv_min = int(graph.var_degrees.min())
            if dv_min - 2.0 * self.penalty.alpha / self.mu <= 0.0:
                raise ConfigError(
                    f"l2 penalty alpha = {self.penalty.alpha} too large: requires "
                    f"alpha < min_degree * mu / 2 = {dv_min * self.mu / 2}"
                )


@dataclass
class AdmmState:
    """Mutable iterate: x over variables, z/lam over edges, t the x-update accumulator."""

    x: np.ndarray
    z: np.ndarray
    lam: np.ndarray
    t: np.ndarray

    @classmethod
    def default_init(cls, graph):
        """Fresh start: replicas at the cube center, duals at zero."""
        e = graph.edge_var.size
        return cls(
            x=np.full(graph.n, 0.5),
            z=np.full(e, 0.5),
            lam=np.zeros(e),
            t=np.zeros(graph.n),
        )

    @classmethod
    def from_codeword(cls, graph, word):
        """Start at a binary word: x = word, replicas = its per-check copies, duals 0."""
        word = np.asarray(word, dtype=np.float64)
        return cls(
            x=word.copy(),
            z=word[graph.edge_var].copy(),
            lam=np.zeros(graph.edge_var.size),
            t=np.zeros(graph.n),
        )

    def copy(self):
        return AdmmState(self.x.copy(), self.z.copy(), self.lam.copy(), self.t.copy())


@dataclass(frozen=True)
class DecodeOutput:
    x_soft: np.ndarray
    x_hard: np.ndarray
    iterations: int
    converged: bool
    integral: bool
    valid_codeword: bool


def x_from_accumulator(t, var_deg, cfg):
    """Solve the per-variable subproblem given accumulator t and degrees.

    t_i collects sum_j (z_j^(i) - lam_j^(i)/mu) - gamma_i/mu over the
    checks of variable i.  With no penalty the minimizer is t_i/deg_i
    clipped to [0, 1].  The l1 penalty shifts t_i by +-alpha/mu away from
    the center, choosing the stationary point farther from 1/2 (threshold
    at deg_i/2); the l2 penalty rescales the denominator.
    """
    t = np.asarray(t, dtype=np.float64)
    d = np.asarray(var_deg, dtype=np.float64)
    kind = cfg.penalty.kind
    if kind == "none":
        raw = t / d
    elif kind == "l1":
        shift = cfg.penalty.alpha / cfg.mu
        raw = np.where(t >= d / 2.0, t + shift, t - shift) / d
    elif kind == "l2":
        shift = cfg.penalty.alpha / cfg.mu
        raw = (t - shift) / (d - 2.0 * shift)
    else:  # pragma: no cover - guarded by PenaltySpec
        raise ConfigError(f"unknown penalty kind {kind!r}")
    return np.clip(raw, 0.0, 1.0)


def x_update(state, gamma, cfg, graph):
    """Refresh state.x in place from the current replicas and duals."""
    contrib = state.z - state.lam / cfg.mu
    t = np.bincount(graph.edge_var, weights=contrib, minlength=graph.n)
    t -= np.asarray(gamma, dtype=np.float64) / cfg.mu
    state.t[:] = t
    state.x[:] = x_from_accumulator(t, graph.var_degrees, cfg)
    return state.x


def _project_edges(v, graph, out):
    """Parity-polytope projection of per-check slices of the edge vector v."""
    for _, _, edge_idx in graph.degree_groups:
        block = v[edge_idx]
        z = np.clip(block, 0.0, 1.0)
        theta = _worst_odd_set(z)
        sgn = np.where(theta, 1.0, -1.0)
        card = theta.sum(axis=1)
        bad = (sgn * z).sum(axis=1) > (card - 1).astype(np.float64)
        if np.any(bad):
            rows = np.nonzero(bad)[0]
            q = np.where(theta[rows], 1.0 - block[rows], block[rows])
            w = _simplex_project_rows(q)
            z[rows] = np.where(theta[rows], 1.0 - w, w)
        out[edge_idx] = z
    return out


def z_lambda_update(state, cfg, graph):
    """Replica and dual step; mutates state and returns squared residuals.

    Each check's relaxed target is rho * (P_j x) + (1 - rho) * z_old; the
    new replica is the parity-polytope projection of target + lam/mu and
    the dual moves by mu * (target - z_new).  Returns
    (primal_sq, z_change_sq): the squared norms of P_j x - z_new summed
    over checks, and of the replica change.
    """
    xe = state.x[graph.edge_var]
    w = cfg.rho * xe + (1.0 - cfg.rho) * state.z
    v = w + state.lam / cfg.mu
    z_new = _project_edges(v, graph, np.empty_like(v))
    state.lam += cfg.mu * (w - z_new)
    dz = z_new - state.z
    state.z[:] = z_new
    primal_sq = float(((xe - z_new) ** 2).sum())
    z_change_sq = float((dz**2).sum())
    return primal_sq, z_change_sq


@njit(cache=True)
def _decode_kernel(gamma, edge_var, check_ptr, var_deg, pen, alpha, mu, eps, t_max, rho, max_d, x, z, lam, t):
    """Compiled full-decode loop; mirrors x_update / z_lambda_update exactly."""
    n = gamma.size
    m = check_ptr.size - 1
    n_edges = edge_var.size
    budget = eps * eps * n_edges
    zb = np.empty(max_d)
    vb = np.empty(max_d)
    wb = np.empty(max_d)
    qb = np.empty(max_d)
    sb = np.empty(max_d)
    th = np.empty(max_d, np.bool_)
    iterations = t_max
    converged = False
    for k in range(1, t_max + 1):
        for i in range(n):
            t[i] = 0.0
        for e in range(n_edges):
            t[edge_var[e]] += z[e] - lam[e] / mu
        for i in range(n):
            t[i] -= gamma[i] / mu
            d = var_deg[i]
            if pen == 0:
                raw = t[i] / d
            elif pen == 1:
                s = alpha / mu
                raw = (t[i] + (s if t[i] >= d / 2.0 else -s)) / d
            else:
                s = alpha / mu
                raw = (t[i] - s) / (d - 2.0 * s)
            x[i] = min(1.0, max(0.0, raw))
        primal = 0.0
        dzs = 0.0
        for j in range(m):
            lo = check_ptr[j]
            d = check_ptr[j + 1] - lo
            count = 0
            amin = 0
            best = 1e300
            for a in range(d):
                e = lo + a
                w = rho * x[edge_var[e]] + (1.0 - rho) * z[e]
                wb[a] = w
                vb[a] = w + lam[e] / mu
                zz = min(1.0, max(0.0, vb[a]))
                zb[a] = zz
                th[a] = zz > 0.5
                if th[a]:
                    count += 1
                gap = abs(zz - 0.5)
                if gap < best:
                    best = gap
                    amin = a
            if count % 2 == 0:
                th[amin] = not th[amin]
            card = 0
            lhs = 0.0
            for a in range(d):
                if th[a]:
                    card += 1
                    lhs += zb[a]
                else:
                    lhs -= zb[a]
            if lhs > card - 1.0:
                for a in range(d):
                    qb[a] = 1.0 - vb[a] if th[a] else vb[a]
                    sb[a] = qb[a]
                for a in range(1, d):
                    key = sb[a]
                    b = a - 1
                    while b >= 0 and sb[b] < key:
                        sb[b + 1] = sb[b]
                        b -= 1
                    sb[b + 1] = key
                css = 0.0
                tau = 0.0
                for a in range(d):
                    css += sb[a]
                    val = (css - 1.0) / (a + 1)
                    if sb[a] - val > 0.0:
                        tau = val
                for a in range(d):
                    wv = qb[a] - tau
                    if wv < 0.0:
                        wv = 0.0
                    zb[a] = 1.0 - wv if th[a] else wv
            for a in range(d):
                e = lo + a
                lam[e] += mu * (wb[a] - zb[a])
                diff = x[edge_var[e]] - zb[a]
                primal += diff * diff
                dd = zb[a] - z[e]
                dzs += dd * dd
                z[e] = zb[a]
        if k < t_max and primal < budget and dzs < budget:
            iterations = k
            converged = True
            break
    return iterations, converged


def decode(gamma, graph, cfg, init=None, on_iteration=None):
    """Run the ADMM decoder on LLR vector gamma.

    init: optional starting :class:`AdmmState` (copied); default starts
    replicas at 0.5 and duals at zero.  on_iteration, if given, is called
    as on_iteration(k, state) after each full iteration; the state's
    buffers are reused, so callbacks must copy what they keep.

    Convergence requires both squared residuals to drop below
    epsilon^2 * (total edge count) strictly before t_max iterations;
    `converged` is False exactly when the iteration budget was exhausted.
    """
    gamma = np.asarray(gamma, dtype=np.float64)
    if gamma.shape != (graph.n,):
        raise ValueError(f"gamma has shape {gamma.shape}, expected ({graph.n},)")
    cfg.validate_for_graph(graph)
    state = init.copy() if init is not None else AdmmState.default_init(graph)
    if on_iteration is None:
        iterations, converged = _decode_kernel(
            gamma,
            graph.edge_var,
            graph.check_ptr,
            graph.var_degrees.astype(np.float64),
            _PENALTY_CODE[cfg.penalty.kind],
            cfg.penalty.alpha,
            cfg.mu,
            cfg.epsilon,
            cfg.t_max,
            cfg.rho,
            int(graph.check_degrees.max()),
            state.x,
            state.z,
            state.lam,
            state.t,
        )
    else:
        budget = cfg.epsilon**2 * float(graph.check_degrees.sum())
        iterations = cfg.t_max
        converged = False
        for k in range(1, cfg.t_max + 1):
            x_update(state, gamma, cfg, graph)
            primal_sq, z_change_sq = z_lambda_update(state, cfg, graph)
            on_iteration(k, state)
            if k < cfg.t_max and primal_sq < budget and z_change_sq < budget:
                iterations = k
                converged = True
                break
    x_soft = state.x.copy()
    x_hard = (x_soft > 0.5).astype(np.uint8)
    integral = float(np.minimum(x_soft, 1.0 - x_soft).max()) <= INTEGRALITY_TOL
    return DecodeOutput(
        x_soft=x_soft,
        x_hard=x_hard,
        iterations=iterations,
        converged=converged,
        integral=integral,
        valid_codeword=syndrome_ok(graph, x_hard),
    )


def weak_ml_test(candidate, gamma, graph, cfg):
    """Necessary-condition check that a codeword is the ML codeword.

    Restarts the penalty-free decoder from the candidate itself (replicas
    at its per-check copies, duals zero).  If the run converges back to
    the candidate the test passes; failing it proves the candidate is not
    the LP (hence not the ML) optimum, while passing is only necessary.
    """
    candidate = np.asarray(candidate)
    if not syndrome_ok(graph, candidate):
        raise ValueError("weak ML test requires a valid codeword candidate")
    lp_cfg = replace(cfg, penalty=PenaltySpec.none())
    out = decode(gamma, graph, lp_cfg, init=AdmmState.from_codeword(graph, candidate))
    return bool(out.converged and np.array_equal(out.x_hard, candidate.astype(np.uint8)))
