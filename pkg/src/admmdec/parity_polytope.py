"""Euclidean projection onto the parity polytope.

The parity polytope of dimension d is the convex hull of all even-weight
binary vectors of length d.  Its facet description is the unit box plus,
for every odd-cardinality set S, the inequality

    sum_{i in S} z_i - sum_{i not in S} z_i <= |S| - 1.

At most one of those parity inequalities can be violated by a point of
the box, and it is found by a sort-free "worst odd set" search: take the
coordinates above 1/2 and, if that set has even size, toggle membership
of the coordinate nearest 1/2.  The projection is then either the box
projection (when feasible) or the projection onto the box intersected
with that single facet, which mirrors onto the probability simplex and
is solved by the classic sort/cumulative-sum rule.

All routines operate on batches: ``project_rows`` projects each row of a
(G, d) array independently, which is what the decoder's check-node update
uses.
"""

from __future__ import annotations

import numpy as np


def _worst_odd_set(u):
    """Boolean (G, d) mask of the most-violated odd set for each row.

    u must lie in the unit box.  Ties in the parity-fixing toggle go to
    the lowest index (argmin picks the first minimum).
    """
    theta = u > 0.5
    even = (theta.sum(axis=1) % 2) == 0
    if np.any(even):
        flip_at = np.argmin(np.abs(u - 0.5), axis=1)
        rows = np.nonzero(even)[0]
        theta[rows, flip_at[rows]] ^= True
    return theta


def _simplex_project_rows(q):
    """Project each row of q onto the probability simplex {w >= 0, sum w = 1}."""
    d = q.shape[1]
    s = -np.sort(-q, axis=1)
    css = np.cumsum(s, axis=1)
    k = np.arange(1, d + 1, dtype=np.float64)
    support = (s - (css - 1.0) / k) > 0.0
    rho = support.sum(axis=1)
    tau = (css[np.arange(q.shape[0]), rho - 1] - 1.0) / rho
    return np.maximum(q - tau[:, None], 0.0)


def project_rows(v):
    """Row-wise Euclidean projection of a (G, d) array onto the parity polytope."""
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 2 or v.shape[1] < 2:
        raise ValueError(f"expected a (G, d >= 2) array, got shape {v.shape}")
    z = np.clip(v, 0.0, 1.0)
    theta = _worst_odd_set(z)
    sgn = np.where(theta, 1.0, -1.0)
    card = theta.sum(axis=1)
    bad = (sgn * z).sum(axis=1) > (card - 1).astype(np.float64)
    if np.any(bad):
        rows = np.nonzero(bad)[0]
        # Mirror coordinates in S, so the active facet becomes sum q = 1
        # after the substitution w = 1 - mirrored z; the cap w <= 1 holds
        # automatically on the simplex.
        q = np.where(theta[rows], 1.0 - v[rows], v[rows])
        w = _simplex_project_rows(q)
        z[rows] = np.where(theta[rows], 1.0 - w, w)
    return z


def project_parity_polytope(v):
    """Euclidean projection of a single length-d vector, d >= 2."""
    v = np.asarray(v, dtype=np.float64)
    if v.ndim != 1:
        raise ValueError(f"expected a 1-D vector, got shape {v.shape}")
    return project_rows(v[None, :])[0]


def is_in_parity_polytope(x, tol=1e-7):
    """Membership test: within `tol` of the box and of the worst facet."""
    x = np.asarray(x, dtype=np.float64)
    if x.ndim != 1 or x.size < 2:
        raise ValueError(f"expected a 1-D vector of length >= 2, got shape {x.shape}")
    if np.any(x < -tol) or np.any(x > 1.0 + tol):
        return False
    u = np.clip(x, 0.0, 1.0)
    theta = _worst_odd_set(u[None, :])[0]
    lhs = x[theta].sum() - x[~theta].sum()
    return bool(lhs <= theta.sum() - 1 + tol)


# ----------------------------------------------------------- test-support oracle
#
# The routines below are reference implementations for the test suite; the
# decoder never calls them.  They share nothing with the fast path above
# except numpy.


def even_weight_vertices(d):
    """All even-weight binary vectors of length d, one per row (2^(d-1) rows)."""
    if d < 1:
        raise ValueError("d must be >= 1")
    count = 1 << d
    idx = np.arange(count, dtype=np.uint32)
    bits = ((idx[:, None] >> np.arange(d, dtype=np.uint32)[None, :]) & 1).astype(np.uint8)
    even = bits.sum(axis=1) % 2 == 0
    return bits[even]


def variational_certificate(v, z, tol=1e-9):
    """Max over even vertices u of (v - z) . (u - z); <= tol certifies optimality."""
    v = np.asarray(v, dtype=np.float64)
    z = np.asarray(z, dtype=np.float64)
    verts = even_weight_vertices(v.size).astype(np.float64)
    gaps = (verts - z[None, :]) @ (v - z)
    return float(gaps.max()) <= tol


def _odd_sign_rows(d):
    """(K, d) matrix of +-1 rows, one per odd-cardinality subset."""
    count = 1 << d
    idx = np.arange(count, dtype=np.uint32)
    bits = ((idx[:, None] >> np.arange(d, dtype=np.uint32)[None, :]) & 1).astype(np.int8)
    odd = bits.sum(axis=1) % 2 == 1
    return np.where(bits[odd] == 1, 1.0, -1.0)


def _facet_membership(z, signs, card, tol):
    """True if z satisfies the box and every parity facet within tol."""
    if np.any(z < -tol) or np.any(z > 1 + tol):
        return False
    return bool(np.all(signs @ z <= card - 1 + tol))


def variational_certificate_rows(v_rows, z_rows):
    """Per-row max over even vertices u of (v - z) . (u - z)."""
    v = np.asarray(v_rows, dtype=np.float64)
    z = np.asarray(z_rows, dtype=np.float64)
    verts = even_weight_vertices(v.shape[1]).astype(np.float64)
    return (v - z) @ verts.T - ((v - z) * z).sum(axis=1, keepdims=True)


def oracle_project_rows(v_rows):
    """Batched `oracle_project_bruteforce`: same facet enumeration,
    multiplier bisection, feasible minimum-distance choice and vertex
    certificate, vectorized across rows so property suites can afford
    thousands of points per dimension.
    """
    v = np.asarray(v_rows, dtype=np.float64)
    if v.ndim != 2 or not 2 <= v.shape[1] <= 8:
        raise ValueError(f"oracle supports (P, d) arrays with 2 <= d <= 8, got shape {v.shape}")
    d = v.shape[1]
    signs = _odd_sign_rows(d)
    rhs = signs.clip(min=0).sum(axis=1) - 1.0
    boxed = np.clip(v, 0.0, 1.0)
    box_ok = np.all(boxed @ signs.T <= rhs + 1e-11, axis=1)
    best = boxed.copy()
    best_dist = np.where(box_ok, ((boxed - v) ** 2).sum(axis=1), np.inf)
    for a, t in zip(signs, rhs):
        viol = ~box_ok & (boxed @ a > t)
        if not viol.any():
            continue
        vv = v[viol]
        lo = np.zeros(vv.shape[0])
        hi = np.abs(vv).max(axis=1) + d + 2.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            still = np.clip(vv - mid[:, None] * a, 0.0, 1.0) @ a > t
            lo = np.where(still, mid, lo)
            hi = np.where(still, hi, mid)
        cand = np.clip(vv - hi[:, None] * a, 0.0, 1.0)
        ok = np.all(cand @ signs.T <= rhs + 1e-11, axis=1)
        dist = ((cand - vv) ** 2).sum(axis=1)
        rows = np.nonzero(viol)[0]
        take = ok & (dist < best_dist[rows])
        best[rows[take]] = cand[take]
        best_dist[rows[take]] = dist[take]
    if not np.all(np.isfinite(best_dist)):
        raise RuntimeError("oracle found no feasible candidate for some row")
    if float(variational_certificate_rows(v, best).max()) > 1e-9:
        raise RuntimeError("oracle candidate failed the variational certificate")
    return best


def oracle_project_bruteforce(v):
    """Certified reference projection for d <= 8.

    Enumerates every parity facet, solves each candidate equality
    projection by bisection on the Lagrange multiplier, keeps the
    feasible candidate of least distance, and verifies the variational
    inequality against all even-weight vertices before returning.
    """
    v = np.asarray(v, dtype=np.float64)
    d = v.size
    if v.ndim != 1 or not 2 <= d <= 8:
        raise ValueError(f"oracle supports 1-D vectors with 2 <= d <= 8, got shape {v.shape}")
    signs = _odd_sign_rows(d)
    card = signs.clip(min=0).sum(axis=1)
    candidates = [np.clip(v, 0.0, 1.0)]
    for a, s in zip(signs, card):
        t = s - 1.0
        if a @ np.clip(v, 0.0, 1.0) <= t:
            continue
        lo, hi = 0.0, float(np.abs(v).max()) + d + 2.0
        for _ in range(200):
            mid = 0.5 * (lo + hi)
            if a @ np.clip(v - mid * a, 0.0, 1.0) > t:
                lo = mid
            else:
                hi = mid
        candidates.append(np.clip(v - hi * a, 0.0, 1.0))
    feasible = [z for z in candidates if _facet_membership(z, signs, card, 1e-11)]
    if not feasible:
        raise RuntimeError("oracle found no feasible candidate")
    best = min(feasible, key=lambda z: float(((z - v) ** 2).sum()))
    if not variational_certificate(v, best, tol=1e-9):
        raise RuntimeError("oracle candidate failed the variational certificate")
    return best
