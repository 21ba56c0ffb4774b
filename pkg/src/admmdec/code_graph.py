"""Tanner graphs of binary linear codes, alist I/O, and GF(2) helpers.

A code is described by its sparse parity-check matrix H over GF(2), held
here as the bipartite adjacency between M check nodes and N variable
nodes.  The decoder needs fast per-edge access, so the graph also carries
a flattened edge layout (edges sorted by check, then by variable) that is
built once at construction time.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


class AlistError(ValueError):
    """Base class for alist parsing / graph validation failures."""


class MalformedHeaderError(AlistError):
    """Header lines missing, short, or not integers."""


class DegreeCountError(AlistError):
    """Declared degrees disagree with adjacency rows or with the maxima."""


class AsymmetricAdjacencyError(AlistError):
    """Variable->check rows and check->variable rows describe different graphs."""


class IndexRangeError(AlistError):
    """An adjacency entry falls outside 1..M or 1..N."""


class InvalidGraphError(AlistError):
    """Structural violation: duplicate edge, check degree < 2, or isolated variable."""


@dataclass(eq=False)
class TannerGraph:
    """Bipartite check/variable adjacency of a parity-check matrix.

    ``check_neighbors[j]`` lists the variables of check j in ascending
    order; ``var_neighbors[i]`` lists the checks of variable i.  The edge
    arrays give the flattened layout used by the decoder: edge e belongs
    to check ``edge_check[e]`` and variable ``edge_var[e]``, with the edges
    of check j occupying the slice ``check_ptr[j]:check_ptr[j+1]``.
    """

    n: int
    m: int
    check_neighbors: tuple
    var_neighbors: tuple
    check_degrees: np.ndarray = field(init=False)
    var_degrees: np.ndarray = field(init=False)
    edge_var: np.ndarray = field(init=False)
    edge_check: np.ndarray = field(init=False)
    check_ptr: np.ndarray = field(init=False)
    degree_groups: tuple = field(init=False)

    def __post_init__(self):
        self.check_degrees = np.array([len(r) for r in self.check_neighbors], dtype=np.int64)
        self.var_degrees = np.array([len(r) for r in self.var_neighbors], dtype=np.int64)
        self.edge_var = np.concatenate(self.check_neighbors).astype(np.int64) if self.m else np.zeros(0, np.int64)
        self.edge_check = np.repeat(np.arange(self.m), self.check_degrees)
        self.check_ptr = np.zeros(self.m + 1, dtype=np.int64)
        np.cumsum(self.check_degrees, out=self.check_ptr[1:])
        # Group checks by degree so the projection can run on (rows, d) blocks.
        groups = []
        for d in sorted(set(self.check_degrees.tolist())):
            rows = np.nonzero(self.check_degrees == d)[0]
            edge_idx = (self.check_ptr[rows][:, None] + np.arange(d)[None, :]).astype(np.int64)
            groups.append((int(d), rows, edge_idx))
        self.degree_groups = tuple(groups)
        self._rate = None

    # ----------------------------------------------------------- construction

    @classmethod
    def from_check_neighbors(cls, n, check_neighbors):
        """Build and validate a graph from per-check variable lists (0-based)."""
        m = len(check_neighbors)
        if n < 1 or m < 1:
            raise InvalidGraphError(f"need n >= 1 and m >= 1, got n={n} m={m}")
        rows = []
        var_lists = [[] for _ in range(n)]
        for j, raw in enumerate(check_neighbors):
            row = np.asarray(sorted(int(i) for i in raw), dtype=np.int64)
            if row.size and (row[0] < 0 or row[-1] >= n):
                raise IndexRangeError(f"check {j} references a variable outside 0..{n - 1}")
            if len(set(row.tolist())) != row.size:
                raise InvalidGraphError(f"check {j} lists a variable twice")
            if row.size < 2:
                raise InvalidGraphError(f"check {j} has degree {row.size}; checks need degree >= 2")
            rows.append(row)
            for i in row:
                var_lists[i].append(j)
        for i, lst in enumerate(var_lists):
            if not lst:
                raise InvalidGraphError(f"variable {i} participates in no check")
        cols = tuple(np.asarray(lst, dtype=np.int64) for lst in var_lists)
        return cls(n=n, m=m, check_neighbors=tuple(rows), var_neighbors=cols)

    @classmethod
    def from_parity_matrix(cls, h):
        """Build a graph from a dense 0/1 matrix (rows = checks)."""
        h = np.asarray(h)
        if h.ndim != 2:
            raise InvalidGraphError("parity-check matrix must be 2-D")
        neighbors = [np.nonzero(row)[0] for row in h]
        return cls.from_check_neighbors(h.shape[1], neighbors)

    # -------------------------------------------------------------- equality

    def __eq__(self, other):
        if not isinstance(other, TannerGraph):
            return NotImplemented
        return (
            self.n == other.n
            and self.m == other.m
            and all(np.array_equal(a, b) for a, b in zip(self.check_neighbors, other.check_neighbors))
        )

    # ------------------------------------------------------------- utilities

    def parity_check_matrix(self):
        """Dense uint8 copy of H, rows indexed by check."""
        h = np.zeros((self.m, self.n), dtype=np.uint8)
        h[self.edge_check, self.edge_var] = 1
        return h

    def rate(self):
        """Design rate k/n with k = dim of the GF(2) nullspace of H."""
        if self._rate is None:
            k = self.n - gf2_rank(self.parity_check_matrix())
            self._rate = k / self.n
        return self._rate


# ------------------------------------------------------------------ alist I/O


def _int_line(tokens, what):
    try:
        return [int(t) for t in tokens]
    except ValueError as exc:
        raise MalformedHeaderError(f"{what}: expected integers, got {tokens!r}") from exc


def parse_alist(text):
    """Parse alist text into a validated :class:`TannerGraph`.

    Layout: line 1 ``N M``; line 2 the maximum column/row degrees; lines 3
    and 4 the per-variable and per-check degrees; then N variable adjacency
    lines and M check adjacency lines, 1-based, zero padding ignored.
    """
    lines = [ln.split() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) < 4:
        raise MalformedHeaderError("alist needs at least 4 header lines")
    hdr = _int_line(lines[0], "line 1")
    if len(hdr) != 2:
        raise MalformedHeaderError(f"line 1 must be 'N M', got {lines[0]!r}")
    n, m = hdr
    if n < 1 or m < 1:
        raise MalformedHeaderError(f"N and M must be positive, got N={n} M={m}")
    maxdeg = _int_line(lines[1], "line 2")
    if len(maxdeg) != 2:
        raise MalformedHeaderError(f"line 2 must be 'max_col_deg max_row_deg', got {lines[1]!r}")
    if len(lines) != 4 + n + m:
        raise MalformedHeaderError(f"expected {4 + n + m} non-empty lines for N={n} M={m}, got {len(lines)}")
    col_deg = _int_line(lines[2], "line 3")
    row_deg = _int_line(lines[3], "line 4")
    if len(col_deg) != n:
        raise DegreeCountError(f"line 3 lists {len(col_deg)} column degrees, expected {n}")
    if len(row_deg) != m:
        raise DegreeCountError(f"line 4 lists {len(row_deg)} row degrees, expected {m}")
    if max(col_deg) != maxdeg[0] or max(row_deg) != maxdeg[1]:
        raise DegreeCountError(
            f"declared maxima {maxdeg} disagree with degree lists ({max(col_deg)}, {max(row_deg)})"
        )

    def read_rows(rows, degs, limit, kind):
        out = []
        for idx, (tokens, deg) in enumerate(zip(rows, degs)):
            entries = [e for e in _int_line(tokens, f"{kind} {idx + 1}") if e != 0]
            if len(entries) != deg:
                raise DegreeCountError(f"{kind} {idx + 1}: {len(entries)} entries but degree {deg} declared")
            for e in entries:
                if not 1 <= e <= limit:
                    raise IndexRangeError(f"{kind} {idx + 1}: entry {e} outside 1..{limit}")
            if len(set(entries)) != len(entries):
                raise InvalidGraphError(f"{kind} {idx + 1}: duplicate entry")
            out.append(sorted(e - 1 for e in entries))
        return out

    var_rows = read_rows(lines[4:4 + n], col_deg, m, "variable row")
    check_rows = read_rows(lines[4 + n:], row_deg, n, "check row")

    # Cross-check the two adjacency sections against each other.
    from_cols = [[] for _ in range(m)]
    for i, checks in enumerate(var_rows):
        for j in checks:
            from_cols[j].append(i)
    for j in range(m):
        if sorted(from_cols[j]) != check_rows[j]:
            raise AsymmetricAdjacencyError(f"check {j + 1}: variable rows and check rows disagree")

    return TannerGraph.from_check_neighbors(n, check_rows)


def serialize_alist(graph):
    """Alist text for a graph; zero-pads rows to the maximum degree."""
    max_col = int(graph.var_degrees.max())
    max_row = int(graph.check_degrees.max())
    out = [f"{graph.n} {graph.m}", f"{max_col} {max_row}"]
    out.append(" ".join(str(int(d)) for d in graph.var_degrees))
    out.append(" ".join(str(int(d)) for d in graph.check_degrees))
    for i in range(graph.n):
        row = [str(int(j) + 1) for j in graph.var_neighbors[i]]
        row += ["0"] * (max_col - len(row))
        out.append(" ".join(row))
    for j in range(graph.m):
        row = [str(int(i) + 1) for i in graph.check_neighbors[j]]
        row += ["0"] * (max_row - len(row))
        out.append(" ".join(row))
    return "\n".join(out) + "\n"


def load_alist(path):
    with open(path, "r", encoding="ascii") as fh:
        return parse_alist(fh.read())


# --------------------------------------------------------------- GF(2) algebra


def gf2_row_reduce(h):
    """Row-reduce a 0/1 matrix over GF(2); returns (rref, pivot columns)."""
    a = (np.asarray(h, dtype=np.uint8) & 1).copy()
    rows, cols = a.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        hits = np.nonzero(a[r:, c])[0]
        if hits.size == 0:
            continue
        piv = r + hits[0]
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        mask = a[:, c].copy()
        mask[r] = 0
        a[mask == 1] ^= a[r]
        pivots.append(c)
        r += 1
    return a, pivots


def gf2_rank(h):
    return len(gf2_row_reduce(h)[1])


def gf2_nullspace(h):
    """Basis of the GF(2) nullspace of h, one codeword per row (uint8)."""
    h = np.asarray(h, dtype=np.uint8) & 1
    _, cols = h.shape
    rref, pivots = gf2_row_reduce(h)
    free = [c for c in range(cols) if c not in pivots]
    basis = np.zeros((len(free), cols), dtype=np.uint8)
    for b, fc in enumerate(free):
        basis[b, fc] = 1
        for r, pc in enumerate(pivots):
            if rref[r, fc]:
                basis[b, pc] = 1
    return basis


def syndrome_ok(graph, word):
    """True iff every check has even parity over its neighborhood."""
    word = np.asarray(word)
    if word.shape != (graph.n,):
        raise ValueError(f"word has shape {word.shape}, expected ({graph.n},)")
    sums = np.add.reduceat(word[graph.edge_var].astype(np.int64), graph.check_ptr[:-1])
    return bool(np.all(sums % 2 == 0))


def sample_codewords(graph, count, seed):
    """Deterministically sample `count` codewords as a (count, n) uint8 array.

    Random GF(2) combinations of a nullspace basis; a full-rank H yields
    all-zero rows only.
    """
    if count < 0:
        raise ValueError("count must be >= 0")
    basis = gf2_nullspace(graph.parity_check_matrix())
    rng = np.random.default_rng(seed)
    if basis.shape[0] == 0:
        return np.zeros((count, graph.n), dtype=np.uint8)
    coeffs = rng.integers(0, 2, size=(count, basis.shape[0]), dtype=np.uint8)
    return (coeffs.astype(np.int64) @ basis.astype(np.int64) % 2).astype(np.uint8)
