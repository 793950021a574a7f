"""Magic unitaries with coefficients in M_d(C): validation, preservation checks and transport.

A magic unitary here is a grid ``entries[a, x]`` of d x d complex matrices,
rows indexed by the vertices of H and columns by the vertices of G (both in
sorted order). Norms are spectral norms.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Iterable, List, Mapping, Optional, Sequence, Tuple

import numpy as np

from .anchored import AnchoredGraph, gamma, rho, split, zbar
from .blocks import block_decomposition, block_tree, classify_anchor
from .graph import (
    Graph,
    GraphError,
    VertexId,
    VertexLike,
    adjacency_matrix,
    connected_components,
    distance_matrix,
    vid,
    walk_count_tensor,
)

DEFAULT_TOLERANCE = 1e-9


class DimensionMismatch(GraphError):
    pass


class IndexMismatch(GraphError):
    pass


class NotBijective(GraphError):
    pass


class NotAProjection(GraphError):
    pass


class PartitionNotPreserved(GraphError):
    pass


class EmptyCell(GraphError):
    pass


class PreconditionFailed(GraphError):
    def __init__(self, check: str, detail: str = ""):
        super().__init__(f"precondition failed: {check}" + (f" ({detail})" if detail else ""))
        self.check = check


def opnorm(m: np.ndarray) -> np.ndarray:
    """Spectral norm of a matrix, or of each matrix in a stack."""
    m = np.asarray(m)
    if m.size == 0:
        return np.zeros(m.shape[:-2])
    return np.linalg.norm(m, ord=2, axis=(-2, -1))


def _max(a: np.ndarray) -> float:
    return float(np.max(a)) if np.size(a) else 0.0


class MagicUnitary:
    """Immutable grid of d x d complex matrices indexed by (rows, cols)."""

    __slots__ = ("rows", "cols", "entries", "tolerance", "_row_index", "_col_index")

    def __init__(self, rows: Sequence[VertexLike], cols: Sequence[VertexLike], entries,
                 tolerance: float = DEFAULT_TOLERANCE):
        arr = np.array(entries, dtype=complex)
        rows = tuple(vid(a) for a in rows)
        cols = tuple(vid(x) for x in cols)
        if arr.ndim != 4 or arr.shape[2] != arr.shape[3]:
            raise DimensionMismatch(f"entries must have shape (rows, cols, d, d), got {arr.shape}")
        if arr.shape[:2] != (len(rows), len(cols)):
            raise DimensionMismatch(f"grid is {arr.shape[:2]} but index lists have sizes {(len(rows), len(cols))}")
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            raise IndexMismatch("duplicate index in rows or cols")
        if not np.all(np.isfinite(arr)):
            raise GraphError("entries must be finite")
        if not tolerance > 0:
            raise GraphError("tolerance must be positive")
        arr.flags.writeable = False
        self.rows = rows
        self.cols = cols
        self.entries = arr
        self.tolerance = float(tolerance)
        self._row_index = {a: i for i, a in enumerate(rows)}
        self._col_index = {x: i for i, x in enumerate(cols)}

    @property
    def dim(self) -> int:
        return self.entries.shape[2]

    @property
    def shape(self) -> Tuple[int, int]:
        return self.entries.shape[:2]

    def entry(self, a: VertexLike, x: VertexLike) -> np.ndarray:
        return self.entries[self._row_index[vid(a)], self._col_index[vid(x)]]

    def row_position(self, a: VertexLike) -> int:
        return self._row_index[vid(a)]

    def col_position(self, x: VertexLike) -> int:
        return self._col_index[vid(x)]

    def with_tolerance(self, tolerance: float) -> "MagicUnitary":
        return MagicUnitary(self.rows, self.cols, self.entries, tolerance)

    def norms(self) -> np.ndarray:
        return opnorm(self.entries)

    def __eq__(self, other) -> bool:
        if not isinstance(other, MagicUnitary):
            return NotImplemented
        return (self.rows == other.rows and self.cols == other.cols
                and self.entries.shape == other.entries.shape and np.array_equal(self.entries, other.entries))

    def __repr__(self) -> str:
        return f"MagicUnitary({len(self.rows)}x{len(self.cols)}, d={self.dim})"


@dataclass(frozen=True)
class CheckResult:
    passed: bool
    residual: float

    def __bool__(self) -> bool:
        return self.passed


@dataclass(frozen=True)
class MuReport:
    max_projection_residual: float
    max_row_residual: float
    max_col_residual: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return max(self.max_projection_residual, self.max_row_residual, self.max_col_residual) <= self.tolerance

    def __bool__(self) -> bool:
        return self.passed

    def as_dict(self) -> dict:
        return {
            "max_projection_residual": self.max_projection_residual,
            "max_row_residual": self.max_row_residual,
            "max_col_residual": self.max_col_residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }


def projection_residual(m: np.ndarray) -> float:
    m = np.asarray(m, dtype=complex)
    return max(_max(opnorm(m @ m - m)), _max(opnorm(m.conj().swapaxes(-1, -2) - m)))


def validate_mu(u: MagicUnitary, unit: Optional[np.ndarray] = None, tolerance: Optional[float] = None) -> MuReport:
    """Projection, row-sum and column-sum residuals.

    ``unit`` replaces the identity as the target of the row and column sums,
    which is how sub-blocks of a magic unitary are checked.
    """
    tol = u.tolerance if tolerance is None else tolerance
    d = u.dim
    target = np.eye(d, dtype=complex) if unit is None else np.asarray(unit, dtype=complex)
    if target.shape != (d, d):
        raise DimensionMismatch(f"unit has shape {target.shape}, entries are {d}x{d}")
    e = u.entries
    proj = projection_residual(e) if e.size else 0.0
    rows = _max(opnorm(e.sum(axis=1) - target)) if e.shape[0] else 0.0
    cols = _max(opnorm(e.sum(axis=0) - target)) if e.shape[1] else 0.0
    return MuReport(proj, rows, cols, tol)


def _check_indices(u: MagicUnitary, g: Graph, h: Graph) -> None:
    if u.cols != g.vertices:
        raise IndexMismatch("columns must be the vertices of G in sorted order")
    if u.rows != h.vertices:
        raise IndexMismatch("rows must be the vertices of H in sorted order")


def qi_residual(u: MagicUnitary, g: Graph, h: Graph) -> float:
    """Largest entry norm of ``U Adj(G) - Adj(H) U``."""
    _check_indices(u, g, h)
    ag = np.array(adjacency_matrix(g).tolist(), dtype=float).reshape(g.n, g.n)
    ah = np.array(adjacency_matrix(h).tolist(), dtype=float).reshape(h.n, h.n)
    lhs = np.einsum("axij,xy->ayij", u.entries, ag)
    rhs = np.einsum("ab,byij->ayij", ah, u.entries)
    return _max(opnorm(lhs - rhs))


def is_quantum_iso(u: MagicUnitary, g: Graph, h: Graph, tolerance: Optional[float] = None) -> CheckResult:
    tol = u.tolerance if tolerance is None else tolerance
    r = qi_residual(u, g, h)
    return CheckResult(r <= tol, r)


def from_permutation(perm: Mapping[VertexLike, VertexLike], d: int = 1,
                     tolerance: float = DEFAULT_TOLERANCE) -> MagicUnitary:
    """Scalar magic unitary of a bijection x -> perm[x] (columns = keys, rows = values)."""
    pairs = {vid(x): vid(a) for x, a in perm.items()}
    if len(set(pairs.values())) != len(pairs):
        raise NotBijective("two vertices share an image")
    if d < 1:
        raise DimensionMismatch("d must be at least 1")
    cols = sorted(pairs)
    rows = sorted(pairs.values())
    ri = {a: i for i, a in enumerate(rows)}
    e = np.zeros((len(rows), len(cols), d, d), dtype=complex)
    for j, x in enumerate(cols):
        e[ri[pairs[x]], j] = np.eye(d)
    return MagicUnitary(rows, cols, e, tolerance)


def _as_projection(m, name: str, tol: float) -> np.ndarray:
    m = np.asarray(m, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise DimensionMismatch(f"{name} must be square")
    if projection_residual(m) > tol:
        raise NotAProjection(f"{name} is not a projection")
    return m


def c4_mu(p, q, tolerance: float = DEFAULT_TOLERANCE) -> MagicUnitary:
    """Quantum automorphism of the 4-cycle 0-1-2-3-0 built from projections p and q.

    On the class {0, 2} the grid is [[p, 1-p], [1-p, p]], on {1, 3} the same
    with q, and zero between classes.
    """
    p = _as_projection(p, "p", tolerance)
    q = _as_projection(q, "q", tolerance)
    if p.shape != q.shape:
        raise DimensionMismatch("p and q must have the same size")
    d = p.shape[0]
    one = np.eye(d, dtype=complex)
    e = np.zeros((4, 4, d, d), dtype=complex)
    for (x, y), m in (((0, 2), p), ((1, 3), q)):
        e[x, x] = e[y, y] = m
        e[x, y] = e[y, x] = one - m
    return MagicUnitary(range(4), range(4), e, tolerance)


def _cells(partition: Iterable[Iterable[VertexLike]], index: Sequence[VertexId], what: str) -> List[FrozenSet[VertexId]]:
    cells = [frozenset(vid(v) for v in c) for c in partition]
    if any(not c for c in cells):
        raise EmptyCell(f"{what} has an empty cell")
    union = frozenset().union(*cells) if cells else frozenset()
    if sum(len(c) for c in cells) != len(union) or union != frozenset(index):
        raise GraphError(f"{what} is not a partition of the index set")
    return sorted(cells, key=min)


def _labels(cells: Sequence[FrozenSet[VertexId]], index: Sequence[VertexId]) -> np.ndarray:
    where = {v: k for k, c in enumerate(cells) for v in c}
    return np.array([where[v] for v in index])


def partition_residual(u: MagicUnitary, pg, ph) -> float:
    """Largest ``||u_ax u_by||`` over pairs where exactly one of x~y, a~b holds."""
    cg = _labels(_cells(pg, u.cols, "G partition"), u.cols)
    ch = _labels(_cells(ph, u.rows, "H partition"), u.rows)
    same_g = cg[:, None] == cg[None, :]
    same_h = ch[:, None] == ch[None, :]
    worst = 0.0
    e = u.entries
    for a in range(len(u.rows)):
        # prod[x, b, y] = u_ax u_by
        prod = np.einsum("xij,byjk->xbyik", e[a], e)
        mismatch = same_h[a][None, :, None] != same_g[:, None, :]
        if mismatch.any():
            worst = max(worst, _max(opnorm(prod[mismatch])))
    return worst


def preserves_partition(u: MagicUnitary, pg, ph, tolerance: Optional[float] = None) -> bool:
    tol = u.tolerance if tolerance is None else tolerance
    return partition_residual(u, pg, ph) <= tol


def partition_sum(u: MagicUnitary, pg, ph, representatives: Optional[Mapping[int, VertexLike]] = None,
                  check: bool = True) -> MagicUnitary:
    """The magic unitary ``P(U)`` over the cells, ``p_KL = sum_{a in K} u_{a, x_L}``.

    Cells are sorted by least vertex and indexed ``VertexId(0, k)``. The
    representative ``x_L`` defaults to the least vertex of ``L``;
    ``representatives`` maps a G-cell index to another choice.
    """
    cg = _cells(pg, u.cols, "G partition")
    ch = _cells(ph, u.rows, "H partition")
    if len(cg) != len(ch):
        raise PartitionNotPreserved(f"{len(cg)} cells in G but {len(ch)} in H")
    if check and not preserves_partition(u, cg, ch):
        raise PartitionNotPreserved("some cross-class product is nonzero")
    reps = [min(c) for c in cg]
    for k, x in (representatives or {}).items():
        x = vid(x)
        if x not in cg[k]:
            raise GraphError(f"{x} is not in cell {k}")
        reps[k] = x
    d = u.dim
    e = np.zeros((len(ch), len(cg), d, d), dtype=complex)
    for li, x in enumerate(reps):
        col = u.entries[:, u.col_position(x)]
        for ki, cell in enumerate(ch):
            e[ki, li] = sum(col[u.row_position(a)] for a in cell)
    return MagicUnitary(range(len(ch)), range(len(cg)), e, u.tolerance)


def extract_block(u: MagicUnitary, t: Iterable[VertexLike], s: Iterable[VertexLike]) -> MagicUnitary:
    """Sub-grid ``U[t, s]`` (rows t of H, columns s of G)."""
    t = sorted(vid(a) for a in t)
    s = sorted(vid(x) for x in s)
    if not t or not s:
        raise EmptyCell("extract_block needs nonempty index sets")
    ri = [u.row_position(a) for a in t]
    ci = [u.col_position(x) for x in s]
    return MagicUnitary(t, s, u.entries[np.ix_(ri, ci)], u.tolerance)


def block_unit(sub: MagicUnitary) -> Tuple[np.ndarray, float]:
    """Common value of the row and column sums of a sub-block, and the spread around it."""
    sums = np.concatenate([sub.entries.sum(axis=1), sub.entries.sum(axis=0)])
    unit = sums[0]
    return unit, _max(opnorm(sums - unit))


def anchor_residual(u: MagicUnitary, r: Iterable[VertexLike], s: Iterable[VertexLike]) -> float:
    r = {vid(x) for x in r}
    s = {vid(a) for a in s}
    in_s = np.array([a in s for a in u.rows])
    in_r = np.array([x in r for x in u.cols])
    mask = in_s[:, None] != in_r[None, :]
    return _max(opnorm(u.entries[mask])) if mask.any() else 0.0


def preserves_anchor(u: MagicUnitary, r: Iterable[VertexLike], s: Iterable[VertexLike],
                     tolerance: Optional[float] = None) -> bool:
    """True iff ``u_ax`` vanishes whenever exactly one of ``x in r``, ``a in s`` holds."""
    tol = u.tolerance if tolerance is None else tolerance
    return anchor_residual(u, r, s) <= tol


def adjoint_mu(u: MagicUnitary) -> MagicUnitary:
    e = np.conj(np.transpose(u.entries, (1, 0, 3, 2)))
    return MagicUnitary(u.cols, u.rows, e, u.tolerance)


def _has_perfect_matching(support: np.ndarray) -> bool:
    n = support.shape[0]
    match = [-1] * support.shape[1]

    def augment(i, seen):
        for j in np.flatnonzero(support[i]):
            if j not in seen:
                seen.add(j)
                if match[j] < 0 or augment(match[j], seen):
                    match[j] = i
                    return True
        return False

    return support.shape[0] == support.shape[1] and all(augment(i, set()) for i in range(n))


def gamma_transport(u: MagicUnitary, ag: AnchoredGraph, ah: AnchoredGraph, verify: bool = True) -> MagicUnitary:
    """Transport a quantum isomorphism of anchored graphs through ``gamma``.

    Block anchor: the same grid on the edge-deleted graphs. Cut-vertex
    anchor {r} -> {s}: ``Diag(U0, P(U0))`` on the split graphs, where U0 drops
    row s and column r and P sums U0 over the components of G - r and H - s.
    The copy of s for component D_i and the copy of r for component C_j meet
    in ``sum_{b in D_i} u_{b, w_j}`` for any ``w_j`` in C_j.
    """
    g, h = ag.graph, ah.graph
    if not (ag.is_connected and ah.is_connected):
        raise PreconditionFailed("connected", "both anchored graphs must be connected")
    if not is_quantum_iso(u, g, h):
        raise PreconditionFailed("is_quantum_iso", f"residual {qi_residual(u, g, h):.3g}")
    if not preserves_anchor(u, ag.anchor, ah.anchor):
        raise PreconditionFailed("preserves_anchor", f"residual {anchor_residual(u, ag.anchor, ah.anchor):.3g}")
    kg = classify_anchor(g, ag.anchor).kind
    kh = classify_anchor(h, ah.anchor).kind
    if kg is not kh:
        raise PreconditionFailed("anchor_kind", f"{kg.value} vs {kh.value}")
    gg = gamma(ag)
    gh = gamma(ah)
    if not classify_anchor(g, ag.anchor).is_cut or g.n == 1:
        out = MagicUnitary(u.rows, u.cols, u.entries, u.tolerance)
    else:
        (r,) = ag.anchor
        (s,) = ah.anchor
        sg, sh = split(g, r), split(h, s)
        comps_g = connected_components(g.remove_vertices([r]))
        comps_h = connected_components(h.remove_vertices([s]))
        u0 = extract_block(u, [a for a in u.rows if a != s], [x for x in u.cols if x != r])
        try:
            p = partition_sum(u0, comps_g, comps_h)
        except PartitionNotPreserved as exc:
            raise PreconditionFailed("component_partition", str(exc)) from None
        support = p.norms() > u.tolerance
        if not _has_perfect_matching(support):
            raise PreconditionFailed("component_pairing", "no bijection of components inside the support of P(U0)")
        cols, rows = sg.graph.vertices, sh.graph.vertices
        copy_g = {c: c.namespace for c in sg.copies}
        copy_h = {c: c.namespace for c in sh.copies}
        e = np.zeros((len(rows), len(cols), u.dim, u.dim), dtype=complex)
        for i, a2 in enumerate(rows):
            for j, x2 in enumerate(cols):
                if a2 in copy_h and x2 in copy_g:
                    e[i, j] = p.entries[copy_h[a2], copy_g[x2]]
                elif a2 not in copy_h and x2 not in copy_g:
                    e[i, j] = u0.entry(sh.origin[a2], sg.origin[x2])
        out = MagicUnitary(rows, cols, e, u.tolerance)
    if verify:
        if not validate_mu(out):
            raise PreconditionFailed("transport_validate_mu", "transported grid is not a magic unitary")
        if not is_quantum_iso(out, gg.graph, gh.graph):
            raise PreconditionFailed("transport_is_quantum_iso", f"residual {qi_residual(out, gg.graph, gh.graph):.3g}")
        if not preserves_anchor(out, gg.anchor, gh.anchor):
            raise PreconditionFailed("transport_preserves_anchor")
    return out


def fulton_compatible(u: MagicUnitary, g: Graph, h: Graph, tolerance: Optional[float] = None) -> bool:
    """Audit: ``u_ax u_by != 0`` implies ``w_i(x, y) = w_i(a, b)`` for all i <= |V|."""
    _check_indices(u, g, h)
    tol = u.tolerance if tolerance is None else tolerance
    n = g.n
    if h.n != n:
        return False
    wg = [m.tolist() for m in walk_count_tensor(g, n)]
    wh = [m.tolist() for m in walk_count_tensor(h, n)]
    vg = {(x, y): tuple(w[x][y] for w in wg) for x in range(n) for y in range(n)}
    vh = {(a, b): tuple(w[a][b] for w in wh) for a in range(n) for b in range(n)}
    e = u.entries
    for a in range(n):
        prod = opnorm(np.einsum("xij,byjk->xbyik", e[a], e))  # [x, b, y]
        for x, b, y in zip(*np.nonzero(prod > tol)):
            if vg[(x, y)] != vh[(a, b)]:
                return False
    return True


@dataclass(frozen=True)
class DistanceViolation:
    row: VertexId
    col: VertexId
    g_distance: int
    h_distance: int


def block_distance_audit(u: MagicUnitary, g: Graph, h: Graph, tolerance: Optional[float] = None) -> List[DistanceViolation]:
    """Report pairs with ``u_ax != 0`` whose block-tree distances to the centre anchor differ.

    Audit only: the property is expected but not proved, so nothing here raises.
    """
    _check_indices(u, g, h)
    tol = u.tolerance if tolerance is None else tolerance

    def depths(f: Graph) -> Dict[VertexId, int]:
        t = block_tree(f)
        z = zbar(f)
        root = t.node_index(next(iter(z.vertices)) if z.is_cut else z.vertices)
        tg = Graph(range(len(t.nodes)), t.edges())
        dist = distance_matrix(tg)
        out = {}
        for v in f.vertices:
            r = rho(f, v)
            node = t.node_index(v if len(r) == 1 and v in block_decomposition(f).cut_vertices else r)
            out[v] = dist[(VertexId(0, node), VertexId(0, root))]
        return out

    dg, dh = depths(g), depths(h)
    norms = u.norms()
    bad = []
    for i, a in enumerate(u.rows):
        for j, x in enumerate(u.cols):
            if norms[i, j] > tol and dg[x] != dh[a]:
                bad.append(DistanceViolation(a, x, dg[x], dh[a]))
    return bad
