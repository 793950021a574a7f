"""Finite simple graphs with stable vertex identities, and exact integer views of them."""
from __future__ import annotations

from dataclasses import dataclass
from functools import total_ordering
from typing import Dict, Iterable, Iterator, List, Mapping, NamedTuple, Sequence, Tuple, Union

from . import _accel


class GraphError(ValueError):
    """Base class for invalid graph inputs."""


class UnknownVertex(GraphError):
    pass


class DisconnectedInput(GraphError):
    pass


class VertexId(NamedTuple):
    """Opaque vertex identity, ordered lexicographically on (namespace, local).

    Namespace 0 holds vertices of input graphs; disjoint unions and splits
    move each part into its own namespace.
    """

    namespace: int
    local: int

    def __str__(self) -> str:
        return str(self.local) if self.namespace == 0 else f"{self.namespace}:{self.local}"

    def __repr__(self) -> str:
        return f"VertexId({self.namespace}, {self.local})"

    @classmethod
    def parse(cls, text: str) -> "VertexId":
        text = text.strip()
        if ":" in text:
            ns, local = text.split(":", 1)
            return cls(int(ns), int(local))
        return cls(0, int(text))


VertexLike = Union[VertexId, int, str, Tuple[int, int]]


def vid(v: VertexLike) -> VertexId:
    """Coerce ``3``, ``"1:3"`` or ``(1, 3)`` to a :class:`VertexId`."""
    if isinstance(v, VertexId):
        return v
    if isinstance(v, bool):
        raise TypeError("bool is not a vertex id")
    if isinstance(v, int):
        return VertexId(0, v)
    if isinstance(v, str):
        return VertexId.parse(v)
    ns, local = v
    return VertexId(int(ns), int(local))


@total_ordering
class _Infinity:
    """Distance between vertices in different components."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "INFINITY"

    def __eq__(self, other) -> bool:
        return other is self

    def __lt__(self, other) -> bool:
        return False

    def __gt__(self, other) -> bool:
        return other is not self

    def __hash__(self) -> int:
        return hash("blocksieve.INFINITY")

    def __add__(self, other):
        return self

    __radd__ = __add__


INFINITY = _Infinity()


class Graph:
    """Immutable finite simple graph. Vertex order is the sorted order of ids."""

    __slots__ = ("_vertices", "_adj", "_index", "_csr", "_edges", "_hash")

    def __init__(self, vertices: Iterable[VertexLike] = (), edges: Iterable[Tuple[VertexLike, VertexLike]] = ()):
        verts = [vid(v) for v in vertices]
        vset = set(verts)
        if len(vset) != len(verts):
            raise GraphError("duplicate vertex ids")
        adj: Dict[VertexId, set] = {v: set() for v in verts}
        for e in edges:
            a, b = (vid(x) for x in e)
            if a == b:
                raise GraphError(f"loop at {a}")
            if a not in vset or b not in vset:
                raise UnknownVertex(f"edge {a}-{b} uses an unknown vertex")
            adj[a].add(b)
            adj[b].add(a)
        self._vertices = tuple(sorted(verts))
        self._adj = {v: frozenset(adj[v]) for v in self._vertices}
        self._index = None
        self._csr = None
        self._edges = None
        self._hash = None

    @classmethod
    def from_edges(cls, edges: Iterable[Tuple[VertexLike, VertexLike]], n: int | None = None) -> "Graph":
        edges = [(vid(a), vid(b)) for a, b in edges]
        verts = set(VertexId(0, i) for i in range(n or 0))
        for a, b in edges:
            verts.update((a, b))
        return cls(verts, edges)

    @property
    def vertices(self) -> Tuple[VertexId, ...]:
        return self._vertices

    @property
    def vertex_count(self) -> int:
        return len(self._vertices)

    n = vertex_count

    @property
    def edge_count(self) -> int:
        return len(self.edges())

    m = edge_count

    def edges(self) -> Tuple[Tuple[VertexId, VertexId], ...]:
        """Sorted edges ``(u, v)`` with ``u < v``."""
        if self._edges is None:
            self._edges = tuple(sorted((u, w) for u in self._vertices for w in self._adj[u] if u < w))
        return self._edges

    def neighbors(self, v: VertexLike) -> frozenset:
        v = vid(v)
        try:
            return self._adj[v]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {v}") from None

    def degree(self, v: VertexLike) -> int:
        return len(self.neighbors(v))

    def has_edge(self, u: VertexLike, v: VertexLike) -> bool:
        return vid(v) in self.neighbors(u)

    def __contains__(self, v) -> bool:
        try:
            return vid(v) in self._adj
        except (TypeError, ValueError):
            return False

    def __iter__(self) -> Iterator[VertexId]:
        return iter(self._vertices)

    def __len__(self) -> int:
        return len(self._vertices)

    def index(self) -> Dict[VertexId, int]:
        """Position of each vertex in the vertex order."""
        if self._index is None:
            self._index = {v: i for i, v in enumerate(self._vertices)}
        return self._index

    def position(self, v: VertexLike) -> int:
        v = vid(v)
        try:
            return self.index()[v]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {v}") from None

    def csr(self) -> Tuple[List[int], List[int]]:
        """Adjacency in CSR form over vertex positions."""
        if self._csr is None:
            idx = self.index()
            indptr = [0]
            indices: List[int] = []
            for v in self._vertices:
                indices.extend(sorted(idx[w] for w in self._adj[v]))
                indptr.append(len(indices))
            self._csr = (indptr, indices)
        return self._csr

    def degrees(self) -> Tuple[int, ...]:
        return tuple(len(self._adj[v]) for v in self._vertices)

    def complement(self) -> "Graph":
        vs = self._vertices
        return Graph(vs, [(u, w) for i, u in enumerate(vs) for w in vs[i + 1:] if w not in self._adj[u]])

    def remove_vertices(self, drop: Iterable[VertexLike]) -> "Graph":
        drop = {vid(v) for v in drop}
        return induced_subgraph(self, [v for v in self._vertices if v not in drop])

    def remove_edges(self, drop: Iterable[Tuple[VertexLike, VertexLike]]) -> "Graph":
        gone = {frozenset((vid(a), vid(b))) for a, b in drop}
        return Graph(self._vertices, [e for e in self.edges() if frozenset(e) not in gone])

    def relabel(self, mapping: Mapping[VertexId, VertexLike]) -> "Graph":
        """Image of the graph under a bijection of vertex ids."""
        image = {v: vid(mapping[v]) for v in self._vertices}
        return Graph(image.values(), [(image[a], image[b]) for a, b in self.edges()])

    def is_connected(self) -> bool:
        return len(connected_components(self)) <= 1

    def _key(self):
        return (self._vertices, self.edges())

    def __eq__(self, other) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(self._key())
        return self._hash

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class IntMatrix:
    """Square matrix of Python integers indexed by an ordered vertex list."""

    index: Tuple[VertexId, ...]
    rows: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        k = len(self.index)
        if len(self.rows) != k or any(len(r) != k for r in self.rows):
            raise GraphError("matrix dimensions do not match its index")

    def _pos(self) -> Dict[VertexId, int]:
        pos = self.__dict__.get("_pos_cache")
        if pos is None:
            pos = {v: i for i, v in enumerate(self.index)}
            object.__setattr__(self, "_pos_cache", pos)
        return pos

    def __getitem__(self, key):
        x, y = key
        pos = self._pos()
        return self.rows[pos[vid(x)]][pos[vid(y)]]

    def tolist(self) -> List[List[int]]:
        return [list(r) for r in self.rows]

    @property
    def size(self) -> int:
        return len(self.index)


class DistanceMatrix(IntMatrix):
    """Like :class:`IntMatrix`, but entries may be :data:`INFINITY`."""


def adjacency_matrix(g: Graph) -> IntMatrix:
    idx = g.index()
    rows = []
    for v in g.vertices:
        row = [0] * g.n
        for w in g.neighbors(v):
            row[idx[w]] = 1
        rows.append(tuple(row))
    return IntMatrix(g.vertices, tuple(rows))


def connected_components(g: Graph) -> List[frozenset]:
    """Vertex sets of the components, sorted by least vertex id."""
    seen = set()
    comps = []
    for s in g.vertices:
        if s in seen:
            continue
        comp = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for w in g.neighbors(u):
                if w not in comp:
                    comp.add(w)
                    stack.append(w)
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def distance_matrix(g: Graph) -> DistanceMatrix:
    indptr, indices = g.csr()
    raw = _accel.bfs_all(indptr, indices, g.n)
    rows = tuple(tuple(INFINITY if d < 0 else d for d in r) for r in raw)
    return DistanceMatrix(g.vertices, rows)


def eccentricity(g: Graph, v: VertexLike):
    """Largest distance from ``v``; INFINITY when ``g`` is disconnected."""
    pos = g.position(v)
    indptr, indices = g.csr()
    dist = [-1] * g.n
    dist[pos] = 0
    frontier = [pos]
    while frontier:
        nxt = []
        for u in frontier:
            for w in indices[indptr[u]:indptr[u + 1]]:
                if dist[w] < 0:
                    dist[w] = dist[u] + 1
                    nxt.append(w)
        frontier = nxt
    if min(dist) < 0:
        return INFINITY
    return max(dist)


def center(g: Graph) -> frozenset:
    """Vertices of minimum eccentricity."""
    if g.n == 0 or not g.is_connected():
        raise DisconnectedInput("center is defined for connected nonempty graphs")
    dm = distance_matrix(g)
    ecc = [max(r) for r in dm.rows]
    best = min(ecc)
    return frozenset(v for v, e in zip(g.vertices, ecc) if e == best)


def char_poly(m: IntMatrix | Sequence[Sequence[int]]) -> List[int]:
    """Coefficients of det(xI - m), leading coefficient first.

    Berkowitz's algorithm: only ring operations, so everything stays in the
    integers.
    """
    a = m.tolist() if isinstance(m, IntMatrix) else [list(r) for r in m]
    n = len(a)
    if any(len(r) != n for r in a):
        raise GraphError("char_poly needs a square matrix")
    if n == 0:
        return [1]
    coeffs = [1, -a[0][0]]
    for r in range(1, n):
        row = a[r][:r]
        col = [a[i][r] for i in range(r)]
        # Toeplitz column: 1, -a_rr, -R S, -R M S, ..., -R M^(r-1) S
        t = [1, -a[r][r]]
        vec = col
        for _ in range(r):
            t.append(-sum(x * y for x, y in zip(row, vec)))
            vec = [sum(a[i][j] * vec[j] for j in range(r)) for i in range(r)]
        coeffs = [sum(t[i - j] * coeffs[j] for j in range(min(i, r) + 1)) for i in range(r + 2)]
    return coeffs


def induced_subgraph(g: Graph, s: Iterable[VertexLike]) -> Graph:
    keep = {vid(v) for v in s}
    for v in keep:
        if v not in g:
            raise UnknownVertex(f"unknown vertex {v}")
    return Graph(keep, [(a, b) for a, b in g.edges() if a in keep and b in keep])


def disjoint_union(gs: Sequence[Graph]) -> Tuple[Graph, Dict[VertexId, Tuple[int, VertexId]]]:
    """Disjoint union with input ``i`` moved to namespace ``i``.

    Local ids are kept when they are distinct within an input, otherwise the
    vertex's position is used. Returns the graph and a map from each new id
    to ``(input index, old id)``.
    """
    verts: List[VertexId] = []
    edges = []
    origin: Dict[VertexId, Tuple[int, VertexId]] = {}
    for i, g in enumerate(gs):
        locals_ = [v.local for v in g.vertices]
        keep_local = len(set(locals_)) == len(locals_)
        new = {v: VertexId(i, v.local if keep_local else p) for p, v in enumerate(g.vertices)}
        for v, nv in new.items():
            origin[nv] = (i, v)
            verts.append(nv)
        edges.extend((new[a], new[b]) for a, b in g.edges())
    return Graph(verts, edges), origin


def walk_count_tensor(g: Graph, max_i: int) -> List[IntMatrix]:
    """``[A^0, A^1, ..., A^max_i]`` with exact entries."""
    if max_i < 0:
        raise GraphError("max_i must be non-negative")
    indptr, indices = g.csr()
    powers = _accel.walk_powers(indptr, indices, g.n, max_i)
    return [IntMatrix(g.vertices, tuple(tuple(r) for r in p)) for p in powers]


# Small constructors (vertices 0..n-1 in namespace 0).

def empty_graph(n: int) -> Graph:
    return Graph(range(n))


def path_graph(n: int) -> Graph:
    return Graph(range(n), [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise GraphError("cycles need at least 3 vertices")
    return Graph(range(n), [(i, (i + 1) % n) for i in range(n)])


def complete_graph(n: int) -> Graph:
    return Graph(range(n), [(i, j) for i in range(n) for j in range(i + 1, n)])


def star_graph(leaves: int) -> Graph:
    """K_{1,leaves} with hub 0."""
    return Graph(range(leaves + 1), [(0, i) for i in range(1, leaves + 1)])
