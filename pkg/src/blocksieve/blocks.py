"""Block (2-connected component) decomposition, block trees and block graphs."""
from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from typing import Dict, FrozenSet, Iterable, List, Mapping, Tuple

from . import _accel
from .graph import (
    DisconnectedInput,
    Graph,
    GraphError,
    VertexId,
    VertexLike,
    connected_components,
    vid,
)
from .trees import Color, ColoredTree, TreeNode


class InvalidAnchor(GraphError):
    def __init__(self, message: str, component: int | None = None):
        super().__init__(message)
        self.component = component


@dataclass(frozen=True)
class BlockDecomposition:
    blocks: Tuple[FrozenSet[VertexId], ...]
    cut_vertices: FrozenSet[VertexId]
    edge_block: Mapping[Tuple[VertexId, VertexId], int]  # keys are (u, v) with u < v
    containing_blocks: Mapping[VertexId, FrozenSet[int]]

    def block_of_edge(self, u: VertexLike, v: VertexLike) -> int:
        a, b = sorted((vid(u), vid(v)))
        return self.edge_block[(a, b)]

    def is_cut_vertex(self, v: VertexLike) -> bool:
        return vid(v) in self.cut_vertices

    def blocks_at(self, v: VertexLike) -> List[FrozenSet[VertexId]]:
        return [self.blocks[i] for i in sorted(self.containing_blocks[vid(v)])]

    def cut_vertices_of(self, block: int) -> FrozenSet[VertexId]:
        return self.blocks[block] & self.cut_vertices


@lru_cache(maxsize=8192)
def block_decomposition(g: Graph) -> BlockDecomposition:
    """Blocks via the lowpoint DFS; ordered by least vertex, then size, then vertex list.

    A vertex forming a 1-vertex component is a cut vertex in no block.
    """
    indptr, indices = g.csr()
    eu, ev, eb, _, nb = _accel.biconnected(indptr, indices, g.n)
    vs = g.vertices
    raw_vertices: List[set] = [set() for _ in range(nb)]
    raw_edges: List[list] = [[] for _ in range(nb)]
    for a, b, k in zip(eu, ev, eb):
        x, y = sorted((vs[a], vs[b]))
        raw_vertices[k].update((x, y))
        raw_edges[k].append((x, y))
    order = sorted(range(nb), key=lambda k: (min(raw_vertices[k]), len(raw_vertices[k]), sorted(raw_vertices[k])))
    blocks = tuple(frozenset(raw_vertices[k]) for k in order)
    edge_block = {}
    for new, k in enumerate(order):
        for e in raw_edges[k]:
            edge_block[e] = new
    containing: Dict[VertexId, set] = {v: set() for v in vs}
    for i, b in enumerate(blocks):
        for v in b:
            containing[v].add(i)
    cut = frozenset(v for v in vs if len(containing[v]) >= 2 or not g.neighbors(v))
    return BlockDecomposition(
        blocks=blocks,
        cut_vertices=cut,
        edge_block=edge_block,
        containing_blocks={v: frozenset(s) for v, s in containing.items()},
    )


def is_2connected(g: Graph) -> bool:
    if g.n < 2 or not g.is_connected():
        return False
    return len(block_decomposition(g).blocks) == 1


def _require_connected(g: Graph, what: str) -> None:
    if g.n == 0 or not g.is_connected():
        raise DisconnectedInput(f"{what} needs a connected nonempty graph")


def block_tree(g: Graph) -> ColoredTree:
    """Blocks (white) then cut vertices (black), joined when the cut vertex lies in the block."""
    _require_connected(g, "block_tree")
    dec = block_decomposition(g)
    nodes = [TreeNode(b, Color.WHITE) for b in dec.blocks]
    cuts = sorted(dec.cut_vertices)
    nodes += [TreeNode(c, Color.BLACK) for c in cuts]
    nb = len(dec.blocks)
    adj: List[List[int]] = [[] for _ in nodes]
    for j, c in enumerate(cuts):
        for i in sorted(dec.containing_blocks[c]):
            adj[i].append(nb + j)
            adj[nb + j].append(i)
    return ColoredTree(tuple(nodes), tuple(tuple(sorted(a)) for a in adj))


def block_forest(g: Graph) -> List[ColoredTree]:
    """One block tree per connected component (components in least-vertex order)."""
    from .graph import induced_subgraph

    return [block_tree(induced_subgraph(g, c)) for c in connected_components(g)]


def block_graph(g: Graph) -> Graph:
    """Intersection graph of the blocks; vertex ``VertexId(0, i)`` is block ``i``."""
    _require_connected(g, "block_graph")
    blocks = block_decomposition(g).blocks
    edges = [(i, j) for i in range(len(blocks)) for j in range(i + 1, len(blocks)) if blocks[i] & blocks[j]]
    return Graph(range(len(blocks)), edges)


def is_block_graph(g: Graph) -> bool:
    """True iff every block induces a complete graph."""
    dec = block_decomposition(g)
    sizes = [0] * len(dec.blocks)
    for k in dec.edge_block.values():
        sizes[k] += 1
    return all(sizes[i] == len(b) * (len(b) - 1) // 2 for i, b in enumerate(dec.blocks))


class AnchorKind(Enum):
    CUT_VERTEX = "cut"
    BLOCK = "block"


@dataclass(frozen=True)
class Anchor:
    kind: AnchorKind
    vertices: FrozenSet[VertexId]

    @classmethod
    def cut(cls, v: VertexLike) -> "Anchor":
        return cls(AnchorKind.CUT_VERTEX, frozenset([vid(v)]))

    @classmethod
    def block(cls, vs: Iterable[VertexLike]) -> "Anchor":
        return cls(AnchorKind.BLOCK, frozenset(vid(v) for v in vs))

    @property
    def is_cut(self) -> bool:
        return self.kind is AnchorKind.CUT_VERTEX


def classify_anchor(g: Graph, r: Iterable[VertexLike]) -> Anchor:
    """Anchor for a connected graph: ``r`` must be one cut vertex or the vertex set of a block."""
    r = frozenset(vid(v) for v in r)
    _require_connected(g, "an anchor")
    dec = block_decomposition(g)
    if len(r) == 1:
        (v,) = r
        if v in dec.cut_vertices:
            return Anchor(AnchorKind.CUT_VERTEX, r)
    if r in dec.blocks:
        return Anchor(AnchorKind.BLOCK, r)
    raise InvalidAnchor(f"{sorted(map(str, r))} is neither a cut vertex nor a block")


def lambda_anchor(g: Graph, a: Anchor) -> Anchor:
    """Image of an anchor of ``g`` in the block graph of ``g`` (vertices ``VertexId(0, i)``)."""
    _require_connected(g, "lambda_anchor")
    if classify_anchor(g, a.vertices) != a:
        raise InvalidAnchor("anchor kind does not match its vertex set")
    if g.n < 2:
        raise InvalidAnchor("K1 has an empty block graph")
    dec = block_decomposition(g)
    if a.is_cut:
        (r,) = a.vertices
        return Anchor(AnchorKind.BLOCK, frozenset(VertexId(0, i) for i in dec.containing_blocks[r]))
    i = dec.blocks.index(a.vertices)
    ncut = len(dec.cut_vertices_of(i))
    node = VertexId(0, i)
    if ncut >= 2:
        return Anchor(AnchorKind.CUT_VERTEX, frozenset([node]))
    if ncut == 1:
        bdec = block_decomposition(block_graph(g))
        (k,) = bdec.containing_blocks[node]
        return Anchor(AnchorKind.BLOCK, bdec.blocks[k])
    # g is 2-connected: the block graph is K1, whose vertex counts as a cut vertex
    return Anchor(AnchorKind.CUT_VERTEX, frozenset([node]))
