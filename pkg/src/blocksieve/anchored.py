"""Anchored graphs and the decomposition operations on them.

A connected anchored graph is a connected graph together with either one of
its cut vertices or one of its blocks. ``gamma`` splits such a graph into a
disjoint union of anchored graphs with fewer blocks each; ``delta1`` and
``delta2`` rebuild the rooted block tree from the pieces.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, NamedTuple, Sequence, Tuple

from .blocks import (
    Anchor,
    AnchorKind,
    InvalidAnchor,
    block_decomposition,
    block_tree,
    classify_anchor,
)
from .graph import (
    DisconnectedInput,
    Graph,
    GraphError,
    UnknownVertex,
    VertexId,
    VertexLike,
    center,
    connected_components,
    disjoint_union,
    induced_subgraph,
    vid,
)
from .trees import Color, ColoredTree, FreshNode, RootedColoredTree, TreeNode


class NotACutVertex(GraphError):
    pass


class RootColorViolation(GraphError):
    pass


@dataclass(frozen=True)
class AnchoredGraph:
    graph: Graph
    anchor: FrozenSet[VertexId]

    def components(self) -> List["AnchoredGraph"]:
        """Connected pieces, in least-vertex order."""
        out = []
        for comp in connected_components(self.graph):
            out.append(AnchoredGraph(induced_subgraph(self.graph, comp), self.anchor & comp))
        return out

    @property
    def is_connected(self) -> bool:
        return self.graph.n > 0 and self.graph.is_connected()

    def kind(self) -> AnchorKind:
        return classify_anchor(self.graph, self.anchor).kind


def validate_anchored(g: Graph, r: Iterable[VertexLike]) -> AnchoredGraph:
    r = frozenset(vid(v) for v in r)
    for v in r:
        if v not in g:
            raise UnknownVertex(f"anchor vertex {v} is not in the graph")
    for i, comp in enumerate(connected_components(g)):
        try:
            classify_anchor(induced_subgraph(g, comp), r & comp)
        except InvalidAnchor as exc:
            raise InvalidAnchor(f"component {i}: {exc}", component=i) from None
    return AnchoredGraph(g, r)


def rho(g: Graph, v: VertexLike) -> FrozenSet[VertexId]:
    """``{v}`` for cut or isolated vertices, otherwise the one block holding ``v``."""
    v = vid(v)
    if v not in g:
        raise UnknownVertex(f"unknown vertex {v}")
    dec = block_decomposition(g)
    if v in dec.cut_vertices or not g.neighbors(v):
        return frozenset([v])
    (k,) = dec.containing_blocks[v]
    return dec.blocks[k]


def zbar(g: Graph) -> Anchor:
    """The centre if it is a single cut vertex, else the unique block containing it."""
    z = center(g)
    dec = block_decomposition(g)
    if len(z) == 1:
        (v,) = z
        if v in dec.cut_vertices:
            return Anchor(AnchorKind.CUT_VERTEX, z)
    holders = [b for b in dec.blocks if z <= b]
    if len(holders) != 1:
        raise GraphError(f"centre {sorted(map(str, z))} lies in {len(holders)} blocks")
    return Anchor(AnchorKind.BLOCK, holders[0])


class Split(NamedTuple):
    graph: Graph
    copies: Tuple[VertexId, ...]
    origin: Dict[VertexId, VertexId]  # new vertex -> vertex of the input graph


def split(g: Graph, r: VertexLike) -> Split:
    """Disjoint union of ``g[C_i + r]`` over the components ``C_i`` of ``g - r``.

    Part ``i`` lives in namespace ``i``; ``copies[i]`` is its copy of ``r``.
    """
    r = vid(r)
    if g.n == 0 or not g.is_connected():
        raise DisconnectedInput("split needs a connected graph")
    if r not in g:
        raise UnknownVertex(f"unknown vertex {r}")
    if g.n == 1:
        return Split(g, (r,), {r: r})
    if r not in block_decomposition(g).cut_vertices:
        raise NotACutVertex(f"{r} is not a cut vertex")
    parts = [induced_subgraph(g, comp | {r}) for comp in connected_components(g.remove_vertices([r]))]
    union, where = disjoint_union(parts)
    origin = {new: old for new, (_, old) in where.items()}
    copies = tuple(sorted((new for new, old in origin.items() if old == r), key=lambda v: v.namespace))
    return Split(union, copies, origin)


def gamma(ag: AnchoredGraph, *, return_origin: bool = False):
    """Split at a cut-vertex anchor, or delete the edges of a block anchor.

    The new anchor is the union of ``rho`` over the copies of the cut vertex
    (respectively over the old anchor) in the new graph. With
    ``return_origin`` also returns the map from new vertices to old ones.
    """
    g = ag.graph
    if not ag.is_connected:
        raise DisconnectedInput("gamma is defined on connected anchored graphs; map over components")
    anchor = classify_anchor(g, ag.anchor)
    if anchor.is_cut:
        (r,) = anchor.vertices
        s = split(g, r)
        new_graph, seeds, origin = s.graph, s.copies, s.origin
    else:
        inside = anchor.vertices
        new_graph = g.remove_edges([(a, b) for a, b in g.edges() if a in inside and b in inside])
        seeds = tuple(sorted(inside))
        origin = {v: v for v in g.vertices}
    new_anchor = frozenset().union(*(rho(new_graph, v) for v in seeds))
    result = validate_anchored(new_graph, new_anchor)
    return (result, origin) if return_origin else result


def rooted_block_tree(ag: AnchoredGraph) -> RootedColoredTree:
    """Block tree rooted at the anchor's node (white for a block, black for a cut vertex)."""
    if not ag.is_connected:
        raise DisconnectedInput("rooted_block_tree needs a connected anchored graph")
    anchor = classify_anchor(ag.graph, ag.anchor)
    t = block_tree(ag.graph)
    payload = next(iter(anchor.vertices)) if anchor.is_cut else anchor.vertices
    return RootedColoredTree(t, t.node_index(payload))


def _glue(trees: Sequence[RootedColoredTree], fresh_root: TreeNode,
          links: Sequence[Tuple[int, TreeNode | None]]) -> RootedColoredTree:
    """Disjoint union of ``trees`` plus a new root joined to each chosen input root.

    ``links`` holds ``(input index, interposed node or None)``.
    """
    nodes: List[TreeNode] = []
    adj: List[List[int]] = []
    labels: List = []
    labelled = any(t.labels is not None for t in trees)
    offsets = []
    for t in trees:
        off = len(nodes)
        offsets.append(off)
        nodes.extend(t.tree.nodes)
        adj.extend([off + j for j in nb] for nb in t.tree.adjacency)
        labels.extend(t.labels if t.labels is not None else [None] * len(t.tree.nodes))
    root = len(nodes)
    nodes.append(fresh_root)
    adj.append([])
    labels.append(None)
    for i, mid in links:
        target = offsets[i] + trees[i].root
        if mid is not None:
            k = len(nodes)
            nodes.append(mid)
            adj.append([target])
            labels.append(None)
            adj[target].append(k)
            target = k
        adj[root].append(target)
        adj[target].append(root)
    tree = ColoredTree(tuple(nodes), tuple(tuple(sorted(a)) for a in adj))
    return RootedColoredTree(tree, root, tuple(labels) if labelled else None)


def delta1(trees: Sequence[RootedColoredTree]) -> RootedColoredTree:
    """Join every (white) input root to a new black root."""
    for i, t in enumerate(trees):
        if t.root_color is not Color.WHITE:
            raise RootColorViolation(f"input {i} has a black root")
    return _glue(trees, TreeNode(FreshNode("delta1-root"), Color.BLACK), [(i, None) for i in range(len(trees))])


def delta2(trees: Sequence[RootedColoredTree]) -> RootedColoredTree:
    """New white root; white-rooted inputs hang from a new black node each,
    black-rooted inputs with at least two nodes attach directly, and one-node
    black inputs are dropped."""
    kept = [t for t in trees if t.root_color is Color.WHITE or len(t) >= 2]
    links = []
    for i, t in enumerate(kept):
        mid = TreeNode(FreshNode("delta2-link", i), Color.BLACK) if t.root_color is Color.WHITE else None
        links.append((i, mid))
    return _glue(kept, TreeNode(FreshNode("delta2-root"), Color.WHITE), links)


def reconstruct_tree(ag: AnchoredGraph) -> RootedColoredTree:
    """Rooted block tree of ``ag`` rebuilt from the block trees of the pieces of ``gamma(ag)``."""
    if ag.graph.n < 2:
        raise GraphError("reconstruction needs at least two vertices")
    kind = classify_anchor(ag.graph, ag.anchor).kind if ag.is_connected else None
    pieces = [rooted_block_tree(c) for c in gamma(ag).components()]
    return delta1(pieces) if kind is AnchorKind.CUT_VERTEX else delta2(pieces)
