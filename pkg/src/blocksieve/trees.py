"""Two-coloured trees (blocks white, cut vertices black), rooting, and AHU canonical forms."""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Optional, Sequence, Tuple


class Color(Enum):
    WHITE = "white"
    BLACK = "black"


@dataclass(frozen=True)
class FreshNode:
    """Payload of a node created by a tree construction rather than taken from a graph."""

    tag: str
    serial: int = 0


@dataclass(frozen=True)
class TreeNode:
    payload: Any  # frozenset of vertices (block), VertexId (cut vertex) or FreshNode
    color: Color


@dataclass(frozen=True)
class ColoredTree:
    nodes: Tuple[TreeNode, ...]
    adjacency: Tuple[Tuple[int, ...], ...]

    def __len__(self) -> int:
        return len(self.nodes)

    def edges(self) -> List[Tuple[int, int]]:
        return [(i, j) for i, nb in enumerate(self.adjacency) for j in nb if i < j]

    def node_index(self, payload) -> int:
        for i, node in enumerate(self.nodes):
            if node.payload == payload:
                return i
        raise KeyError(payload)

    def check(self) -> None:
        """Raise ValueError unless this is a properly 2-coloured tree with white leaves."""
        n = len(self.nodes)
        if n == 0:
            raise ValueError("empty tree")
        if len(self.edges()) != n - 1:
            raise ValueError("edge count is not node count - 1")
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in self.adjacency[u]:
                if u not in self.adjacency[w]:
                    raise ValueError("asymmetric adjacency")
                if self.nodes[u].color == self.nodes[w].color:
                    raise ValueError(f"edge {u}-{w} joins equal colours")
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != n:
            raise ValueError("tree is disconnected")
        for i, nb in enumerate(self.adjacency):
            if len(nb) == 1 and self.nodes[i].color is not Color.WHITE:
                raise ValueError(f"leaf {i} is black")


@dataclass(frozen=True)
class RootedColoredTree:
    tree: ColoredTree
    root: int
    labels: Optional[Tuple[Any, ...]] = None

    def __post_init__(self):
        if not 0 <= self.root < len(self.tree.nodes):
            raise ValueError("root is not a node of the tree")
        if self.labels is not None and len(self.labels) != len(self.tree.nodes):
            raise ValueError("one label per node is required")

    @property
    def root_color(self) -> Color:
        return self.tree.nodes[self.root].color

    def __len__(self) -> int:
        return len(self.tree.nodes)

    def with_labels(self, labels: Sequence[Any]) -> "RootedColoredTree":
        return RootedColoredTree(self.tree, self.root, tuple(labels))


def _children_order(t: RootedColoredTree) -> Tuple[List[int], List[List[int]]]:
    adj = t.tree.adjacency
    parent = {t.root: -1}
    order = [t.root]
    children: List[List[int]] = [[] for _ in adj]
    for u in order:
        for w in adj[u]:
            if w not in parent:
                parent[w] = u
                children[u].append(w)
                order.append(w)
    return order, children


def _node_codes(t: RootedColoredTree) -> List[str]:
    order, children = _children_order(t)
    codes = [""] * len(t.tree.nodes)
    for u in reversed(order):
        head = "W" if t.tree.nodes[u].color is Color.WHITE else "B"
        if t.labels is not None:
            s = str(t.labels[u])
            head += f"{len(s)}:{s}"
        codes[u] = head + "(" + "".join(sorted(codes[c] for c in children[u])) + ")"
    return codes


def tree_canonical(t: RootedColoredTree) -> str:
    """AHU code over (colour, label, sorted child codes).

    Equal strings exactly when the trees are isomorphic as rooted, coloured,
    labelled trees. Labels are compared through ``str``.
    """
    return _node_codes(t)[t.root]


def rooted_isomorphism(t1: RootedColoredTree, t2: RootedColoredTree) -> Optional[Dict[int, int]]:
    """An explicit root-, colour- and label-preserving isomorphism, or None."""
    c1, c2 = _node_codes(t1), _node_codes(t2)
    if c1[t1.root] != c2[t2.root]:
        return None
    _, ch1 = _children_order(t1)
    _, ch2 = _children_order(t2)
    mapping = {t1.root: t2.root}
    stack = [(t1.root, t2.root)]
    while stack:
        u, v = stack.pop()
        pool = defaultdict(list)
        for w in ch2[v]:
            pool[c2[w]].append(w)
        for w in ch1[u]:
            image = pool[c1[w]].pop()
            mapping[w] = image
            stack.append((w, image))
    return mapping


def check_rooted_isomorphism(t1: RootedColoredTree, t2: RootedColoredTree, alpha: Dict[int, int]) -> bool:
    """Verify that ``alpha`` is a bijection preserving edges, colours, labels and the root."""
    n = len(t1.tree.nodes)
    if len(t2.tree.nodes) != n or len(alpha) != n or set(alpha.values()) != set(range(n)):
        return False
    if alpha[t1.root] != t2.root:
        return False
    for u in range(n):
        if t1.tree.nodes[u].color is not t2.tree.nodes[alpha[u]].color:
            return False
        if t1.labels is not None and str(t1.labels[u]) != str(t2.labels[alpha[u]]):
            return False
    e1 = {frozenset((alpha[a], alpha[b])) for a, b in t1.tree.edges()}
    e2 = {frozenset(e) for e in t2.tree.edges()}
    return e1 == e2
