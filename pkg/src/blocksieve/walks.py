"""Walk counts: plain, through a vertex, and through a vertex exactly once.

A walk of length i is a sequence of i + 1 vertices with consecutive ones
adjacent, so counts are entries of adjacency powers.
"""
from __future__ import annotations

from functools import lru_cache
from typing import Dict, List, Tuple

from . import _accel
from .graph import Graph, GraphError, VertexId, VertexLike, vid


def _check_length(i: int) -> None:
    if i < 0:
        raise GraphError("walk length must be non-negative")


@lru_cache(maxsize=1024)
def _powers(g: Graph, k: int) -> List[List[List[int]]]:
    indptr, indices = g.csr()
    return _accel.walk_powers(indptr, indices, g.n, k)


def _table(g: Graph, i: int) -> List[List[List[int]]]:
    return _powers(g, max(i, g.n))


@lru_cache(maxsize=4096)
def _avoiding(g: Graph, y: VertexId, k: int) -> List[List[List[int]]]:
    """Powers of the adjacency with y's row and column zeroed."""
    return _powers(g.remove_edges([(y, w) for w in g.neighbors(y)]), k)


def _first_passage(g: Graph, x: VertexId, y: VertexId, k: int) -> Tuple[int, ...]:
    return _first_passage_table(g, x, y, max(k, g.n))


@lru_cache(maxsize=65536)
def _first_passage_table(g: Graph, x: VertexId, y: VertexId, k: int) -> Tuple[int, ...]:
    """Walks x -> y that meet y only at their last vertex, lengths 0..k.

    Renewal recurrence: w_n(x, y) = sum_j f_j * w_{n-j}(y, y).
    """
    p = _table(g, k)
    ix, iy = g.position(x), g.position(y)
    f: List[int] = []
    for n in range(k + 1):
        f.append(p[n][ix][iy] - sum(f[j] * p[n - j][iy][iy] for j in range(n)))
    return tuple(f)


def walks(g: Graph, i: int, x: VertexLike, y: VertexLike) -> int:
    _check_length(i)
    return _table(g, i)[i][g.position(x)][g.position(y)]


def walks_through(g: Graph, i: int, x: VertexLike, z: VertexLike, y: VertexLike) -> int:
    """Length-i walks from x to z that visit y at least once.

    All walks minus those in the graph with y deleted.
    """
    _check_length(i)
    x, z, y = vid(x), vid(z), vid(y)
    total = walks(g, i, x, z)
    if y in (x, z):
        return total
    g.position(y)
    k = max(i, g.n)
    return total - _avoiding(g, y, k)[i][g.position(x)][g.position(z)]


def walks_through_once(g: Graph, i: int, x: VertexLike, z: VertexLike, y: VertexLike) -> int:
    """Length-i walks from x to z that visit y exactly once."""
    _check_length(i)
    x, z, y = vid(x), vid(z), vid(y)
    g.position(y)
    fx = _first_passage(g, x, y, i)
    fz = _first_passage(g, z, y, i)
    return sum(fx[j] * fz[i - j] for j in range(i + 1))


def verify_walk_formula(g: Graph, i: int, x: VertexLike, z: VertexLike, y: VertexLike) -> bool:
    """Check that walks through y split as (first arrival at y)(y back to y)(last departure from y).

    The left side comes from vertex deletion, the right side from the
    first-passage recurrence, so the two are computed independently.
    """
    _check_length(i)
    x, z, y = vid(x), vid(z), vid(y)
    lhs = walks_through(g, i, x, z, y)
    p = _table(g, i)
    iy = g.position(y)
    fx = _first_passage(g, x, y, i)
    fz = _first_passage(g, z, y, i)
    rhs = 0
    for j in range(i + 1):
        if fx[j] == 0:
            continue
        for k in range(i - j + 1):
            rhs += fx[j] * p[k][iy][iy] * fz[i - j - k]
    return lhs == rhs


def walk_profile(g: Graph) -> Dict[VertexId, Tuple[int, ...]]:
    """Closed-walk counts ``(w_0(x,x), ..., w_n(x,x))`` per vertex, n = |V|."""
    p = _table(g, g.n)
    return {v: tuple(p[k][i][i] for k in range(g.n + 1)) for i, v in enumerate(g.vertices)}


def separates(g: Graph, x: VertexLike, z: VertexLike, y: VertexLike) -> bool:
    """True iff every walk from x to z passes through y (by walk counts up to |V|)."""
    return all(walks_through(g, i, x, z, y) == walks(g, i, x, z) for i in range(g.n + 1))
