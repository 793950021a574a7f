"""Pure-Python versions of the compiled kernels (same signatures, list outputs).

Walk counts here use Python integers, so they are exact for any length.
"""
from __future__ import annotations

from collections import deque
from typing import List, Sequence, Tuple


def walk_powers(indptr: Sequence[int], indices: Sequence[int], n: int, max_i: int) -> List[List[List[int]]]:
    nbrs = [list(indices[indptr[v]:indptr[v + 1]]) for v in range(n)]
    cur = [[int(x == y) for y in range(n)] for x in range(n)]
    out = [cur]
    for _ in range(max_i):
        nxt = []
        for row in cur:
            nxt.append([sum(row[z] for z in nbrs[y]) for y in range(n)])
        out.append(nxt)
        cur = nxt
    return out


def bfs_all(indptr: Sequence[int], indices: Sequence[int], n: int) -> List[List[int]]:
    out = []
    for s in range(n):
        d = [-1] * n
        d[s] = 0
        queue = deque([s])
        while queue:
            u = queue.popleft()
            for w in indices[indptr[u]:indptr[u + 1]]:
                if d[w] < 0:
                    d[w] = d[u] + 1
                    queue.append(w)
        out.append(d)
    return out


def biconnected(indptr: Sequence[int], indices: Sequence[int], n: int) -> Tuple[list, list, list, list, int]:
    disc = [-1] * n
    low = [0] * n
    parent = [-1] * n
    nxt = list(indptr[:n])
    cut = [0] * n
    eu: List[int] = []
    ev: List[int] = []
    eb: List[int] = []
    estack: List[Tuple[int, int]] = []
    time = 0
    nblocks = 0
    for root in range(n):
        if disc[root] >= 0 or indptr[root] == indptr[root + 1]:
            continue
        disc[root] = low[root] = time
        time += 1
        stack = [root]
        root_children = 0
        while stack:
            v = stack[-1]
            if nxt[v] < indptr[v + 1]:
                w = indices[nxt[v]]
                nxt[v] += 1
                if disc[w] < 0:
                    parent[w] = v
                    disc[w] = low[w] = time
                    time += 1
                    estack.append((v, w))
                    stack.append(w)
                    if v == root:
                        root_children += 1
                elif w != parent[v] and disc[w] < disc[v]:
                    estack.append((v, w))
                    low[v] = min(low[v], disc[w])
            else:
                stack.pop()
                w = v
                v = parent[w]
                if v < 0:
                    continue
                low[v] = min(low[v], low[w])
                if low[w] >= disc[v]:
                    if v != root:
                        cut[v] = 1
                    while estack:
                        a, b = estack.pop()
                        eu.append(a)
                        ev.append(b)
                        eb.append(nblocks)
                        if a == v and b == w:
                            break
                    nblocks += 1
        if root_children >= 2:
            cut[root] = 1
    return eu, ev, eb, cut, nblocks
