# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled inner loops. Signatures mirror :mod:`blocksieve._purepy`.

Graphs arrive in CSR form: ``indices[indptr[v]:indptr[v + 1]]`` are the
neighbours of vertex ``v`` (vertices are ``0..n-1``).
"""
import numpy as np
cimport numpy as cnp

cnp.import_array()

ctypedef cnp.int64_t i64


def walk_powers(i64[::1] indptr, i64[::1] indices, Py_ssize_t n, Py_ssize_t max_i):
    """Stack of adjacency powers ``A^0 .. A^max_i`` as int64.

    The caller guarantees no overflow (entries are bounded by maxdeg**max_i).
    """
    out = np.zeros((max_i + 1, n, n), dtype=np.int64)
    cdef i64[:, :, ::1] p = out
    cdef Py_ssize_t k, x, y, j
    cdef i64 acc
    for x in range(n):
        p[0, x, x] = 1
    for k in range(max_i):
        for x in range(n):
            for y in range(n):
                acc = 0
                for j in range(indptr[y], indptr[y + 1]):
                    acc += p[k, x, indices[j]]
                p[k + 1, x, y] = acc
    return out


def bfs_all(i64[::1] indptr, i64[::1] indices, Py_ssize_t n):
    """All-pairs BFS distances; -1 marks unreachable pairs."""
    out = np.full((n, n), -1, dtype=np.int64)
    cdef i64[:, ::1] d = out
    queue_arr = np.empty(max(n, 1), dtype=np.int64)
    cdef i64[::1] queue = queue_arr
    cdef Py_ssize_t s, head, tail, u, j, w
    for s in range(n):
        d[s, s] = 0
        queue[0] = s
        head = 0
        tail = 1
        while head < tail:
            u = queue[head]
            head += 1
            for j in range(indptr[u], indptr[u + 1]):
                w = indices[j]
                if d[s, w] < 0:
                    d[s, w] = d[s, u] + 1
                    queue[tail] = w
                    tail += 1
    return out


def biconnected(i64[::1] indptr, i64[::1] indices, Py_ssize_t n):
    """Lowpoint DFS (iterative) splitting the edge set into blocks.

    Returns ``(edge_u, edge_v, edge_block, is_cut, nblocks)`` where the first
    three are parallel arrays over the undirected edges.
    """
    cdef Py_ssize_t m2 = indices.shape[0]
    cdef Py_ssize_t m = m2 // 2
    disc_a = np.full(n, -1, dtype=np.int64)
    low_a = np.zeros(n, dtype=np.int64)
    parent_a = np.full(n, -1, dtype=np.int64)
    nxt_a = np.zeros(n, dtype=np.int64)
    stack_a = np.zeros(max(n, 1), dtype=np.int64)
    est_u_a = np.zeros(max(m, 1), dtype=np.int64)
    est_v_a = np.zeros(max(m, 1), dtype=np.int64)
    eu_a = np.zeros(m, dtype=np.int64)
    ev_a = np.zeros(m, dtype=np.int64)
    eb_a = np.zeros(m, dtype=np.int64)
    cut_a = np.zeros(n, dtype=np.uint8)
    cdef i64[::1] disc = disc_a, low = low_a, parent = parent_a, nxt = nxt_a
    cdef i64[::1] stack = stack_a, est_u = est_u_a, est_v = est_v_a
    cdef i64[::1] eu = eu_a, ev = ev_a, eb = eb_a
    cdef cnp.uint8_t[::1] cut = cut_a
    cdef Py_ssize_t time = 0, sp, esp = 0, out = 0, nblocks = 0
    cdef Py_ssize_t root, v, w, j, root_children, a, b
    for root in range(n):
        if disc[root] >= 0 or indptr[root] == indptr[root + 1]:
            continue
        disc[root] = time
        low[root] = time
        time += 1
        nxt[root] = indptr[root]
        stack[0] = root
        sp = 1
        root_children = 0
        while sp > 0:
            v = stack[sp - 1]
            if nxt[v] < indptr[v + 1]:
                j = nxt[v]
                nxt[v] += 1
                w = indices[j]
                if disc[w] < 0:
                    parent[w] = v
                    disc[w] = time
                    low[w] = time
                    time += 1
                    nxt[w] = indptr[w]
                    est_u[esp] = v
                    est_v[esp] = w
                    esp += 1
                    stack[sp] = w
                    sp += 1
                    if v == root:
                        root_children += 1
                elif w != parent[v] and disc[w] < disc[v]:
                    est_u[esp] = v
                    est_v[esp] = w
                    esp += 1
                    if disc[w] < low[v]:
                        low[v] = disc[w]
            else:
                sp -= 1
                w = v
                v = parent[w]
                if v < 0:
                    continue
                if low[w] < low[v]:
                    low[v] = low[w]
                if low[w] >= disc[v]:
                    if v != root:
                        cut[v] = 1
                    while esp > 0:
                        esp -= 1
                        a = est_u[esp]
                        b = est_v[esp]
                        eu[out] = a
                        ev[out] = b
                        eb[out] = nblocks
                        out += 1
                        if a == v and b == w:
                            break
                    nblocks += 1
        if root_children >= 2:
            cut[root] = 1
    return eu_a, ev_a, eb_a, cut_a, nblocks
