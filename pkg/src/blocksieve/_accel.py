"""Kernel dispatch: the Cython extension when importable, pure Python otherwise.

Set ``BLOCKSIEVE_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os
from typing import List, Sequence, Tuple

from . import _purepy

_INT64_SAFE = 2**62

_ext = None
if not os.environ.get("BLOCKSIEVE_PURE_PYTHON"):
    try:
        from . import _kernels as _ext  # type: ignore[no-redef]
    except ImportError:  # extension not built
        _ext = None

BACKEND = "cython" if _ext is not None else "python"


def _arrays(indptr, indices):
    import numpy as np

    return np.asarray(indptr, dtype=np.int64), np.asarray(indices, dtype=np.int64)


def walk_powers(indptr: Sequence[int], indices: Sequence[int], n: int, max_i: int,
                *, backend: str | None = None) -> List[List[List[int]]]:
    """Exact adjacency powers. The int64 kernel is used only when no entry can overflow."""
    backend = backend or BACKEND
    if backend == "cython" and _ext is not None:
        maxdeg = max((indptr[v + 1] - indptr[v] for v in range(n)), default=0)
        if max_i == 0 or maxdeg ** max_i < _INT64_SAFE:
            ip, ix = _arrays(indptr, indices)
            return _ext.walk_powers(ip, ix, n, max_i).tolist()
    return _purepy.walk_powers(indptr, indices, n, max_i)


def bfs_all(indptr: Sequence[int], indices: Sequence[int], n: int,
            *, backend: str | None = None) -> List[List[int]]:
    backend = backend or BACKEND
    if backend == "cython" and _ext is not None:
        ip, ix = _arrays(indptr, indices)
        return _ext.bfs_all(ip, ix, n).tolist()
    return _purepy.bfs_all(indptr, indices, n)


def biconnected(indptr: Sequence[int], indices: Sequence[int], n: int,
                *, backend: str | None = None) -> Tuple[list, list, list, list, int]:
    backend = backend or BACKEND
    if backend == "cython" and _ext is not None:
        ip, ix = _arrays(indptr, indices)
        eu, ev, eb, cut, nb = _ext.biconnected(ip, ix, n)
        return eu.tolist(), ev.tolist(), eb.tolist(), cut.tolist(), int(nb)
    return _purepy.biconnected(indptr, indices, n)
