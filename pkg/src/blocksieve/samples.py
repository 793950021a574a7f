"""Small graphs and magic unitaries used as fixtures by the tests and the CLI."""
from __future__ import annotations

from typing import Tuple

import numpy as np

from .anchored import AnchoredGraph, validate_anchored
from .graph import Graph, cycle_graph
from .magic import MagicUnitary, c4_mu, from_permutation

P_DIAG = np.diag([1.0, 0.0]).astype(complex)
Q_HALF = np.full((2, 2), 0.5, dtype=complex)


def noncommuting_c4_mu() -> MagicUnitary:
    return c4_mu(P_DIAG, Q_HALF)


def glued_triangles() -> Graph:
    """Triangles 0-1-2 and 0-3-4 sharing the cut vertex 0."""
    return Graph(range(5), [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)])


def glued_triangles_swap() -> Tuple[MagicUnitary, AnchoredGraph]:
    """The automorphism exchanging the two triangles, anchored at the shared vertex."""
    g = glued_triangles()
    u = from_permutation({0: 0, 1: 3, 2: 4, 3: 1, 4: 2})
    return u, validate_anchored(g, {0})


def sun_graph() -> Graph:
    """The 4-cycle 0-1-2-3 with a pendant vertex 4 + i on each cycle vertex i."""
    c = cycle_graph(4)
    return Graph(range(8), list(c.edges()) + [(i, 4 + i) for i in range(4)])


def sun_mu(p=P_DIAG, q=Q_HALF) -> Tuple[MagicUnitary, AnchoredGraph]:
    """Extend the 4-cycle unitary to the pendants by copying each cycle entry."""
    base = c4_mu(p, q)
    d = base.dim
    e = np.zeros((8, 8, d, d), dtype=complex)
    e[:4, :4] = base.entries
    e[4:, 4:] = base.entries
    return MagicUnitary(range(8), range(8), e), validate_anchored(sun_graph(), range(4))


def double_wheel() -> Graph:
    """Vertex 0 joined to every vertex of two 4-cycles 1-2-3-4 and 5-6-7-8."""
    edges = [(0, i) for i in range(1, 9)]
    for base in (1, 5):
        edges += [(base + i, base + (i + 1) % 4) for i in range(4)]
    return Graph(range(9), edges)


def double_wheel_mu(e_proj=P_DIAG, p=P_DIAG, q=Q_HALF) -> Tuple[MagicUnitary, AnchoredGraph]:
    """Quantum automorphism fixing the hub whose component sums are not a permutation.

    Off the hub the grid is ``S_KL (x) V_ax`` where ``S = [[e, 1-e], [1-e, e]]``
    mixes the two cycles and ``V`` is the 4-cycle unitary from p and q.
    """
    v = c4_mu(p, q).entries
    one = np.eye(e_proj.shape[0], dtype=complex)
    s = [[e_proj, one - e_proj], [one - e_proj, e_proj]]
    d = e_proj.shape[0] * v.shape[2]
    e = np.zeros((9, 9, d, d), dtype=complex)
    e[0, 0] = np.eye(d)
    for k in range(2):
        for l in range(2):
            for a in range(4):
                for x in range(4):
                    e[1 + 4 * k + a, 1 + 4 * l + x] = np.kron(s[k][l], v[a, x])
    return MagicUnitary(range(9), range(9), e), validate_anchored(double_wheel(), {0})
