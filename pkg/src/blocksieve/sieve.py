"""Three-valued quantum-isomorphism sieve.

Every refuting check is a necessary condition for quantum isomorphism, so a
NOT_QI verdict is always sound. ISO is only reported with a verified classical
isomorphism. Anything else is UNKNOWN.
"""
from __future__ import annotations

import hashlib
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

from .anchored import zbar
from .blocks import AnchorKind, block_decomposition, block_graph, block_tree, is_2connected
from .graph import (
    Graph,
    GraphError,
    VertexId,
    adjacency_matrix,
    char_poly,
    connected_components,
    induced_subgraph,
)
from .trees import Color, RootedColoredTree, check_rooted_isomorphism, rooted_isomorphism, tree_canonical
from .walks import walk_profile

__all__ = [
    "BlockSignature",
    "CheckRecord",
    "NoWitness",
    "SieveReport",
    "Verdict",
    "block_tree_witness",
    "classical_iso",
    "is_isomorphism",
    "qi_sieve",
    "signature",
    "tree_canonical",
]


class NoWitness(GraphError):
    pass


@dataclass(frozen=True)
class BlockSignature:
    vertex_count: int
    edge_count: int
    degrees: Tuple[int, ...]
    char_poly: Tuple[int, ...]
    complement_char_poly: Tuple[int, ...]
    walk_profiles: Tuple[Tuple[int, ...], ...]

    @property
    def digest(self) -> str:
        return hashlib.sha256(repr(self).encode()).hexdigest()[:16]


@lru_cache(maxsize=16384)
def signature(g: Graph) -> BlockSignature:
    """Isomorphism-invariant summary; equal for quantum isomorphic graphs."""
    return BlockSignature(
        vertex_count=g.n,
        edge_count=g.m,
        degrees=tuple(sorted(g.degrees())),
        char_poly=tuple(char_poly(adjacency_matrix(g))),
        complement_char_poly=tuple(char_poly(adjacency_matrix(g.complement()))),
        walk_profiles=tuple(sorted(walk_profile(g).values())),
    )


class Verdict(Enum):
    ISO = "ISO"
    NOT_QI = "NOT_QI"
    UNKNOWN = "UNKNOWN"


@dataclass(frozen=True)
class CheckRecord:
    name: str
    basis: str
    g_value: object
    h_value: object
    outcome: str  # "pass", "fail" or "info"

    def as_dict(self) -> dict:
        return {"name": self.name, "basis": self.basis, "g_value": _plain(self.g_value),
                "h_value": _plain(self.h_value), "outcome": self.outcome}


@dataclass(frozen=True)
class SieveReport:
    verdict: Verdict
    evidence: Tuple[CheckRecord, ...]
    witness: Optional[Dict[VertexId, VertexId]] = None
    notes: Tuple[str, ...] = ()

    @property
    def refuting_check(self) -> Optional[CheckRecord]:
        return next((c for c in self.evidence if c.outcome == "fail"), None)

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "evidence": [c.as_dict() for c in self.evidence],
            "witness": None if self.witness is None else {str(k): str(v) for k, v in sorted(self.witness.items())},
            "notes": list(self.notes),
        }


def _plain(v):
    if isinstance(v, (list, tuple)):
        return [_plain(x) for x in v]
    if isinstance(v, dict):
        return {str(k): _plain(x) for k, x in v.items()}
    if isinstance(v, (int, float, str, bool)) or v is None:
        return v
    return str(v)


# Why each check is necessary.
BASIS = {
    "vertex_edge_counts": "a magic unitary is square and preserves the number of length-1 walks",
    "degree_multiset": "u_ax != 0 forces equal closed 2-walk counts, i.e. equal degrees, so degree classes match in size",
    "cospectral": "quantum isomorphic graphs have equal adjacency spectra",
    "complement_cospectral": "complements of quantum isomorphic graphs are quantum isomorphic, hence cospectral",
    "component_matching": "components of quantum isomorphic graphs are matched bijectively into quantum isomorphic pairs",
    "block_cut_counts": "quantum isomorphic connected graphs have equally many blocks and cut vertices",
    "two_connected": "2-connectedness is preserved by quantum isomorphism",
    "center_anchor_kind": "the centre anchor is preserved, and anchors related by a quantum isomorphism have the same kind",
    "rooted_block_tree": "a quantum isomorphism induces a colour- and root-preserving block tree isomorphism matching quantum isomorphic blocks, rooted at the centre anchors",
    "vertex_compatibility": "the support of a magic unitary contains a perfect matching, and u_ax != 0 forces equal closed-walk counts, equal cut status and matched blocks at x and a",
    "classical_iso": "an explicit isomorphism is a scalar quantum isomorphism",
}


def _rec(name: str, g_value, h_value, ok: Optional[bool] = None) -> CheckRecord:
    if ok is None:
        ok = g_value == h_value
    return CheckRecord(name, BASIS[name], g_value, h_value, "pass" if ok else "fail")


def _poly_str(c: Sequence[int]) -> str:
    n = len(c) - 1
    terms = []
    for k, a in enumerate(c):
        if a == 0:
            continue
        p = n - k
        mono = "" if p == 0 else ("x" if p == 1 else f"x^{p}")
        coef = str(a) if (abs(a) != 1 or p == 0) else ("-" if a < 0 else "")
        terms.append(f"{coef}{mono}")
    return " + ".join(terms).replace("+ -", "- ") or "0"


# Classical isomorphism

def _refine(graphs: Sequence[Graph], init: Sequence[Dict[VertexId, object]]) -> List[Dict[VertexId, int]]:
    """Joint colour refinement, so colours are comparable across the graphs."""
    palette = {c: i for i, c in enumerate(sorted({c for col in init for c in col.values()}))}
    colors = [{v: palette[c] for v, c in col.items()} for col in init]
    count = len(palette)
    while True:
        sigs = [{v: (col[v], tuple(sorted(col[w] for w in g.neighbors(v)))) for v in g}
                for g, col in zip(graphs, colors)]
        palette = {s: i for i, s in enumerate(sorted({s for sg in sigs for s in sg.values()}))}
        colors = [{v: palette[s] for v, s in sg.items()} for sg in sigs]
        if len(palette) == count:
            return colors
        count = len(palette)


def is_isomorphism(g: Graph, h: Graph, f: Dict[VertexId, VertexId]) -> bool:
    if g.n != h.n or g.m != h.m or set(f) != set(g.vertices) or set(f.values()) != set(h.vertices):
        return False
    return all(h.has_edge(f[a], f[b]) for a, b in g.edges())


def classical_iso(g: Graph, h: Graph) -> Optional[Dict[VertexId, VertexId]]:
    """A verified isomorphism g -> h, or None if none exists.

    Backtracking over classes of a colour refinement seeded with closed-walk
    profiles.
    """
    if g.n != h.n or g.m != h.m or sorted(g.degrees()) != sorted(h.degrees()):
        return None
    pg, ph = walk_profile(g), walk_profile(h)
    cg, ch = _refine([g, h], [pg, ph])
    if Counter(cg.values()) != Counter(ch.values()):
        return None
    by_color: Dict[int, List[VertexId]] = {}
    for a in h.vertices:
        by_color.setdefault(ch[a], []).append(a)
    # most constrained first, then keep the order connected
    order: List[VertexId] = []
    placed = set()
    remaining = sorted(g.vertices, key=lambda v: (len(by_color[cg[v]]), v))
    while remaining:
        nxt = next((v for v in remaining if any(w in placed for w in g.neighbors(v))), remaining[0])
        remaining.remove(nxt)
        order.append(nxt)
        placed.add(nxt)
    f: Dict[VertexId, VertexId] = {}
    used = set()

    def extend(k: int) -> bool:
        if k == len(order):
            return True
        x = order[k]
        for a in by_color[cg[x]]:
            if a in used:
                continue
            if all(h.has_edge(a, f[y]) == (y in g.neighbors(x)) for y in order[:k]):
                f[x] = a
                used.add(a)
                if extend(k + 1):
                    return True
                del f[x]
                used.discard(a)
        return False

    if not extend(0):
        return None
    if not is_isomorphism(g, h, f):
        raise AssertionError("backtracking produced a non-isomorphism")
    return dict(f)


# Rooted, signature-labelled block trees

def _labelled_tree(g: Graph) -> RootedColoredTree:
    t = block_tree(g)
    z = zbar(g)
    root = t.node_index(next(iter(z.vertices)) if z.is_cut else z.vertices)
    labels = tuple(signature(induced_subgraph(g, node.payload)).digest if node.color is Color.WHITE else ""
                   for node in t.nodes)
    return RootedColoredTree(t, root, labels)


def _bipartite_matching(adj: Sequence[Sequence[int]], right: int) -> List[int]:
    """Maximum matching; returns the right-vertex matched to each left vertex or -1."""
    match_r = [-1] * right

    def augment(i, seen):
        for j in adj[i]:
            if j not in seen:
                seen.add(j)
                if match_r[j] < 0 or augment(match_r[j], seen):
                    match_r[j] = i
                    return True
        return False

    for i in range(len(adj)):
        augment(i, set())
    out = [-1] * len(adj)
    for j, i in enumerate(match_r):
        if i >= 0:
            out[i] = j
    return out


def _vertex_keys(g: Graph) -> Dict[VertexId, tuple]:
    dec = block_decomposition(g)
    prof = walk_profile(g)
    sig_of = [signature(induced_subgraph(g, b)).digest for b in dec.blocks]
    return {v: (prof[v], v in dec.cut_vertices, tuple(sorted(sig_of[i] for i in dec.containing_blocks[v])))
            for v in g.vertices}


def _connected_checks(g: Graph, h: Graph) -> List[CheckRecord]:
    """Checks on a pair of connected graphs, stopping at the first failure."""
    out: List[CheckRecord] = []

    def add(rec: CheckRecord) -> bool:
        out.append(rec)
        return rec.outcome == "pass"

    dg, dh = block_decomposition(g), block_decomposition(h)
    if not add(_rec("block_cut_counts", (len(dg.blocks), len(dg.cut_vertices)), (len(dh.blocks), len(dh.cut_vertices)))):
        return out
    if not add(_rec("two_connected", is_2connected(g), is_2connected(h))):
        return out
    zg, zh = zbar(g), zbar(h)
    if not add(_rec("center_anchor_kind", zg.kind.value, zh.kind.value)):
        return out
    tg, th = _labelled_tree(g), _labelled_tree(h)
    cg, ch = tree_canonical(tg), tree_canonical(th)
    short = lambda s: hashlib.sha256(s.encode()).hexdigest()[:16]
    if not add(_rec("rooted_block_tree", short(cg), short(ch), cg == ch)):
        return out
    kg, kh = _vertex_keys(g), _vertex_keys(h)
    hv = list(h.vertices)
    adj = [[j for j, a in enumerate(hv) if kh[a] == kg[x]] for x in g.vertices]
    matched = sum(1 for j in _bipartite_matching(adj, len(hv)) if j >= 0)
    add(_rec("vertex_compatibility", g.n, matched, matched == g.n == h.n))
    return out


def _components(g: Graph) -> List[Graph]:
    return [induced_subgraph(g, c) for c in connected_components(g)]


def qi_sieve(g: Graph, h: Graph) -> SieveReport:
    """Run the refutation battery, then try a classical isomorphism."""
    ev: List[CheckRecord] = []
    notes: List[str] = []

    def refuted() -> SieveReport:
        return SieveReport(Verdict.NOT_QI, tuple(ev), None, tuple(notes))

    ev.append(_rec("vertex_edge_counts", (g.n, g.m), (h.n, h.m)))
    if ev[-1].outcome == "fail":
        return refuted()
    ev.append(_rec("degree_multiset", sorted(g.degrees()), sorted(h.degrees())))
    if ev[-1].outcome == "fail":
        return refuted()
    pa, pb = char_poly(adjacency_matrix(g)), char_poly(adjacency_matrix(h))
    ev.append(_rec("cospectral", _poly_str(pa), _poly_str(pb), pa == pb))
    if ev[-1].outcome == "fail":
        return refuted()
    qa, qb = char_poly(adjacency_matrix(g.complement())), char_poly(adjacency_matrix(h.complement()))
    ev.append(_rec("complement_cospectral", _poly_str(qa), _poly_str(qb), qa == qb))
    if ev[-1].outcome == "fail":
        return refuted()

    comps_g, comps_h = _components(g), _components(h)
    sg = [signature(c) for c in comps_g]
    sh = [signature(c) for c in comps_h]
    if Counter(sg) != Counter(sh):
        ev.append(_rec("component_matching",
                       sorted((s.vertex_count, s.edge_count) for s in sg),
                       sorted((s.vertex_count, s.edge_count) for s in sh), False))
        return refuted()
    # compatible = equal signatures and every connected check passes
    pair_records: Dict[Tuple[int, int], List[CheckRecord]] = {}
    adj: List[List[int]] = []
    for i, (cg_, s1) in enumerate(zip(comps_g, sg)):
        row = []
        for j, (ch_, s2) in enumerate(zip(comps_h, sh)):
            if s1 != s2:
                continue
            recs = _connected_checks(cg_, ch_)
            pair_records[(i, j)] = recs
            if all(r.outcome == "pass" for r in recs):
                row.append(j)
        adj.append(row)
    match = _bipartite_matching(adj, len(comps_h))
    ok = all(j >= 0 for j in match)
    if len(comps_g) == 1:
        ev.extend(pair_records[(0, 0)])
    else:
        ev.append(_rec("component_matching", len(comps_g), sum(1 for j in match if j >= 0), ok))
        if not ok:
            for i, j in enumerate(match):
                if j < 0:
                    for (a, b), recs in sorted(pair_records.items()):
                        if a == i and recs[-1].outcome == "fail":
                            notes.append(f"component {a} vs component {b}: {recs[-1].name} fails")
    if not ok:
        return refuted()

    iso = classical_iso(g, h)
    if iso is not None:
        ev.append(CheckRecord("classical_iso", BASIS["classical_iso"], "found", "verified", "pass"))
        return SieveReport(Verdict.ISO, tuple(ev), iso, tuple(notes))
    ev.append(CheckRecord("classical_iso", BASIS["classical_iso"], "none", "none", "info"))
    if g.is_connected() and h.is_connected():
        if is_2connected(g) and is_2connected(h):
            notes.append("both graphs are 2-connected: a possible minimal quantum-isomorphic, non-isomorphic pair shape")
        else:
            notes.append("connected, not 2-connected: a minimal non-isomorphic quantum-isomorphic pair of this shape "
                         "would need classically isomorphic corresponding blocks")
    return SieveReport(Verdict.UNKNOWN, tuple(ev), None, tuple(notes))


def block_tree_witness(g: Graph, h: Graph):
    """Root-, colour- and signature-preserving block tree isomorphism ``alpha``
    (node index -> node index) and the block graph isomorphism ``beta`` it induces
    (``VertexId(0, i)`` -> ``VertexId(0, j)``).
    """
    if not (g.n and h.n and g.is_connected() and h.is_connected()):
        raise NoWitness("block tree witnesses are defined for connected graphs")
    tg, th = _labelled_tree(g), _labelled_tree(h)
    alpha = rooted_isomorphism(tg, th)
    if alpha is None or not check_rooted_isomorphism(tg, th, alpha):
        raise NoWitness("the labelled rooted block trees are not isomorphic")
    nb = len(block_decomposition(g).blocks)
    beta = {VertexId(0, i): VertexId(0, alpha[i]) for i in range(nb)}
    bg, bh = block_graph(g), block_graph(h)
    if not is_isomorphism(bg, bh, beta):
        raise NoWitness("induced block map is not a block graph isomorphism")
    return alpha, beta
