"""Command-line interface: ``blocksieve {blocks,sieve,gamma,verify-mu,transport-mu,fixture}``.

Exit codes: 0 ISO / all checks pass, 1 NOT_QI / a check fails, 2 UNKNOWN,
10 parse error, 11 invalid anchor, 12 dimension or index mismatch,
13 precondition failed, 14 usage error, 15 other graph error.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import io as gio
from . import samples
from .anchored import AnchoredGraph, gamma, validate_anchored, zbar
from .blocks import InvalidAnchor, block_decomposition, block_forest, block_graph, block_tree
from .graph import Graph, GraphError, VertexId, center, connected_components, cycle_graph
from .magic import (
    DEFAULT_TOLERANCE,
    DimensionMismatch,
    IndexMismatch,
    MagicUnitary,
    PreconditionFailed,
    anchor_residual,
    block_distance_audit,
    fulton_compatible,
    gamma_transport,
    opnorm,
    qi_residual,
    validate_mu,
)
from .sieve import Verdict, qi_sieve

EXIT = {"ISO": 0, "NOT_QI": 1, "UNKNOWN": 2}
EXIT_PARSE, EXIT_ANCHOR, EXIT_DIMENSION, EXIT_PRECONDITION, EXIT_USAGE, EXIT_GRAPH = 10, 11, 12, 13, 14, 15


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _tolerance(value: Optional[float]) -> float:
    if value is not None:
        tol = value
    else:
        env = os.environ.get("BLOCKSIEVE_TOLERANCE")
        try:
            tol = float(env) if env else DEFAULT_TOLERANCE
        except ValueError:
            raise _Usage(f"BLOCKSIEVE_TOLERANCE={env!r} is not a number") from None
    if not tol > 0:
        raise _Usage("tolerance must be positive")
    return tol


class _Usage(Exception):
    pass


def _load(spec: str) -> Tuple[Graph, Dict[VertexId, str]]:
    """Graph plus id -> name map (names only come from named edge lists)."""
    if spec.startswith("g6:") or Path(spec).suffix in (".g6", ".json"):
        return gio.load_graph(spec), {}
    try:
        text = Path(spec).read_text()
    except OSError as exc:
        raise gio.ParseError(f"cannot read: {exc.strerror}", 0, 0, spec) from None
    if gio.detect_format(text) == "edgelist":
        g, names = gio.parse_edgelist(text, spec)
        return g, {v: t for v, t in names.items() if t != str(v)}
    return gio.parse_graph(text, spec), {}


def _namer(names: Dict[VertexId, str]):
    def fmt(v) -> str:
        return names.get(v, str(v))
    return fmt


def _resolve(token: str, names: Dict[VertexId, str]) -> VertexId:
    token = token.strip()
    for v, t in names.items():
        if t == token:
            return v
    try:
        return VertexId.parse(token)
    except ValueError:
        raise InvalidAnchor(f"unknown vertex {token!r}") from None


def parse_anchor(spec: str, g: Graph, names: Dict[VertexId, str] = {}) -> AnchoredGraph:
    """``cut:<id>``, ``block:<id>,<id>,...`` or ``zbar``."""
    spec = spec.strip()
    if spec == "zbar":
        return validate_anchored(g, zbar(g).vertices)
    kind, _, body = spec.partition(":")
    ids = [_resolve(t, names) for t in body.split(",") if t.strip()]
    if kind not in ("cut", "block") or not ids:
        raise _Usage(f"anchor must be cut:<id>, block:<ids> or zbar, got {spec!r}")
    if kind == "cut" and len(ids) != 1:
        raise InvalidAnchor("a cut anchor names exactly one vertex")
    for v in ids:
        if v not in g:
            raise InvalidAnchor(f"unknown vertex {v}")
    ag = validate_anchored(g, ids)
    if g.is_connected():
        k = ag.kind().value
        if k != kind:
            raise InvalidAnchor(f"{sorted(map(str, ids))} is a {k} anchor, not a {kind} anchor")
    return ag


def _set(vs, fmt) -> List[str]:
    return [fmt(v) for v in sorted(vs)]


# blocks

def blocks_doc(g: Graph, fmt) -> dict:
    dec = block_decomposition(g)
    doc = {
        "vertices": g.n,
        "edges": g.m,
        "blocks": [_set(b, fmt) for b in dec.blocks],
        "cut_vertices": _set(dec.cut_vertices, fmt),
        "components": [_set(c, fmt) for c in connected_components(g)],
    }
    if g.n and g.is_connected():
        bt = block_tree(g)
        bgraph = block_graph(g)
        z = zbar(g)
        doc["block_tree"] = {"nodes": [{"color": n.color.value, "vertices": _set(n.payload, fmt)
                                        if isinstance(n.payload, frozenset) else [fmt(n.payload)]} for n in bt.nodes],
                             "edges": bt.edges()}
        doc["block_graph_edges"] = [[a.local, b.local] for a, b in bgraph.edges()]
        doc["center"] = _set(center(g), fmt)
        doc["zbar"] = {"kind": z.kind.value, "vertices": _set(z.vertices, fmt)}
    return doc


def cmd_blocks(args) -> int:
    g, names = _load(args.input)
    fmt = _namer(names)
    if args.format == "dot":
        if g.n and g.is_connected():
            out = gio.tree_to_dot(block_tree(g))
        else:
            out = "".join(gio.tree_to_dot(t, f"block_tree_{i}") for i, t in enumerate(block_forest(g)))
        _emit(args, out)
        return 0
    doc = blocks_doc(g, fmt)
    if args.format == "json":
        _emit(args, json.dumps(doc, indent=2) + "\n")
        return 0
    lines = [f"graph: {g.n} vertices, {g.m} edges, {len(doc['components'])} component(s)",
             f"blocks ({len(doc['blocks'])}):"]
    lines += [f"  B{i}: {{{', '.join(b)}}}" for i, b in enumerate(doc["blocks"])]
    lines.append(f"cut vertices ({len(doc['cut_vertices'])}): {', '.join(doc['cut_vertices']) or '-'}")
    if "zbar" in doc:
        bt = doc["block_tree"]
        lines.append(f"block tree: {len(bt['nodes'])} nodes, {len(bt['edges'])} edges")
        lines.append(f"block graph edges: {', '.join(f'B{a}-B{b}' for a, b in doc['block_graph_edges']) or '-'}")
        lines.append(f"centre: {{{', '.join(doc['center'])}}}")
        lines.append(f"centre anchor: {doc['zbar']['kind']} {{{', '.join(doc['zbar']['vertices'])}}}")
    _emit(args, "\n".join(lines) + "\n")
    return 0


# sieve

def _sieve_pair(pair: Tuple[str, str]) -> Tuple[str, dict]:
    g, _ = _load(pair[0])
    h, _ = _load(pair[1])
    return pair[0] + " " + pair[1], qi_sieve(g, h).as_dict()


def _render_report(doc: dict, title: str = "") -> str:
    lines = [f"{title}verdict: {doc['verdict']}"]
    for i, c in enumerate(doc["evidence"], 1):
        lines.append(f"  {i:2d}. [{c['outcome']:>4}] {c['name']}: G={c['g_value']} H={c['h_value']}")
        lines.append(f"      because {c['basis']}")
    if doc["witness"]:
        lines.append("  witness: " + ", ".join(f"{k}->{v}" for k, v in doc["witness"].items()))
    for n in doc["notes"]:
        lines.append(f"  note: {n}")
    return "\n".join(lines) + "\n"


def _read_manifest(path: str) -> List[Tuple[str, str]]:
    base = Path(path).parent
    pairs = []
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise gio.ParseError(f"cannot read: {exc.strerror}", 0, 0, path) from None
    for ln, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0].split()
        if not body:
            continue
        if len(body) != 2:
            raise gio.ParseError("manifest lines hold two graph inputs", ln, 1, path)
        pairs.append(tuple(t if t.startswith("g6:") or Path(t).is_absolute() else str(base / t) for t in body))
    return pairs


def cmd_sieve(args) -> int:
    if args.batch:
        if args.g or args.h:
            raise _Usage("give either two graphs or --batch, not both")
        pairs = _read_manifest(args.batch)
        if args.jobs > 1 and len(pairs) > 1:
            with ProcessPoolExecutor(max_workers=args.jobs) as pool:
                results = list(pool.map(_sieve_pair, pairs))
        else:
            results = [_sieve_pair(p) for p in pairs]
        if args.format == "json":
            out = "".join(json.dumps({"pair": k, **doc}) + "\n" for k, doc in results)
        else:
            out = "".join(_render_report(doc, f"[{k}] ") for k, doc in results)
        _emit(args, out)
        return max((EXIT[doc["verdict"]] for _, doc in results), default=0)
    if not (args.g and args.h):
        raise _Usage("sieve needs two graphs (or --batch)")
    g, _ = _load(args.g)
    h, _ = _load(args.h)
    doc = qi_sieve(g, h).as_dict()
    _emit(args, json.dumps(doc, indent=2) + "\n" if args.format == "json" else _render_report(doc))
    return EXIT[doc["verdict"]]


# gamma

def cmd_gamma(args) -> int:
    g, names = _load(args.input)
    fmt = _namer(names)
    ag = parse_anchor(args.anchor, g, names)
    if not ag.is_connected:
        raise GraphError("gamma needs a connected graph")
    res, origin = gamma(ag, return_origin=True)
    comps = []
    for c in res.components():
        comps.append({"vertices": [str(v) for v in c.graph.vertices],
                      "edges": [[str(a), str(b)] for a, b in c.graph.edges()],
                      "anchor": [str(v) for v in sorted(c.anchor)],
                      "anchor_kind": c.kind().value if c.graph.n else None})
    doc = {"input_anchor": {"kind": ag.kind().value, "vertices": _set(ag.anchor, fmt)},
           "components": comps,
           "provenance": {str(k): fmt(v) for k, v in sorted(origin.items())}}
    if args.format == "dot":
        _emit(args, gio.graph_to_dot(res.graph, "gamma", highlight=res.anchor))
    elif args.format == "json":
        _emit(args, json.dumps(doc, indent=2) + "\n")
    else:
        lines = [f"anchor: {doc['input_anchor']['kind']} {{{', '.join(doc['input_anchor']['vertices'])}}}",
                 f"gamma: {len(comps)} component(s)"]
        for i, c in enumerate(comps):
            es = ", ".join(f"{a}-{b}" for a, b in c["edges"]) or "no edges"
            lines.append(f"  C{i}: vertices {{{', '.join(c['vertices'])}}}; {es}")
            lines.append(f"      anchor ({c['anchor_kind']}): {{{', '.join(c['anchor'])}}}")
        moved = {k: v for k, v in doc["provenance"].items() if k != v}
        if moved:
            lines.append("provenance: " + ", ".join(f"{k}<-{v}" for k, v in moved.items()))
        _emit(args, "\n".join(lines) + "\n")
    return 0


# magic unitaries

def _commutator_norm(u: MagicUnitary) -> float:
    e = u.entries.reshape(-1, u.dim, u.dim)
    nz = e[opnorm(e) > u.tolerance]
    if len(nz) < 2:
        return 0.0
    prod = np.einsum("pij,qjk->pqik", nz, nz)
    return float(np.max(opnorm(prod - prod.transpose(1, 0, 2, 3))))


def verify_doc(u: MagicUnitary, g: Graph, h: Graph, ag=None, ah=None, audit_distances: bool = False) -> dict:
    rep = validate_mu(u)
    tol = u.tolerance
    checks = [
        ("projection", rep.max_projection_residual),
        ("row_sums", rep.max_row_residual),
        ("col_sums", rep.max_col_residual),
        ("intertwines_adjacency", qi_residual(u, g, h)),
    ]
    if ag is not None and ah is not None:
        checks.append(("preserves_anchor", anchor_residual(u, ag.anchor, ah.anchor)))
    doc = {"tolerance": tol, "dim": u.dim,
           "checks": [{"name": n, "residual": r, "passed": r <= tol} for n, r in checks]}
    doc["passed"] = all(c["passed"] for c in doc["checks"])
    comm = _commutator_norm(u)
    doc["max_commutator_norm"] = comm
    doc["commutative"] = comm <= tol
    if doc["passed"]:
        doc["walk_compatibility_audit"] = fulton_compatible(u, g, h)
    if audit_distances and doc["passed"] and g.n and g.is_connected() and h.is_connected():
        doc["block_distance_violations"] = [
            {"row": str(v.row), "col": str(v.col), "g": v.g_distance, "h": v.h_distance}
            for v in block_distance_audit(u, g, h)]
    return doc


def _render_verify(doc: dict) -> str:
    lines = [f"{'check':<24}{'residual':>14}  result  (tolerance {doc['tolerance']:.1e}, d={doc['dim']})"]
    for c in doc["checks"]:
        lines.append(f"{c['name']:<24}{c['residual']:>14.3e}  {'PASS' if c['passed'] else 'FAIL'}")
    if doc["commutative"]:
        lines.append("entries commute pairwise")
    else:
        lines.append(f"entries do not commute: max ||pq - qp|| = {doc['max_commutator_norm']:.3g}")
    if "walk_compatibility_audit" in doc:
        lines.append(f"walk compatibility audit: {'ok' if doc['walk_compatibility_audit'] else 'VIOLATED'}")
    if "block_distance_violations" in doc:
        lines.append(f"block distance audit: {len(doc['block_distance_violations'])} violation(s)")
    lines.append("overall: " + ("PASS" if doc["passed"] else "FAIL"))
    return "\n".join(lines) + "\n"


def _load_mu(args) -> Tuple[MagicUnitary, Graph, Graph, dict, dict]:
    g, ng = _load(args.g)
    h, nh = _load(args.h)
    u = gio.load_mu(args.mu)
    if args.tolerance is not None or os.environ.get("BLOCKSIEVE_TOLERANCE"):
        u = u.with_tolerance(_tolerance(args.tolerance))
    if u.cols != g.vertices or u.rows != h.vertices:
        raise IndexMismatch("the unitary's cols/rows must list the vertices of G/H in sorted order")
    return u, g, h, ng, nh


def cmd_verify_mu(args) -> int:
    u, g, h, ng, nh = _load_mu(args)
    ag = parse_anchor(args.anchor, g, ng) if args.anchor else None
    ah = parse_anchor(args.anchor_h or args.anchor, h, nh) if args.anchor else None
    doc = verify_doc(u, g, h, ag, ah, args.audit_distances)
    _emit(args, json.dumps(doc, indent=2) + "\n" if args.format == "json" else _render_verify(doc))
    return 0 if doc["passed"] else 1


def cmd_transport_mu(args) -> int:
    u, g, h, ng, nh = _load_mu(args)
    ag = parse_anchor(args.anchor, g, ng)
    ah = parse_anchor(args.anchor_h or args.anchor, h, nh)
    out = gamma_transport(u, ag, ah, verify=True)
    gg, gh = gamma(ag), gamma(ah)
    doc = verify_doc(out, gg.graph, gh.graph, gg, gh)
    text = gio.dump_mu(out) + "\n"
    report = _render_verify(doc) if args.format != "json" else json.dumps(doc, indent=2) + "\n"
    if args.out:
        Path(args.out).write_text(text)
        sys.stdout.write(report)
    else:
        sys.stdout.write(text)
        sys.stderr.write(report)
    return 0 if doc["passed"] else 1


FIXTURES = {
    "c4": lambda: (samples.noncommuting_c4_mu(), None),
    "sun": samples.sun_mu,
    "glued-triangles": lambda: samples.glued_triangles_swap(),
    "double-wheel": samples.double_wheel_mu,
}


def cmd_fixture(args) -> int:
    """Write a sample magic unitary (and its graph as an edge list) for experimentation."""
    u, ag = FIXTURES[args.name]()
    g = ag.graph if ag is not None else cycle_graph(4)
    if args.graph_out:
        Path(args.graph_out).write_text(gio.to_edgelist(g))
    _emit(args, gio.dump_mu(u) + "\n")
    return 0


def _emit(args, text: str) -> None:
    if getattr(args, "out", None) and args.command != "transport-mu":
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["human", "json", "dot"], default="human")
    common.add_argument("--tolerance", type=float, default=None,
                        help="numerical tolerance (default 1e-9, or $BLOCKSIEVE_TOLERANCE)")
    common.add_argument("--out", help="write the main output to this file")

    p = _Parser(prog="blocksieve", description="Block structure and quantum isomorphism tools.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("blocks", parents=[common], help="blocks, cut vertices, block tree and graph, centre")
    b.add_argument("input", help="graph file (.g6, .json, edge list) or g6:<string>")
    b.set_defaults(func=cmd_blocks)

    s = sub.add_parser("sieve", parents=[common], help="try to refute quantum isomorphism of two graphs")
    s.add_argument("g", nargs="?")
    s.add_argument("h", nargs="?")
    s.add_argument("--batch", help="manifest with one pair of graph inputs per line")
    s.add_argument("--jobs", type=int, default=1, help="parallel workers for --batch")
    s.set_defaults(func=cmd_sieve)

    gm = sub.add_parser("gamma", parents=[common], help="apply the gamma operation to an anchored graph")
    gm.add_argument("input")
    gm.add_argument("--anchor", required=True, help="cut:<id> | block:<id,...> | zbar")
    gm.set_defaults(func=cmd_gamma)

    for name, func, help_ in (("verify-mu", cmd_verify_mu, "check a magic unitary between two graphs"),
                              ("transport-mu", cmd_transport_mu, "transport a magic unitary through gamma")):
        v = sub.add_parser(name, parents=[common], help=help_)
        v.add_argument("g")
        v.add_argument("h")
        v.add_argument("mu", help="magic unitary JSON file")
        v.add_argument("--anchor", required=(name == "transport-mu"), help="anchor of G")
        v.add_argument("--anchor-h", help="anchor of H (defaults to --anchor)")
        if name == "verify-mu":
            v.add_argument("--audit-distances", action="store_true",
                           help="report block tree distance violations (audit only)")
        v.set_defaults(func=func)

    f = sub.add_parser("fixture", parents=[common], help="emit a sample magic unitary")
    f.add_argument("name", choices=sorted(FIXTURES))
    f.add_argument("--graph-out", help="also write the graph as an edge list")
    f.set_defaults(func=cmd_fixture)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _tolerance(args.tolerance)
        return args.func(args)
    except _Usage as exc:
        print(f"blocksieve: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except gio.ParseError as exc:
        print(f"blocksieve: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except InvalidAnchor as exc:
        print(f"blocksieve: invalid anchor: {exc}", file=sys.stderr)
        return EXIT_ANCHOR
    except (DimensionMismatch, IndexMismatch) as exc:
        print(f"blocksieve: dimension mismatch: {exc}", file=sys.stderr)
        return EXIT_DIMENSION
    except PreconditionFailed as exc:
        print(f"blocksieve: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except GraphError as exc:
        print(f"blocksieve: error: {exc}", file=sys.stderr)
        return EXIT_GRAPH


if __name__ == "__main__":
    sys.exit(main())
