"""Reading and writing graphs (graph6, edge lists, JSON), magic unitaries (JSON) and DOT."""
from __future__ import annotations

import json
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import numpy as np

from .graph import Graph, GraphError, VertexId, vid
from .magic import DEFAULT_TOLERANCE, DimensionMismatch, MagicUnitary
from .trees import Color, ColoredTree, FreshNode, RootedColoredTree

GRAPH6_HEADER = ">>graph6<<"


class ParseError(GraphError):
    def __init__(self, message: str, line: int = 1, column: int = 1, source: str = "<input>"):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.source = source


# graph6

def _g6_size(data: bytes, col0: int) -> Tuple[int, int]:
    if not data:
        raise ParseError("empty graph6 string", column=col0)
    if data[0] != 126:
        return data[0] - 63, 1
    if len(data) >= 2 and data[1] == 126:
        chunk, used = data[2:8], 8
    else:
        chunk, used = data[1:4], 4
    if len(chunk) != used - (2 if used == 8 else 1):
        raise ParseError("truncated graph6 size field", column=col0)
    n = 0
    for c in chunk:
        n = (n << 6) | (c - 63)
    return n, used


def parse_graph6(text: str, line: int = 1, source: str = "<input>") -> Graph:
    """Decode one graph6 string (optionally with the ``>>graph6<<`` header)."""
    s = text.strip()
    col0 = 1
    if s.startswith(GRAPH6_HEADER):
        s = s[len(GRAPH6_HEADER):]
        col0 += len(GRAPH6_HEADER)
    data = s.encode("ascii", errors="replace")
    for k, c in enumerate(data):
        if not 63 <= c <= 126:
            raise ParseError(f"byte {chr(c)!r} outside the graph6 range", line, col0 + k, source)
    try:
        n, used = _g6_size(data, col0)
    except ParseError as exc:
        raise ParseError(str(exc).split(": ", 1)[-1], line, col0, source) from None
    need = (n * (n - 1) // 2 + 5) // 6
    body = data[used:]
    if len(body) != need:
        raise ParseError(f"expected {need} edge bytes for n={n}, got {len(body)}", line, col0 + used, source)
    bits = []
    for c in body:
        v = c - 63
        bits.extend((v >> (5 - b)) & 1 for b in range(6))
    m = n * (n - 1) // 2
    if any(bits[m:]):
        raise ParseError("nonzero padding bits", line, col0 + len(data) - 1, source)
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if bits[k]:
                edges.append((i, j))
            k += 1
    return Graph(range(n), edges)


def to_graph6(g: Graph, header: bool = False) -> str:
    """Encode with vertices taken in sorted order as 0..n-1."""
    n = g.n
    if n <= 62:
        out = [n + 63]
    elif n <= 258047:
        out = [126] + [((n >> s) & 63) + 63 for s in (12, 6, 0)]
    else:
        out = [126, 126] + [((n >> s) & 63) + 63 for s in (30, 24, 18, 12, 6, 0)]
    idx = g.index()
    adj = {(min(idx[a], idx[b]), max(idx[a], idx[b])) for a, b in g.edges()}
    bits = [1 if (i, j) in adj else 0 for j in range(1, n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    for k in range(0, len(bits), 6):
        v = 0
        for b in bits[k:k + 6]:
            v = (v << 1) | b
        out.append(v + 63)
    return (GRAPH6_HEADER if header else "") + bytes(out).decode("ascii")


# Edge lists

def parse_edgelist(text: str, source: str = "<input>") -> Tuple[Graph, Dict[VertexId, str]]:
    """One edge ``u v`` (or one isolated vertex ``u``) per line; ``#`` starts a comment.

    Tokens that all look like vertex ids (``3`` or ``1:3``) are used as ids;
    otherwise every token is a name and ids are handed out in order of first
    appearance. Returns the graph and the id -> name map.
    """
    rows: List[Tuple[int, List[Tuple[str, int]]]] = []
    for ln, raw in enumerate(text.splitlines(), 1):
        body = raw.split("#", 1)[0]
        toks = []
        pos = 0
        for t in body.replace(",", " ").split():
            col = body.index(t, pos) + 1
            pos = col - 1 + len(t)
            toks.append((t, col))
        if not toks:
            continue
        if len(toks) > 2:
            raise ParseError(f"expected 1 or 2 tokens, got {len(toks)}", ln, toks[2][1], source)
        rows.append((ln, toks))

    def as_id(t: str) -> Optional[VertexId]:
        try:
            v = VertexId.parse(t)
        except ValueError:
            return None
        return v if v.namespace >= 0 and v.local >= 0 else None

    tokens = [t for _, toks in rows for t, _ in toks]
    numeric = all(as_id(t) is not None for t in tokens)
    names: Dict[str, VertexId] = {}
    for t in tokens:
        if t not in names:
            names[t] = as_id(t) if numeric else VertexId(0, len(names))
    verts = set(names.values())
    if len(verts) != len(names):
        raise ParseError("two tokens name the same vertex", source=source)
    edges = []
    for ln, toks in rows:
        if len(toks) == 2:
            (a, ca), (b, cb) = toks
            if names[a] == names[b]:
                raise ParseError(f"loop at {a}", ln, cb, source)
            edges.append((names[a], names[b]))
    return Graph(verts, edges), {v: t for t, v in names.items()}


def to_edgelist(g: Graph) -> str:
    lines = [f"{a} {b}" for a, b in g.edges()]
    lines += [str(v) for v in g.vertices if not g.neighbors(v)]
    return "\n".join(lines) + "\n"


# JSON graph documents

def graph_to_json(g: Graph, name: Optional[str] = None) -> dict:
    doc = {"vertices": [str(v) for v in g.vertices], "edges": [[str(a), str(b)] for a, b in g.edges()]}
    if name is not None:
        doc["name"] = name
    return doc


def graph_from_json(doc, source: str = "<input>") -> Graph:
    if not isinstance(doc, dict) or "edges" not in doc:
        raise ParseError("graph document needs an 'edges' list", source=source)
    try:
        verts = [vid(v) for v in doc.get("vertices", [])]
        edges = [(vid(a), vid(b)) for a, b in doc["edges"]]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad vertex id: {exc}", source=source) from None
    vs = set(verts)
    for a, b in edges:
        vs.update((a, b))
    try:
        return Graph(vs, edges)
    except GraphError as exc:
        raise ParseError(str(exc), source=source) from None


def _json_loads(text: str, source: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno, exc.colno, source) from None


def parse_graph(text: str, source: str = "<input>", fmt: Optional[str] = None) -> Graph:
    """Parse a graph document. ``fmt`` is ``graph6``, ``edgelist``, ``json`` or None to detect."""
    if fmt is None:
        fmt = detect_format(text)
    if fmt == "graph6":
        lines = [(k, ln) for k, ln in enumerate(text.splitlines(), 1) if ln.strip()]
        if len(lines) != 1:
            raise ParseError("graph6 input must hold exactly one graph", source=source)
        return parse_graph6(lines[0][1], lines[0][0], source)
    if fmt == "edgelist":
        return parse_edgelist(text, source)[0]
    if fmt == "json":
        return graph_from_json(_json_loads(text, source), source)
    raise ParseError(f"unknown graph format {fmt!r}", source=source)


def _looks_graph6(line: str) -> bool:
    s = line.strip()
    if s.startswith(GRAPH6_HEADER):
        return True
    return bool(s) and all(63 <= ord(c) <= 126 for c in s)


def detect_format(text: str) -> str:
    s = text.lstrip()
    if s.startswith("{"):
        return "json"
    lines = [ln for ln in text.splitlines() if ln.split("#", 1)[0].strip()]
    if len(lines) == 1 and _looks_graph6(lines[0]) and " " not in lines[0].strip():
        s = lines[0].strip()
        if s.startswith(GRAPH6_HEADER):
            return "graph6"
        try:
            parse_graph6(s)
            return "graph6"
        except ParseError:
            pass
    return "edgelist"


def load_graph(spec: str, fmt: Optional[str] = None) -> Graph:
    """Load from a path, or inline from ``g6:<string>``."""
    if spec.startswith("g6:"):
        return parse_graph6(spec[3:], source="<inline>")
    path = Path(spec)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read: {exc.strerror}", 0, 0, spec) from None
    if fmt is None:
        fmt = {".g6": "graph6", ".json": "json", ".edges": "edgelist", ".txt": "edgelist"}.get(path.suffix)
    return parse_graph(text, spec, fmt)


# Magic unitaries

def mu_to_json(u: MagicUnitary) -> dict:
    e = u.entries
    return {
        "rows": [str(a) for a in u.rows],
        "cols": [str(x) for x in u.cols],
        "dim": u.dim,
        "tolerance": u.tolerance,
        "entries": [[[[[float(z.real), float(z.imag)] for z in row] for row in e[i, j]]
                     for j in range(e.shape[1])] for i in range(e.shape[0])],
    }


def mu_from_json(doc, source: str = "<input>") -> MagicUnitary:
    if not isinstance(doc, dict):
        raise ParseError("magic unitary document must be an object", source=source)
    for key in ("rows", "cols", "dim", "entries"):
        if key not in doc:
            raise ParseError(f"missing key {key!r}", source=source)
    try:
        rows = [vid(a) for a in doc["rows"]]
        cols = [vid(x) for x in doc["cols"]]
    except (TypeError, ValueError) as exc:
        raise ParseError(f"bad vertex id: {exc}", source=source) from None
    d = doc["dim"]
    try:
        arr = np.array(doc["entries"], dtype=float)
    except (TypeError, ValueError):
        raise DimensionMismatch("entries are ragged") from None
    if arr.shape != (len(rows), len(cols), d, d, 2):
        raise DimensionMismatch(f"entries have shape {arr.shape}, expected {(len(rows), len(cols), d, d, 2)}")
    tol = float(doc.get("tolerance", DEFAULT_TOLERANCE))
    return MagicUnitary(rows, cols, arr[..., 0] + 1j * arr[..., 1], tol)


def load_mu(path: str) -> MagicUnitary:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParseError(f"cannot read: {exc.strerror}", 0, 0, path) from None
    return mu_from_json(_json_loads(text, path), path)


def dump_mu(u: MagicUnitary) -> str:
    return json.dumps(mu_to_json(u))


# DOT

def _node_label(payload) -> str:
    if isinstance(payload, frozenset):
        return "{" + ",".join(str(v) for v in sorted(payload)) + "}"
    if isinstance(payload, FreshNode):
        return f"{payload.tag}#{payload.serial}"
    return str(payload)


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def tree_to_dot(t, name: str = "block_tree") -> str:
    """Blocks as white boxes, cut vertices as black circles; a root is drawn with a double border."""
    root = None
    if isinstance(t, RootedColoredTree):
        root, t = t.root, t.tree
    lines = [f"graph {_quote(name)} {{", "  node [style=filled];"]
    for i, node in enumerate(t.nodes):
        if node.color is Color.WHITE:
            attrs = "shape=box, fillcolor=white, fontcolor=black"
        else:
            attrs = "shape=circle, fillcolor=black, fontcolor=white"
        if i == root:
            attrs += ", peripheries=2"
        lines.append(f"  n{i} [label={_quote(_node_label(node.payload))}, {attrs}];")
    for a, b in t.edges():
        lines.append(f"  n{a} -- n{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def graph_to_dot(g: Graph, name: str = "G", highlight=()) -> str:
    hl = {vid(v) for v in highlight}
    lines = [f"graph {_quote(name)} {{"]
    for v in g.vertices:
        extra = ", style=dashed" if v in hl else ""
        lines.append(f"  {_quote(str(v))} [label={_quote(str(v))}{extra}];")
    for a, b in g.edges():
        lines.append(f"  {_quote(str(a))} -- {_quote(str(b))};")
    lines.append("}")
    return "\n".join(lines) + "\n"
