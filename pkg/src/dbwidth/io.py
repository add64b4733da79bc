"""Graph, layout and result serialization.

Graphs come in two encodings.  The text format is a header line ``n m``
followed by ``m`` lines ``tail head`` (0-based); blank lines and ``#``
comments are ignored.  The structured format is a JSON document
``{"vertices": [names], "edges": [[tail, head], ...]}`` where endpoints are
indices or vertex names and ``"directed": false`` marks an undirected graph.
"""

from __future__ import annotations

import json
from typing import Any

from .core import DiGraph, UGraph, build_digraph
from .errors import GraphError, ParseError
from .layout import CutFunction, LayoutTree, layout_width

SCHEMA_VERSION = 1


# --------------------------------------------------------------------------
# graphs


def _text_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _ints(line: str, lineno: int, count: int) -> list[int]:
    parts = line.split()
    if len(parts) != count:
        raise ParseError(f"expected {count} integers, got {len(parts)}", lineno)
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise ParseError(f"not an integer in {line!r}", lineno) from None


def parse_text(text: str) -> tuple[int, list[tuple[int, int]], list[int]]:
    """Vertex count, edge list and the source line of each edge."""
    lines = list(_text_lines(text))
    if not lines:
        raise ParseError("empty input: expected header 'n m'", 1)
    lineno, header = lines[0]
    n, m = _ints(header, lineno, 2)
    if n < 0 or m < 0:
        raise ParseError("n and m must be non-negative", lineno)
    body = lines[1:]
    if len(body) != m:
        where = body[m][0] if len(body) > m else (body[-1][0] + 1 if body else lineno + 1)
        raise ParseError(f"header announces {m} edges, found {len(body)}", where)
    edges, where = [], []
    for lineno, line in body:
        t, h = _ints(line, lineno, 2)
        if not (0 <= t < n and 0 <= h < n):
            raise ParseError(f"endpoint outside [0, {n})", lineno)
        edges.append((t, h))
        where.append(lineno)
    return n, edges, where


def _edge_lines(text: str) -> list[int]:
    """Line number of each element of the top-level ``edges`` array (best effort)."""
    key = text.find('"edges"')
    if key < 0:
        return []
    i = text.find("[", key)
    lines, depth, in_str, esc = [], 0, False, False
    while 0 <= i < len(text):
        c = text[i]
        if in_str:
            if esc:
                esc = False
            elif c == "\\":
                esc = True
            elif c == '"':
                in_str = False
        elif c == '"':
            in_str = True
        elif c == "[":
            depth += 1
            if depth == 2:
                lines.append(text.count("\n", 0, i) + 1)
        elif c == "]":
            depth -= 1
            if depth == 0:
                break
        i += 1
    return lines


def parse_structured(text: str) -> tuple[int, list[tuple[int, int]], list[str] | None, bool, list[int]]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    if not isinstance(doc, dict):
        raise ParseError("structured graph must be an object", 1)
    lines = _edge_lines(text)
    names = doc.get("vertices")
    if names is None:
        raise ParseError("missing field 'vertices'", 1)
    if isinstance(names, int):
        names = [str(i) for i in range(names)]
    if not isinstance(names, list):
        raise ParseError("'vertices' must be a list of names", 1)
    names = [str(x) for x in names]
    index = {}
    for i, name in enumerate(names):
        if name in index:
            raise ParseError(f"duplicate vertex name {name!r}", 1)
        index[name] = i
    raw = doc.get("edges", [])
    if not isinstance(raw, list):
        raise ParseError("'edges' must be a list", 1)
    edges = []
    for k, e in enumerate(raw):
        line = lines[k] if k < len(lines) else None
        if not isinstance(e, list) or len(e) != 2:
            raise ParseError(f"edge {k} must be a pair", line)
        pair = []
        for end in e:
            if isinstance(end, bool):
                raise ParseError(f"edge {k} has a boolean endpoint", line)
            if isinstance(end, int):
                if not 0 <= end < len(names):
                    raise ParseError(f"edge {k} endpoint {end} outside [0, {len(names)})", line)
                pair.append(end)
            elif isinstance(end, str) and end in index:
                pair.append(index[end])
            else:
                raise ParseError(f"edge {k} has unknown endpoint {end!r}", line)
        edges.append(tuple(pair))
    directed = doc.get("directed", True)
    return len(names), edges, names, bool(directed), [lines[k] if k < len(lines) else None for k in range(len(edges))]


def _detect(text: str, fmt: str) -> str:
    if fmt != "auto":
        return fmt
    return "structured" if text.lstrip().startswith("{") else "text"


def read_digraph(text: str, fmt: str = "auto", *, multigraph: bool = False) -> DiGraph:
    fmt = _detect(text, fmt)
    if fmt == "text":
        n, edges, where = parse_text(text)
        names = None
    elif fmt == "structured":
        n, edges, names, _, where = parse_structured(text)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    seen: dict[tuple[int, int], int] = {}
    for k, (t, h) in enumerate(edges):
        if t == h:
            raise ParseError(f"self-loop at vertex {t}", where[k])
        if (t, h) in seen and not multigraph:
            raise ParseError(f"parallel edge {t} -> {h} (first given as edge {seen[(t, h)]})", where[k])
        seen.setdefault((t, h), k)
    try:
        return build_digraph(n, edges, labels=names, multigraph=multigraph)
    except GraphError as exc:
        raise ParseError(str(exc)) from None


def read_ugraph(text: str, fmt: str = "auto") -> UGraph:
    fmt = _detect(text, fmt)
    if fmt == "text":
        n, edges, where = parse_text(text)
        names = None
    else:
        n, edges, names, _, where = parse_structured(text)
    for k, (a, b) in enumerate(edges):
        if a == b:
            raise ParseError(f"self-loop at vertex {a}", where[k])
    return UGraph(n, tuple(edges), tuple(names) if names is not None else None)


def graph_to_doc(g: DiGraph | UGraph) -> dict[str, Any]:
    doc: dict[str, Any] = {
        "vertices": [g.label(v) for v in range(g.n)],
        "edges": [list(e) for e in g.edges],
    }
    if isinstance(g, UGraph):
        doc["directed"] = False
    return doc


def digraph_from_doc(doc: dict[str, Any]) -> DiGraph:
    return read_digraph(json.dumps(doc), "structured")


def ugraph_from_doc(doc: dict[str, Any]) -> UGraph:
    return read_ugraph(json.dumps(doc), "structured")


def write_graph(g: DiGraph | UGraph, fmt: str = "text") -> str:
    if fmt == "text":
        lines = [f"{g.n} {g.m}"] + [f"{t} {h}" for t, h in g.edges]
        return "\n".join(lines) + "\n"
    if fmt == "structured":
        return json.dumps(graph_to_doc(g), indent=2) + "\n"
    raise ValueError(f"unknown format {fmt!r}")


# --------------------------------------------------------------------------
# layouts


def layout_to_doc(t: LayoutTree, f: CutFunction) -> dict[str, Any]:
    report = layout_width(t, f)
    return {
        "schema_version": SCHEMA_VERSION,
        "cut_kind": f.kind,
        "ground_size": t.ground_size,
        "tree_edges": [list(e) for e in t.tree_edges],
        "leaf_map": {str(node): e for node, e in sorted(t.leaf_map.items())},
        "per_edge_orders": [report.per_edge_orders[e] for e in t.tree_edges],
        "width": report.width,
    }


def layout_from_doc(doc: dict[str, Any], f: CutFunction | None = None) -> LayoutTree:
    """Rebuild a layout; with ``f`` the recorded orders and width are re-verified."""
    try:
        edges = [tuple(e) for e in doc["tree_edges"]]
        leaf_map = {int(k): int(v) for k, v in doc["leaf_map"].items()}
        ground = int(doc["ground_size"])
        nodes = 1 + max([max(e) for e in edges] + list(leaf_map), default=-1)
        tree = LayoutTree(nodes, tuple(edges), leaf_map, ground)
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"invalid layout document: {exc}") from None
    if f is not None:
        if "cut_kind" in doc and doc["cut_kind"] != f.kind:
            raise ParseError(f"layout was scored with {doc['cut_kind']!r}, not {f.kind!r}")
        report = layout_width(tree, f)
        if "width" in doc and doc["width"] != report.width:
            raise ParseError(f"recorded width {doc['width']} but the layout scores {report.width}")
        recorded = doc.get("per_edge_orders")
        if recorded is not None and list(recorded) != [report.per_edge_orders[e] for e in tree.tree_edges]:
            raise ParseError("recorded per-edge orders do not match the layout")
    return tree


def layout_to_dot(t: LayoutTree, f: CutFunction | None = None) -> str:
    """Graphviz description of the tree; leaves show their element, edges their order."""
    names = f.names if f is not None and f.names else None
    orders = layout_width(t, f).per_edge_orders if f is not None else {}
    out = ["graph layout {"]
    for u in range(t.node_count):
        if u in t.leaf_map:
            e = t.leaf_map[u]
            label = names[e] if names else str(e)
            out.append(f'  n{u} [shape=box, label="{label}"];')
        else:
            out.append(f'  n{u} [shape=point];')
    for e in t.tree_edges:
        attr = f' [label="{orders[e]}"]' if e in orders else ""
        out.append(f"  n{e[0]} -- n{e[1]}{attr};")
    out.append("}")
    return "\n".join(out) + "\n"


# --------------------------------------------------------------------------
# solver results and DRED sidecars


def result_doc(problem: str, answer: Any, witness: Any = None, checks: dict[str, Any] | None = None) -> dict[str, Any]:
    return {
        "schema_version": SCHEMA_VERSION,
        "problem": problem,
        "answer": answer,
        "witness": witness,
        "certificate_checks": checks or {},
    }


def dred_sidecar(inst) -> dict[str, int]:
    return {"k": inst.k, "h": inst.h, "s": inst.s}


def read_dred(graph_text: str, sidecar_text: str, fmt: str = "auto"):
    from .solvers import DredInstance

    d = read_digraph(graph_text, fmt)
    try:
        side = json.loads(sidecar_text)
        return DredInstance(d, int(side["k"]), int(side["h"]), int(side["s"]))
    except json.JSONDecodeError as exc:
        raise ParseError(exc.msg, exc.lineno) from None
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"invalid DRED sidecar: {exc}") from None
