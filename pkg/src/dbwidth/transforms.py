"""Source/sink identification and splitting, contractions and subgraphs."""

from __future__ import annotations

from collections.abc import Iterable

from .core import DiGraph, reachable, sources_and_sinks
from .errors import InvalidEdgeError, NotIdentifiableError


def _rebuild(
    d: DiGraph, vertex_map: list[int], n: int, labels, keep_edges: Iterable[int], collapse: bool = True
) -> tuple[DiGraph, list[int | None]]:
    """Map endpoints through ``vertex_map``; drop loops and, with ``collapse``, repeated arcs (first copy wins)."""
    edges: list[tuple[int, int]] = []
    seen: dict[tuple[int, int], int] = {}
    edge_map: list[int | None] = [None] * d.m
    for i in keep_edges:
        t, h = d.edges[i]
        e = (vertex_map[t], vertex_map[h])
        if e[0] == e[1]:
            continue
        if e in seen and collapse:
            edge_map[i] = seen[e]
            continue
        seen[e] = len(edges)
        edge_map[i] = len(edges)
        edges.append(e)
    return DiGraph(n, tuple(edges), labels, multigraph=not collapse or d.multigraph), edge_map


def _merge_map(d: DiGraph, keep: int, drop: int) -> list[int]:
    """Vertex map that sends ``drop`` onto ``keep`` and closes the gap left by ``drop``."""
    out = []
    for v in range(d.n):
        w = keep if v == drop else v
        out.append(w - 1 if w > drop else w)
    return out


def _merged_labels(d: DiGraph, drop: int, label: str | None, keep: int):
    if d.labels is None:
        return None
    labels = list(d.labels)
    if label is not None:
        labels[keep] = label
    del labels[drop]
    return tuple(labels)


def identify_source_sink(
    d: DiGraph, x: int, y: int, *, label: str | None = None, keep_parallel: bool = False
) -> DiGraph:
    """Merge two sources (or two sinks) ``x`` and ``y`` into one vertex.

    The merged vertex keeps the smaller index (and its label unless ``label``
    is given).  Arcs that become identical are collapsed unless
    ``keep_parallel`` is set, in which case the result is a multigraph with
    every original arc (the reading under which edge counts such as the
    directed max cut are preserved).
    """
    if x == y:
        raise NotIdentifiableError("cannot identify a vertex with itself")
    sources, sinks = sources_and_sinks(d)
    if not ({x, y} <= sources or {x, y} <= sinks):
        raise NotIdentifiableError(f"{d.label(x)} and {d.label(y)} are not both sources or both sinks")
    keep, drop = min(x, y), max(x, y)
    h, _ = _rebuild(
        d, _merge_map(d, keep, drop), d.n - 1, _merged_labels(d, drop, label, keep), range(d.m), not keep_parallel
    )
    return h


def source_sink_split(d: DiGraph) -> tuple[DiGraph, list[int]]:
    """Replace every source or sink of degree k >= 2 by k degree-1 copies.

    Returns the split digraph and the edge bijection (old index -> new
    index).  Edge order is preserved, so the bijection is the identity; the
    first incident edge keeps the original vertex and later ones get new
    vertices appended after the old ones.  Isolated vertices are kept.
    """
    sources, sinks = sources_and_sinks(d)
    edges = [list(e) for e in d.edges]
    labels = list(d.labels) if d.labels is not None else None
    n = d.n
    for v in range(d.n):
        if v not in sources and v not in sinks:
            continue
        incident = sorted(d.out_adj[v] + d.in_adj[v])
        for k, i in enumerate(incident[1:], start=2):
            side = 0 if d.edges[i][0] == v else 1
            edges[i][side] = n
            if labels is not None:
                labels.append(f"{labels[v]}#{k}")
            n += 1
    h = DiGraph(n, tuple(map(tuple, edges)), tuple(labels) if labels is not None else None)
    return h, list(range(d.m))


def split_origin(d: DiGraph, h: DiGraph) -> list[int]:
    """For each vertex of the split ``h`` of ``d``, the vertex of ``d`` it copies."""
    origin = list(range(d.n)) + [0] * (h.n - d.n)
    for i, (t, hd) in enumerate(h.edges):
        ot, oh = d.edges[i]
        origin[t] = ot
        origin[hd] = oh
    return origin


def _check_edge(d: DiGraph, e: int) -> None:
    if not 0 <= e < d.m:
        raise InvalidEdgeError(f"edge index {e} not in [0, {d.m})")


def contract_edge(d: DiGraph, e: int) -> DiGraph:
    """D / e: merge the endpoints of ``e`` and union their neighborhoods.

    The merged vertex takes the tail's index position (indices above the
    head shift down by one) and the tail's label.  A would-be loop from an
    antiparallel partner is discarded and duplicate arcs are collapsed.
    """
    _check_edge(d, e)
    x, y = d.edges[e]
    keep, drop = min(x, y), max(x, y)
    labels = _merged_labels(d, drop, d.label(x) if d.labels is not None else None, keep)
    h, _ = _rebuild(d, _merge_map(d, keep, drop), d.n - 1, labels, (i for i in range(d.m) if i != e))
    return h


def is_butterfly_edge(d: DiGraph, e: int) -> bool:
    _check_edge(d, e)
    x, y = d.edges[e]
    return d.out_degree(x) == 1 and d.in_degree(y) == 1


def is_two_contractible(d: DiGraph, e: int) -> bool:
    """Both conditions of the directed topological minor contraction rule.

    V3 holds the vertices incident with at least three edges; reachability
    is directed and computed in D - e, with the trivial path allowed.
    """
    _check_edge(d, e)
    x, y = d.edges[e]
    v3 = {v for v in range(d.n) if d.degree(v) >= 3}
    if x in v3 and y in v3:
        return False
    if any(d.edges[i][1] == x for i in d.out_adj[y]):
        return True
    without = 1 << e
    from_x = reachable(d, [x], removed_edges=without)
    if not from_x & v3:
        return True
    reach_y = {z for z in v3 if y in reachable(d, [z], removed_edges=without)}
    return not reach_y


def delete_edges(d: DiGraph, f: Iterable[int]) -> tuple[DiGraph, list[int | None]]:
    """D - F with all vertices kept; returns the old-to-new edge index map."""
    f = set(f)
    for e in f:
        _check_edge(d, e)
    keep = [i for i in range(d.m) if i not in f]
    edge_map: list[int | None] = [None] * d.m
    for new, old in enumerate(keep):
        edge_map[old] = new
    return DiGraph(d.n, tuple(d.edges[i] for i in keep), d.labels, d.multigraph), edge_map


def delete_vertices(d: DiGraph, u: Iterable[int]) -> tuple[DiGraph, list[int | None]]:
    """D - U; remaining vertices are renumbered and the old-to-new vertex map returned."""
    u = set(u)
    vertex_map: list[int | None] = []
    nxt = 0
    for v in range(d.n):
        if v in u:
            vertex_map.append(None)
        else:
            vertex_map.append(nxt)
            nxt += 1
    edges = tuple(
        (vertex_map[t], vertex_map[h]) for t, h in d.edges if t not in u and h not in u
    )
    labels = tuple(d.labels[v] for v in range(d.n) if v not in u) if d.labels is not None else None
    return DiGraph(nxt, edges, labels, d.multigraph), vertex_map


def compact(d: DiGraph) -> tuple[DiGraph, list[int | None]]:
    """Remove isolated vertices."""
    return delete_vertices(d, [v for v in range(d.n) if d.degree(v) == 0])
