"""Digraph model, separators, directed line graphs and labeling consistency.

Vertex and edge sets cross the public API as frozensets of indices.  The hot
paths (cut functions in :mod:`dbwidth.layout`) use the per-vertex edge
bitmasks precomputed here instead.
"""

from __future__ import annotations

from collections.abc import Iterable, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

from .errors import (
    GraphError,
    InvalidEdgeError,
    ParallelEdgeError,
    ParallelEdgesUnsupportedError,
    SelfLoopError,
)

Edge = tuple[int, int]


def iter_bits(mask: int):
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def mask_of(items: Iterable[int]) -> int:
    mask = 0
    for i in items:
        mask |= 1 << i
    return mask


def _check_endpoints(n: int, edges: Sequence[Edge]) -> None:
    for i, (t, h) in enumerate(edges):
        if not (0 <= t < n and 0 <= h < n):
            raise GraphError(f"edge {i} ({t}, {h}) has an endpoint outside [0, {n})")
        if t == h:
            raise SelfLoopError(f"edge {i} is a self-loop at vertex {t}")


@dataclass(frozen=True)
class DiGraph:
    """A directed graph with stable vertex and edge indices.

    Antiparallel pairs ``x->y, y->x`` are allowed.  Parallel copies of the
    same arc are rejected unless ``multigraph`` is set.
    """

    n: int
    edges: tuple[Edge, ...]
    labels: tuple[str, ...] | None = None
    multigraph: bool = False
    out_adj: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)
    in_adj: tuple[tuple[int, ...], ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        edges = tuple((int(t), int(h)) for t, h in self.edges)
        object.__setattr__(self, "edges", edges)
        if self.n < 0:
            raise GraphError("vertex count must be non-negative")
        _check_endpoints(self.n, edges)
        if not self.multigraph:
            seen: dict[Edge, int] = {}
            for i, e in enumerate(edges):
                if e in seen:
                    raise ParallelEdgeError(f"edge {i} {e} duplicates edge {seen[e]}")
                seen[e] = i
        if self.labels is not None:
            labels = tuple(str(s) for s in self.labels)
            if len(labels) != self.n:
                raise GraphError(f"{len(labels)} labels given for {self.n} vertices")
            object.__setattr__(self, "labels", labels)
        out_adj: list[list[int]] = [[] for _ in range(self.n)]
        in_adj: list[list[int]] = [[] for _ in range(self.n)]
        for i, (t, h) in enumerate(edges):
            out_adj[t].append(i)
            in_adj[h].append(i)
        object.__setattr__(self, "out_adj", tuple(map(tuple, out_adj)))
        object.__setattr__(self, "in_adj", tuple(map(tuple, in_adj)))

    @property
    def m(self) -> int:
        return len(self.edges)

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def vertex(self, name: str) -> int:
        """Index of the vertex labeled ``name``."""
        if self.labels is None:
            return int(name)
        return self.labels.index(name)

    def edge_index(self, tail: int, head: int) -> int:
        for i in self.out_adj[tail]:
            if self.edges[i][1] == head:
                return i
        raise InvalidEdgeError(f"no edge {tail}->{head}")

    def out_neighbors(self, v: int) -> frozenset[int]:
        return frozenset(self.edges[i][1] for i in self.out_adj[v])

    def in_neighbors(self, v: int) -> frozenset[int]:
        return frozenset(self.edges[i][0] for i in self.in_adj[v])

    def out_degree(self, v: int) -> int:
        return len(self.out_adj[v])

    def in_degree(self, v: int) -> int:
        return len(self.in_adj[v])

    def degree(self, v: int) -> int:
        return len(self.out_adj[v]) + len(self.in_adj[v])

    @cached_property
    def out_edge_masks(self) -> tuple[int, ...]:
        return tuple(mask_of(a) for a in self.out_adj)

    @cached_property
    def in_edge_masks(self) -> tuple[int, ...]:
        return tuple(mask_of(a) for a in self.in_adj)

    @cached_property
    def out_vertex_masks(self) -> tuple[int, ...]:
        """Row ``v`` of the GF(2) adjacency matrix as a bitmask over vertices."""
        return tuple(mask_of(self.edges[i][1] for i in a) for a in self.out_adj)

    def edge_name(self, i: int) -> str:
        t, h = self.edges[i]
        return f"{self.label(t)}->{self.label(h)}"

    def with_labels(self, labels: Sequence[str] | None) -> DiGraph:
        return DiGraph(self.n, self.edges, tuple(labels) if labels else None, self.multigraph)


@dataclass(frozen=True)
class UGraph:
    """Undirected multigraph; edge ``i`` is stored as the pair it was built from."""

    n: int
    edges: tuple[Edge, ...]
    labels: tuple[str, ...] | None = None

    def __post_init__(self):
        edges = tuple((int(a), int(b)) for a, b in self.edges)
        object.__setattr__(self, "edges", edges)
        _check_endpoints(self.n, edges)
        if self.labels is not None:
            object.__setattr__(self, "labels", tuple(str(s) for s in self.labels))

    @property
    def m(self) -> int:
        return len(self.edges)

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    @cached_property
    def incident_edge_masks(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for i, (a, b) in enumerate(self.edges):
            masks[a] |= 1 << i
            masks[b] |= 1 << i
        return tuple(masks)

    @cached_property
    def adjacency(self) -> tuple[frozenset[int], ...]:
        nb: list[set[int]] = [set() for _ in range(self.n)]
        for a, b in self.edges:
            nb[a].add(b)
            nb[b].add(a)
        return tuple(frozenset(s) for s in nb)

    def degree(self, v: int) -> int:
        return self.incident_edge_masks[v].bit_count()

    def is_simple(self) -> bool:
        return len({frozenset(e) for e in self.edges}) == len(self.edges)


def build_digraph(
    n: int,
    edge_list: Iterable[Edge],
    *,
    multigraph: bool = False,
    labels: Sequence[str] | None = None,
) -> DiGraph:
    return DiGraph(n, tuple(edge_list), tuple(labels) if labels is not None else None, multigraph)


def build_ugraph(n: int, edge_list: Iterable[Edge], labels: Sequence[str] | None = None) -> UGraph:
    return UGraph(n, tuple(edge_list), tuple(labels) if labels is not None else None)


def sources_and_sinks(d: DiGraph) -> tuple[frozenset[int], frozenset[int]]:
    """Vertices with in-degree 0 and with out-degree 0 (isolated ones are in both)."""
    sources = frozenset(v for v in range(d.n) if not d.in_adj[v])
    sinks = frozenset(v for v in range(d.n) if not d.out_adj[v])
    return sources, sinks


def underlying(d: DiGraph) -> UGraph:
    """u(D): same vertex set, one undirected edge per arc, same edge indices."""
    return UGraph(d.n, d.edges, d.labels)


def directed_line_graph(d: DiGraph, *, distinct: bool = True) -> DiGraph:
    """Digraph on E(D) with an arc e->f whenever e = w->x and f = x->y.

    With ``distinct`` (the default) w, x, y must be pairwise distinct, so an
    antiparallel pair yields no arcs between its two edges.  ``distinct=False``
    admits w = y, i.e. the line graph of directed walks.
    """
    if d.multigraph and len(set(d.edges)) != d.m:
        raise ParallelEdgesUnsupportedError("directed line graph needs a digraph without parallel edges")
    arcs = []
    for i, (w, x) in enumerate(d.edges):
        for j in d.out_adj[x]:
            y = d.edges[j][1]
            if distinct and y == w:
                continue
            arcs.append((i, j))
    labels = tuple(d.edge_name(i) for i in range(d.m)) if d.labels is not None else None
    return DiGraph(d.m, tuple(arcs), labels)


def edge_separator(d: DiGraph, a: Iterable[int]) -> frozenset[int]:
    """Edges with tail outside ``a`` and head inside ``a``."""
    a = frozenset(a)
    return frozenset(i for i, (t, h) in enumerate(d.edges) if t not in a and h in a)


def _vertex_separator_mask(d: DiGraph, b: int) -> int:
    # y with an in-edge outside b and an out-edge inside b
    rest = ((1 << d.m) - 1) & ~b
    ins, outs = d.in_edge_masks, d.out_edge_masks
    sep = 0
    for y in range(d.n):
        if ins[y] & rest and outs[y] & b:
            sep |= 1 << y
    return sep


def vertex_separator(d: DiGraph, b: Iterable[int]) -> frozenset[int]:
    """Vertices with an incoming edge in E(D) minus ``b`` and an outgoing edge in ``b``."""
    return frozenset(iter_bits(_vertex_separator_mask(d, _edge_mask(d, b))))


def bidirected_separator(d: DiGraph, x: Iterable[int]) -> frozenset[int]:
    xm = _edge_mask(d, x)
    full = (1 << d.m) - 1
    return frozenset(iter_bits(_vertex_separator_mask(d, xm) | _vertex_separator_mask(d, full & ~xm)))


def _edge_mask(d: DiGraph, edges: Iterable[int]) -> int:
    if isinstance(edges, int):
        return edges
    mask = 0
    for i in edges:
        if not 0 <= i < d.m:
            raise InvalidEdgeError(f"edge index {i} out of range")
        mask |= 1 << i
    return mask


def bicut_value(d: DiGraph, x: Iterable[int]) -> int:
    """rk M[V-X, X] + rk M[X, V-X] over GF(2), M the adjacency matrix of ``d``."""
    from .gf2 import rank_of_rows

    xm = x if isinstance(x, int) else mask_of(x)
    rest = ((1 << d.n) - 1) & ~xm
    rows = d.out_vertex_masks
    forward = [rows[v] & xm for v in iter_bits(rest)]
    backward = [rows[v] & rest for v in iter_bits(xm)]
    return rank_of_rows(forward) + rank_of_rows(backward)


@dataclass(frozen=True)
class Labeling:
    """A map from a set of indices to labels in ``range(label_count)``."""

    label_of: Mapping[int, int]
    label_count: int

    def __post_init__(self):
        object.__setattr__(self, "label_of", dict(self.label_of))
        for k, lab in self.label_of.items():
            if not 0 <= lab < self.label_count:
                raise ValueError(f"label {lab} of {k} outside [0, {self.label_count})")

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(self.label_of)

    def __getitem__(self, k: int) -> int:
        return self.label_of[k]


def is_consistent(
    d: DiGraph,
    a: Iterable[int],
    b: Iterable[int],
    lam_a: Labeling,
    lam_b: Labeling,
) -> bool:
    """Whether the vertex partition (a, b) of ``d`` is (lam_a, lam_b)-consistent.

    Equal labels on the ``a`` side must have equal out-neighborhoods inside
    ``b``; equal labels on the ``b`` side must have equal in-neighborhoods
    inside ``a``.  Only arcs from ``a`` to ``b`` are inspected.
    """
    a, b = frozenset(a), frozenset(b)
    if a & b:
        raise ValueError("a and b must be disjoint")
    if not a <= lam_a.domain or not b <= lam_b.domain:
        raise ValueError("labelings must cover their sides")
    am, bm = mask_of(a), mask_of(b)
    rows = d.out_vertex_masks
    seen: dict[int, int] = {}
    for v in sorted(a):
        sig = rows[v] & bm
        if seen.setdefault(lam_a[v], sig) != sig:
            return False
    seen = {}
    for v in sorted(b):
        sig = mask_of(d.edges[i][0] for i in d.in_adj[v]) & am
        if seen.setdefault(lam_b[v], sig) != sig:
            return False
    return True


def labeling_from_separator(d: DiGraph, x: Iterable[int]) -> tuple[Labeling, Labeling]:
    """Label edges by the separator vertex they point to / leave from.

    With s_1 < ... < s_r the vertex separator of (E(D) - X, X), an edge of
    E(D) - X gets label i when its head is s_i and an edge of X gets label i
    when its tail is s_i; every other edge gets label 0.
    """
    xm = _edge_mask(d, x)
    sep = sorted(iter_bits(_vertex_separator_mask(d, xm)))
    index = {s: i + 1 for i, s in enumerate(sep)}
    lam1, lam2 = {}, {}
    for i, (t, h) in enumerate(d.edges):
        if xm >> i & 1:
            lam2[i] = index.get(t, 0)
        else:
            lam1[i] = index.get(h, 0)
    return Labeling(lam1, len(sep) + 1), Labeling(lam2, len(sep) + 1)


def reachable(d: DiGraph, starts: Iterable[int], *, removed_edges: int = 0, blocked: Iterable[int] = ()) -> frozenset[int]:
    """Vertices reachable from ``starts`` along arcs not in ``removed_edges``, avoiding ``blocked``."""
    blocked = frozenset(blocked)
    seen = {v for v in starts if v not in blocked}
    stack = list(seen)
    while stack:
        v = stack.pop()
        for i in d.out_adj[v]:
            if removed_edges >> i & 1:
                continue
            w = d.edges[i][1]
            if w not in seen and w not in blocked:
                seen.add(w)
                stack.append(w)
    return frozenset(seen)


def topological_order(d: DiGraph) -> list[int] | None:
    """Kahn's algorithm, smallest index first; ``None`` when ``d`` has a cycle."""
    import heapq

    indeg = [d.in_degree(v) for v in range(d.n)]
    heap = [v for v in range(d.n) if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for i in d.out_adj[v]:
            w = d.edges[i][1]
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    return order if len(order) == d.n else None
