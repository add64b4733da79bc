"""FPT pipelines over tree decompositions, their brute-force oracles, DRED and the DAG cop sweep."""

from __future__ import annotations

import itertools
from collections.abc import Iterable
from dataclasses import dataclass
from math import comb

from .core import (
    DiGraph,
    UGraph,
    edge_separator,
    iter_bits,
    mask_of,
    reachable,
    sources_and_sinks,
    topological_order,
    underlying,
)
from .errors import GroundTooLargeError, TooLargeError
from .layout import directed_branch_width, exact_width, heuristic_width, ubw_cut
from .transforms import source_sink_split, split_origin
from .treedec import (
    NiceDecomposition,
    TreeDecomposition,
    branch_to_tree_decomposition,
    make_nice,
    min_fill_tree_decomposition,
)

ORACLE_CAP = 20
DECOMPOSE_EXACT_CAP = 12
DRED_BUDGET = 2_000_000


# --------------------------------------------------------------------------
# decompositions for the DPs


def decompose(g: UGraph, *, seed: int = 0) -> TreeDecomposition:
    """A tree decomposition of ``g`` for the solvers.

    The layout of the branch-width cut function is exact when every block
    has at most ``DECOMPOSE_EXACT_CAP`` edges and heuristic otherwise; the
    derived decomposition is compared with networkx's min-fill-in one and
    the narrower is used (the layout-derived one on ties).
    """
    f = ubw_cut(g)
    try:
        _, tree = exact_width(f, DECOMPOSE_EXACT_CAP)
    except GroundTooLargeError:
        _, tree = heuristic_width(f, seed, restarts=2, rounds=0)
    td = branch_to_tree_decomposition(tree, g)
    alt = min_fill_tree_decomposition(g)
    return alt if alt.bags and alt.width < td.width else td


# --------------------------------------------------------------------------
# max cut


def brute_force_max_cut(d: DiGraph) -> int:
    """max over X of the number of arcs from V - X into X, by enumerating all 2^n sets."""
    if d.n > ORACLE_CAP:
        raise TooLargeError("brute_force_max_cut", d.n, ORACLE_CAP)
    if d.m == 0:
        return 0
    import numpy as np

    masks = np.arange(1 << d.n, dtype=np.int64)
    total = np.zeros(1 << d.n, dtype=np.int64)
    for t, h in d.edges:
        total += ((masks >> h) & 1) & (((masks >> t) & 1) ^ 1)
    return int(total.max())


def _max_cut_dp(g: UGraph, nice: NiceDecomposition) -> tuple[int, int]:
    """Best value and member mask for arcs ``g.edges`` read as (tail, head)."""
    nodes = nice.nodes
    tables: dict[int, dict[int, int]] = {}
    for u in nice.postorder():
        node = nodes[u]
        if node.kind == "leaf":
            tables[u] = {0: 0}
        elif node.kind == "introduce":
            bit = 1 << node.vertex
            child = tables[node.children[0]]
            table = {}
            for s, v in child.items():
                table[s] = v
                table[s | bit] = v
            tables[u] = table
        elif node.kind == "forget":
            bit = 1 << node.vertex
            table = {}
            for s, v in tables[node.children[0]].items():
                key = s & ~bit
                if v > table.get(key, -1):
                    table[key] = v
            tables[u] = table
        elif node.kind == "edge":
            t, h = g.edges[node.edge]
            tables[u] = {s: v + (not s >> t & 1 and s >> h & 1) for s, v in tables[node.children[0]].items()}
        else:
            left, right = (tables[c] for c in node.children)
            tables[u] = {s: v + right[s] for s, v in left.items()}
    # walk back down for a witness
    members = 0
    stack = [(nice.root, 0)]
    while stack:
        u, s = stack.pop()
        node = nodes[u]
        if node.kind == "forget":
            child = tables[node.children[0]]
            bit = 1 << node.vertex
            take = child.get(s | bit, -1) > child.get(s, -1)
            if take:
                members |= bit
            stack.append((node.children[0], s | bit if take else s))
        else:
            for c in node.children:
                stack.append((c, s & mask_of(nodes[c].bag)))
    return tables[nice.root][0], members


def d_max_cut(d: DiGraph, *, seed: int = 0) -> tuple[int, frozenset[int]]:
    """Maximum directed cut |{x->y : x not in X, y in X}| with a witness X.

    Runs a 2-colouring DP on a tree decomposition of u(H), H the
    source-sink split of ``d``.  In H each copy of a source is moved out of
    X and each copy of a sink into X, which never lowers the value, so the
    copies of one vertex agree and X maps back to ``d``.
    """
    h, _ = source_sink_split(d)
    g = underlying(h)
    nice = make_nice(g, decompose(g, seed=seed))
    value, members = _max_cut_dp(g, nice)
    sources, sinks = sources_and_sinks(h)
    for v in range(h.n):
        if v in sources:
            members &= ~(1 << v)
        elif v in sinks:
            members |= 1 << v
    origin = split_origin(d, h)
    x = frozenset(origin[v] for v in iter_bits(members))
    got = len(edge_separator(d, x))
    if got != value:
        raise AssertionError(f"max-cut witness has value {got}, DP reported {value}")
    return value, x


# --------------------------------------------------------------------------
# hamilton path


def held_karp_hamilton(d: DiGraph) -> bool:
    """Directed Hamiltonian path by the subset DP over (visited set, last vertex)."""
    n = d.n
    if n > ORACLE_CAP:
        raise TooLargeError("held_karp_hamilton", n, ORACLE_CAP)
    if n == 0:
        return False
    succ = d.out_vertex_masks
    full = (1 << n) - 1
    # ends[S]: bitmask of vertices at which some path covering exactly S can end
    ends = [0] * (1 << n)
    for v in range(n):
        ends[1 << v] = 1 << v
    for s in range(1, 1 << n):
        e = ends[s]
        if not e:
            continue
        reach = 0
        for v in iter_bits(e):
            reach |= succ[v]
        reach &= ~s
        for w in iter_bits(reach):
            ends[s | 1 << w] |= 1 << w
    return ends[full] != 0


# A state is (fragments, closed): fragments is a sorted tuple of (start, end)
# pairs for path pieces with at least one endpoint in the bag (-1 marks a
# forgotten endpoint), closed counts pieces whose both endpoints are forgotten.
# Bag vertices that are neither a start nor an end are interior to a piece.
_GONE = -1


def _normalize(frags: list[tuple[int, int]], closed: int):
    out = []
    starts_gone = ends_gone = 0
    for s, e in frags:
        if s == _GONE and e == _GONE:
            closed += 1
            continue
        starts_gone += s == _GONE
        ends_gone += e == _GONE
        out.append((s, e))
    if closed > 1 or starts_gone > 1 or ends_gone > 1 or (closed and out):
        return None
    return tuple(sorted(out)), closed


def _degrees(frags) -> tuple[set[int], set[int]]:
    """Bag vertices still free to receive an arc (starts) or emit one (ends)."""
    return {s for s, _ in frags if s != _GONE}, {e for _, e in frags if e != _GONE}


def _join_states(a, b, bag: tuple[int, ...]):
    fa, ca = a
    fb, cb = b
    if ca + cb > 1:
        return None
    sa, ea = _degrees(fa)
    sb, eb = _degrees(fb)
    for v in bag:
        # in-degree 1 on a side means v is not a start there
        if (v not in sa) + (v not in sb) > 1 or (v not in ea) + (v not in eb) > 1:
            return None
    succ: dict[object, object] = {}
    has_pred: set[object] = set()
    tokens = itertools.count()
    for frags in (fa, fb):
        for s, e in frags:
            if s == e:
                continue
            s_key = ("gone", next(tokens)) if s == _GONE else s
            e_key = ("gone", next(tokens)) if e == _GONE else e
            succ[s_key] = e_key
            has_pred.add(e_key)
    frags: list[tuple[int, int]] = []
    seen: set[object] = set()
    for start in list(succ):
        if start in has_pred:
            continue
        cur = start
        while cur in succ:
            seen.add(cur)
            cur = succ[cur]
        seen.add(cur)
        frags.append((_GONE if isinstance(start, tuple) else start, _GONE if isinstance(cur, tuple) else cur))
    if any(k not in seen for k in succ):
        return None  # the pieces close a cycle
    for v in bag:
        if v in sa and v in sb and v in ea and v in eb:
            frags.append((v, v))
    return _normalize(frags, ca + cb)


def _hamilton_dp(d: DiGraph, g: UGraph, nice: NiceDecomposition):
    nodes = nice.nodes
    tables: dict[int, dict] = {}
    for u in nice.postorder():
        node = nodes[u]
        table: dict = {}
        if node.kind == "leaf":
            table[((), 0)] = None
        elif node.kind == "introduce":
            v = node.vertex
            for st in tables[node.children[0]]:
                frags, closed = st
                new = _normalize(list(frags) + [(v, v)], closed)
                if new is not None:
                    table.setdefault(new, st)
        elif node.kind == "forget":
            v = node.vertex
            for st in tables[node.children[0]]:
                frags, closed = st
                moved = [(_GONE if s == v else s, _GONE if e == v else e) for s, e in frags]
                new = _normalize(moved, closed)
                if new is not None:
                    table.setdefault(new, st)
        elif node.kind == "edge":
            t, h = d.edges[node.edge]
            for st in tables[node.children[0]]:
                table.setdefault(st, (st, False))
                frags, closed = st
                tail_piece = next((p for p in frags if p[1] == t), None)
                head_piece = next((p for p in frags if p[0] == h), None)
                if tail_piece is None or head_piece is None or tail_piece == head_piece:
                    continue
                rest = [p for p in frags if p != tail_piece and p != head_piece]
                new = _normalize(rest + [(tail_piece[0], head_piece[1])], closed)
                if new is not None:
                    table.setdefault(new, (st, True))
        else:
            left, right = (tables[c] for c in node.children)
            for sa in left:
                for sb in right:
                    new = _join_states(sa, sb, node.bag)
                    if new is not None:
                        table.setdefault(new, (sa, sb))
        tables[u] = table
    final = ((), 1)
    if final not in tables[nice.root]:
        return None
    arcs = []
    stack = [(nice.root, final)]
    while stack:
        u, st = stack.pop()
        node = nodes[u]
        back = tables[u][st]
        if node.kind == "leaf":
            continue
        if node.kind == "edge":
            prev, taken = back
            if taken:
                arcs.append(node.edge)
            stack.append((node.children[0], prev))
        elif node.kind == "join":
            stack.append((node.children[0], back[0]))
            stack.append((node.children[1], back[1]))
        else:
            stack.append((node.children[0], back))
    return arcs


def _path_from_arcs(d: DiGraph, arcs: Iterable[int]) -> list[int] | None:
    nxt = {}
    has_pred = set()
    for i in arcs:
        t, h = d.edges[i]
        nxt[t] = h
        has_pred.add(h)
    starts = [v for v in range(d.n) if v not in has_pred]
    if len(starts) != 1:
        return None
    path = [starts[0]]
    while path[-1] in nxt and len(path) <= d.n:
        path.append(nxt[path[-1]])
    return path if len(path) == d.n and len(set(path)) == d.n else None


def is_hamilton_path(d: DiGraph, path) -> bool:
    if path is None or sorted(path) != list(range(d.n)) or d.n == 0:
        return False
    out = d.out_vertex_masks
    return all(out[a] >> b & 1 for a, b in zip(path, path[1:]))


def d_hamilton_path(d: DiGraph, *, seed: int = 0) -> tuple[bool, list[int] | None]:
    """Directed Hamiltonian path by a path-fragment DP on a tree decomposition of u(D).

    Digraphs with two or more sources or two or more sinks are rejected up
    front since no Hamiltonian path can start (or end) twice.
    """
    if d.n == 0:
        return False, None
    if d.n == 1:
        return True, [0]
    sources, sinks = sources_and_sinks(d)
    if len(sources) >= 2 or len(sinks) >= 2:
        return False, None
    g = underlying(d)
    nice = make_nice(g, decompose(g, seed=seed))
    arcs = _hamilton_dp(d, g, nice)
    if arcs is None:
        return False, None
    path = _path_from_arcs(d, arcs)
    if not is_hamilton_path(d, path):
        raise AssertionError("Hamilton DP produced an invalid witness")
    return True, path


# --------------------------------------------------------------------------
# DRED and the clique reduction


@dataclass(frozen=True)
class DredInstance:
    d: DiGraph
    k: int
    h: int
    s: int

    def __post_init__(self):
        if not 0 <= self.s < self.d.n:
            raise ValueError(f"s={self.s} is not a vertex")
        if not 0 <= self.k <= self.d.m:
            raise ValueError(f"k={self.k} outside [0, {self.d.m}]")
        if not 0 <= self.h <= self.d.n:
            raise ValueError(f"h={self.h} outside [0, {self.d.n}]")


def reach2(d: DiGraph, f: Iterable[int] | int, s: int) -> frozenset[int]:
    """Vertices reachable from ``s`` by directed paths of at most two arcs avoiding ``f``."""
    removed = f if isinstance(f, int) else mask_of(f)
    out = {s}
    frontier = [s]
    for _ in range(2):
        nxt = []
        for v in frontier:
            for i in d.out_adj[v]:
                if removed >> i & 1:
                    continue
                w = d.edges[i][1]
                if w not in out:
                    out.add(w)
                    nxt.append(w)
        frontier = nxt
    return frozenset(out)


def dred_search(inst: DredInstance, budget: int = DRED_BUDGET) -> frozenset[int] | None:
    """A deletion set of at most k arcs leaving at least h vertices outside the 2-reach, or None.

    Only arcs leaving s or an out-neighbour of s can change the 2-reach, so
    the search ranges over subsets of those; ``budget`` caps the number of
    subsets tried.
    """
    d, s = inst.d, inst.s
    first = {d.edges[i][1] for i in d.out_adj[s]}
    relevant = [i for i in range(d.m) if d.edges[i][0] == s or d.edges[i][0] in first]
    k = min(inst.k, len(relevant))
    count = sum(comb(len(relevant), j) for j in range(k + 1))
    if count > budget:
        raise TooLargeError("brute_force_dred", count, budget)
    for j in range(k + 1):
        for f in itertools.combinations(relevant, j):
            if d.n - len(reach2(d, f, s)) >= inst.h:
                return frozenset(f)
    return None


def brute_force_dred(inst: DredInstance, budget: int = DRED_BUDGET) -> bool:
    return dred_search(inst, budget) is not None


def clique_to_dred(g: UGraph, r: int) -> DredInstance:
    """DRED instance that is a yes-instance iff ``g`` has a clique on ``r`` vertices.

    Vertices: s = 0, then V(G), then one vertex per edge of G.  Arcs: s -> x
    for every vertex x, then a -> e and b -> e for every edge e = ab.
    """
    if r < 1:
        raise ValueError("r must be at least 1")
    if not g.is_simple():
        raise ValueError("clique_to_dred needs a simple graph")
    n, m = g.n, g.m
    edges = [(0, 1 + x) for x in range(n)]
    for j, (a, b) in enumerate(g.edges):
        edges += [(1 + a, 1 + n + j), (1 + b, 1 + n + j)]
    labels = ["s"] + [f"v{g.label(x)}" for x in range(n)] + [f"e{g.label(a)}-{g.label(b)}" for a, b in g.edges]
    d = DiGraph(1 + n + m, tuple(edges), tuple(labels))
    return DredInstance(d, min(r, d.m), min(r + comb(r, 2), d.n), 0)


def has_clique(g: UGraph, r: int) -> bool:
    if r <= 0:
        return True
    adj = g.adjacency
    return any(all(b in adj[a] for a, b in itertools.combinations(c, 2)) for c in itertools.combinations(range(g.n), r))


# --------------------------------------------------------------------------
# decision pipeline and cop sweep


def decide_dbw(d: DiGraph, k: int, *, cap: int | None = None) -> bool:
    """dbw(D) <= k via the exact branch-width of the underlying graph of the split."""
    kwargs = {} if cap is None else {"cap": cap}
    width, _ = directed_branch_width(d, "via_split", **kwargs)
    return width <= k


def _undirected_reach(d: DiGraph, starts, blocked: set[int]) -> set[int]:
    adj: list[set[int]] = [set() for _ in range(d.n)]
    for t, h in d.edges:
        adj[t].add(h)
        adj[h].add(t)
    seen = {v for v in starts if v not in blocked}
    stack = list(seen)
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen and w not in blocked:
                seen.add(w)
                stack.append(w)
    return seen


def dag_cop_sweep(d: DiGraph, reading: str = "directed") -> tuple[bool, list[int]]:
    """One cop walks a topological order against an invisible, inert robber.

    The contaminated set starts as V(D).  Each time the cop lands on a
    vertex v, the robber may run from any contaminated vertex along a path
    of D - v (``reading="directed"``) or of u(D) - v (``reading="undirected"``);
    everything it can reach stays contaminated and v itself is clear.
    Returns whether the contamination empties, and the cop's moves.
    """
    if reading not in ("directed", "undirected"):
        raise ValueError(f"unknown reading {reading!r}")
    order = topological_order(d)
    if order is None:
        return False, []
    contaminated = set(range(d.n))
    moves = []
    for v in order:
        if reading == "directed":
            contaminated = set(reachable(d, contaminated, blocked=(v,)))
        else:
            contaminated = _undirected_reach(d, contaminated, {v})
        moves.append(v)
    return not contaminated, moves
