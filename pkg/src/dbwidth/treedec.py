"""Tree decompositions: validation, conversion from layouts, nice form."""

from __future__ import annotations

from dataclasses import dataclass, field

from .core import UGraph
from .errors import GroundMismatchError
from .layout import LayoutTree


@dataclass(frozen=True)
class TreeDecomposition:
    bags: tuple[frozenset[int], ...]
    tree_edges: tuple[tuple[int, int], ...]
    root: int = 0

    @property
    def width(self) -> int:
        return max((len(b) for b in self.bags), default=0) - 1

    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in self.bags]
        for u, v in self.tree_edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj


def validate_tree_decomposition(g: UGraph, td: TreeDecomposition) -> bool:
    """Both tree-decomposition axioms, plus that the index structure is a tree."""
    k = len(td.bags)
    if k == 0:
        return g.n == 0
    if len(td.tree_edges) != k - 1:
        return False
    adj = td.adjacency()
    seen = {0}
    stack = [0]
    while stack:
        u = stack.pop()
        for w in adj[u]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    if len(seen) != k:
        return False
    covered = set().union(*td.bags)
    if any(v not in covered for v in range(g.n)):
        return False
    for a, b in g.edges:
        if not any(a in bag and b in bag for bag in td.bags):
            return False
    for v in range(g.n):
        holders = {t for t in range(k) if v in td.bags[t]}
        start = next(iter(holders))
        reach = {start}
        stack = [start]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w in holders and w not in reach:
                    reach.add(w)
                    stack.append(w)
        if reach != holders:
            return False
    return True


def _attach_isolated(g: UGraph, bags: list[frozenset[int]], edges: list[tuple[int, int]]) -> None:
    covered = set().union(*bags) if bags else set()
    for v in range(g.n):
        if v not in covered:
            bags.append(frozenset([v]))
            if len(bags) > 1:
                edges.append((0, len(bags) - 1))


def branch_to_tree_decomposition(t: LayoutTree, g: UGraph) -> TreeDecomposition:
    """Tree decomposition on the layout tree itself.

    A leaf's bag holds the endpoints of its edge; an internal node's bag is
    the union of the middle sets of its three incident tree edges.  Every
    vertex of an internal bag lies in two of those middle sets, so bags have
    at most 3w/2 vertices for a layout of width w.  Isolated vertices get
    singleton bags hung off node 0.
    """
    if t.ground_size != g.m:
        raise GroundMismatchError(f"layout has {t.ground_size} leaves, graph has {g.m} edges")
    bags: list[frozenset[int]] = []
    edges: list[tuple[int, int]] = list(t.tree_edges)
    if t.node_count:
        full = (1 << g.m) - 1
        inc = g.incident_edge_masks
        middle = []
        for side in t.side_masks():
            rest = full & ~side
            middle.append(frozenset(v for v in range(g.n) if inc[v] & side and inc[v] & rest))
        node_bags: list[set[int]] = [set() for _ in range(t.node_count)]
        for node, e in t.leaf_map.items():
            node_bags[node].update(g.edges[e])
        for (u, v), mid in zip(t.tree_edges, middle):
            if u not in t.leaf_map:
                node_bags[u] |= mid
            if v not in t.leaf_map:
                node_bags[v] |= mid
        bags = [frozenset(b) for b in node_bags]
    _attach_isolated(g, bags, edges)
    return TreeDecomposition(tuple(bags), tuple(edges), 0)


def min_fill_tree_decomposition(g: UGraph) -> TreeDecomposition:
    """Tree decomposition from networkx's min-fill-in elimination heuristic."""
    import networkx as nx
    from networkx.algorithms.approximation import treewidth_min_fill_in

    simple = nx.Graph()
    simple.add_nodes_from(range(g.n))
    simple.add_edges_from(g.edges)
    if g.n == 0:
        return TreeDecomposition((), (), 0)
    _, tree = treewidth_min_fill_in(simple)
    nodes = sorted(tree.nodes, key=lambda b: (sorted(b), len(b)))
    index = {b: i for i, b in enumerate(nodes)}
    edges = [(index[a], index[b]) for a, b in tree.edges]
    bags = [frozenset(b) for b in nodes]
    return TreeDecomposition(tuple(bags), tuple(edges), 0)


@dataclass
class NiceNode:
    kind: str  # leaf | introduce | forget | join | edge
    bag: tuple[int, ...]
    children: list[int] = field(default_factory=list)
    vertex: int | None = None
    edge: int | None = None


@dataclass
class NiceDecomposition:
    """Rooted nice decomposition with introduce-edge nodes; root and leaves have empty bags.

    Every edge of the graph is introduced exactly once, just below the
    forget node of whichever endpoint is forgotten first.
    """

    nodes: list[NiceNode]
    root: int

    def postorder(self) -> list[int]:
        order, stack = [], [(self.root, False)]
        while stack:
            u, done = stack.pop()
            if done:
                order.append(u)
                continue
            stack.append((u, True))
            for c in reversed(self.nodes[u].children):
                stack.append((c, False))
        return order

    @property
    def width(self) -> int:
        return max(len(n.bag) for n in self.nodes) - 1


def make_nice(g: UGraph, td: TreeDecomposition) -> NiceDecomposition:
    nodes: list[NiceNode] = []
    incident: list[list[int]] = [[] for _ in range(g.n)]
    for i, (a, b) in enumerate(g.edges):
        incident[a].append(i)
        incident[b].append(i)
    introduced: set[int] = set()

    def add(kind: str, bag, children, vertex=None, edge=None) -> int:
        nodes.append(NiceNode(kind, tuple(sorted(bag)), list(children), vertex, edge))
        return len(nodes) - 1

    def forget(top: int, bag: set[int], v: int) -> int:
        for i in incident[v]:
            if i in introduced:
                continue
            a, b = g.edges[i]
            other = b if a == v else a
            if other in bag:
                introduced.add(i)
                top = add("edge", bag, [top], edge=i)
        bag.discard(v)
        return add("forget", bag, [top], vertex=v)

    def morph(top: int, have: frozenset[int], want: frozenset[int]) -> int:
        bag = set(have)
        for v in sorted(have - want):
            top = forget(top, bag, v)
        for v in sorted(want - have):
            bag.add(v)
            top = add("introduce", bag, [top], vertex=v)
        return top

    if not td.bags:
        return NiceDecomposition([NiceNode("leaf", ())], 0)
    adj = td.adjacency()
    parent = {td.root: None}
    order = [td.root]
    for u in order:
        for w in adj[u]:
            if w not in parent:
                parent[w] = u
                order.append(w)
    built: dict[int, int] = {}
    for u in reversed(order):
        kids = [w for w in adj[u] if parent.get(w) == u]
        want = td.bags[u]
        if not kids:
            built[u] = morph(add("leaf", (), []), frozenset(), want)
            continue
        branches = [morph(built[w], td.bags[w], want) for w in kids]
        while len(branches) > 1:
            merged = [add("join", want, [branches[i], branches[i + 1]]) for i in range(0, len(branches) - 1, 2)]
            if len(branches) % 2:
                merged.append(branches[-1])
            branches = merged
        built[u] = branches[0]
    root = morph(built[td.root], td.bags[td.root], frozenset())
    if len(introduced) != g.m:
        raise ValueError("tree decomposition does not cover every edge")
    return NiceDecomposition(nodes, root)
