"""Layouts of symmetric set functions.

A layout of ``f`` on a ground set ``U`` is a tree of maximum degree three
whose leaves are in bijection with ``U``.  Every tree edge splits the leaves
in two and its order is ``f`` of either side; the width is the largest
order.  This module provides the three cut functions used for directed
branch-width, branch-width and bi-cut-rank-width, an exact subset DP, an
exhaustive enumeration oracle and a seeded local-search heuristic.

Subsets of the ground set are int bitmasks throughout.
"""

from __future__ import annotations

import random
from collections.abc import Callable, Mapping, Sequence
from dataclasses import dataclass, field
from typing import Union

from .core import DiGraph, UGraph, bicut_value, iter_bits
from .errors import GroundMismatchError, GroundTooLargeError

DEFAULT_EXACT_CAP = 16
DEFAULT_ENUM_CAP = 8
EXACT_FINISH = 10

Nested = Union[int, tuple["Nested", "Nested"]]


# --------------------------------------------------------------------------
# trees


@dataclass(frozen=True)
class LayoutTree:
    node_count: int
    tree_edges: tuple[tuple[int, int], ...]
    leaf_map: Mapping[int, int]
    ground_size: int

    def __post_init__(self):
        edges = tuple((int(u), int(v)) for u, v in self.tree_edges)
        object.__setattr__(self, "tree_edges", edges)
        object.__setattr__(self, "leaf_map", {int(k): int(v) for k, v in dict(self.leaf_map).items()})
        self._validate()

    def _validate(self) -> None:
        n, k = self.node_count, self.ground_size
        if k == 0:
            if n != 0 or self.tree_edges or self.leaf_map:
                raise ValueError("a layout of the empty set is the empty tree")
            return
        if len(self.tree_edges) != n - 1:
            raise ValueError("a tree on %d nodes has %d edges, got %d" % (n, n - 1, len(self.tree_edges)))
        adj = self.adjacency
        for u, v in self.tree_edges:
            if not (0 <= u < n and 0 <= v < n) or u == v:
                raise ValueError(f"bad tree edge ({u}, {v})")
        seen = {0}
        stack = [0]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w not in seen:
                    seen.add(w)
                    stack.append(w)
        if len(seen) != n:
            raise ValueError("layout tree is not connected")
        if sorted(self.leaf_map.values()) != list(range(k)):
            raise ValueError("leaf_map must be a bijection onto the ground set")
        leaves = {u for u in range(n) if len(adj[u]) <= 1}
        if set(self.leaf_map) != leaves:
            raise ValueError("leaf_map keys must be exactly the leaves of the tree")
        for u in range(n):
            deg = len(adj[u])
            if deg > 3:
                raise ValueError(f"node {u} has degree {deg} > 3")
            if k >= 2 and deg == 2:
                raise ValueError(f"internal node {u} has degree 2; normalize the tree first")

    @property
    def adjacency(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.node_count)]
        for u, v in self.tree_edges:
            adj[u].append(v)
            adj[v].append(u)
        return adj

    def element_leaf(self) -> dict[int, int]:
        return {e: node for node, e in self.leaf_map.items()}

    def side_masks(self) -> list[int]:
        """For tree edge ``(u, v)`` the bitmask of elements on ``v``'s side."""
        if self.node_count <= 1:
            return []
        adj = self.adjacency
        parent = [-1] * self.node_count
        order = [0]
        parent[0] = 0
        for u in order:
            for w in adj[u]:
                if parent[w] == -1:
                    parent[w] = u
                    order.append(w)
        below = [0] * self.node_count
        for u in reversed(order):
            if u in self.leaf_map:
                below[u] |= 1 << self.leaf_map[u]
            if u != 0:
                below[parent[u]] |= below[u]
        full = (1 << self.ground_size) - 1
        out = []
        for u, v in self.tree_edges:
            out.append(below[v] if parent[v] == u else full & ~below[u])
        return out


def normalize_tree(node_count: int, tree_edges, leaf_map: Mapping[int, int], ground_size: int) -> LayoutTree:
    """Drop unlabeled leaves and suppress degree-2 nodes; leaf partitions are unchanged."""
    adj: dict[int, set[int]] = {u: set() for u in range(node_count)}
    for u, v in tree_edges:
        adj[u].add(v)
        adj[v].add(u)
    leaf_map = dict(leaf_map)
    changed = True
    while changed:
        changed = False
        for u in list(adj):
            if u in leaf_map or len(adj) <= 1:
                continue
            if len(adj[u]) <= 1:
                for w in adj[u]:
                    adj[w].discard(u)
                del adj[u]
                changed = True
            elif len(adj[u]) == 2 and ground_size >= 2:
                a, b = adj[u]
                adj[a].discard(u)
                adj[b].discard(u)
                adj[a].add(b)
                adj[b].add(a)
                del adj[u]
                changed = True
    relabel = {u: i for i, u in enumerate(sorted(adj))}
    edges = sorted({(min(relabel[u], relabel[v]), max(relabel[u], relabel[v])) for u in adj for v in adj[u]})
    return LayoutTree(len(relabel), tuple(edges), {relabel[u]: e for u, e in leaf_map.items()}, ground_size)


def tree_from_nested(struct: Nested | None, ground_size: int) -> LayoutTree:
    """Build a layout from a nested split; a top-level pair is the central tree edge."""
    if struct is None:
        return LayoutTree(0, (), {}, 0)
    edges: list[tuple[int, int]] = []
    leaf_map: dict[int, int] = {}
    counter = [0]

    def new_node() -> int:
        counter[0] += 1
        return counter[0] - 1

    def build(s: Nested) -> int:
        node = new_node()
        if isinstance(s, int):
            leaf_map[node] = s
            return node
        for child in s:
            edges.append((node, build(child)))
        return node

    if isinstance(struct, int):
        build(struct)
    else:
        left, right = build(struct[0]), build(struct[1])
        edges.append((left, right))
    return LayoutTree(counter[0], tuple(edges), leaf_map, ground_size)


# --------------------------------------------------------------------------
# cut functions


class CutFunction:
    """A symmetric set function on ``range(ground_size)``, memoized per bitmask.

    ``blocks`` optionally lists a partition of the ground set into masks on
    which the function is separable: f(X) is the sum of f(X & block) and
    every union of whole blocks has value 0.  The exact engine lays each
    block out independently.
    """

    def __init__(
        self,
        ground_size: int,
        evaluate: Callable[[int], int],
        kind: str = "custom",
        blocks: Sequence[int] | None = None,
        names: Sequence[str] | None = None,
    ):
        self.ground_size = ground_size
        self.kind = kind
        self.blocks = tuple(blocks) if blocks is not None else None
        self.names = tuple(names) if names is not None else None
        self._evaluate = evaluate
        self._cache: dict[int, int] = {}

    @property
    def full(self) -> int:
        return (1 << self.ground_size) - 1

    def __call__(self, mask: int) -> int:
        value = self._cache.get(mask)
        if value is None:
            value = self._cache[mask] = self._evaluate(mask)
        return value

    evaluate = __call__

    def restrict(self, elements: Sequence[int]) -> CutFunction:
        """The same function seen on the listed elements only (others fixed outside)."""
        elements = list(elements)

        def lifted(mask: int) -> int:
            big = 0
            for i in iter_bits(mask):
                big |= 1 << elements[i]
            return self(big)

        return CutFunction(len(elements), lifted, self.kind)

    def __repr__(self) -> str:
        return f"CutFunction(kind={self.kind!r}, ground_size={self.ground_size})"


def _union_find_blocks(size: int, groups) -> list[int]:
    parent = list(range(size))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for group in groups:
        group = list(group)
        for other in group[1:]:
            ra, rb = find(group[0]), find(other)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    blocks: dict[int, int] = {}
    for i in range(size):
        r = find(i)
        blocks[r] = blocks.get(r, 0) | 1 << i
    return [blocks[r] for r in sorted(blocks)]


def dbw_cut(d: DiGraph) -> CutFunction:
    """f_D(X) = |S_X ∪ S_{E-X}| on the edge set of ``d``."""
    full = (1 << d.m) - 1
    internal = [
        (d.in_edge_masks[v], d.out_edge_masks[v]) for v in range(d.n) if d.in_adj[v] and d.out_adj[v]
    ]

    def evaluate(x: int) -> int:
        rest = full & ~x
        count = 0
        for ins, outs in internal:
            if (ins & rest and outs & x) or (ins & x and outs & rest):
                count += 1
        return count

    groups = [list(d.in_adj[v]) + list(d.out_adj[v]) for v in range(d.n) if d.in_adj[v] and d.out_adj[v]]
    names = [d.edge_name(i) for i in range(d.m)]
    return CutFunction(d.m, evaluate, "dbw", _union_find_blocks(d.m, groups), names)


def ubw_cut(g: UGraph) -> CutFunction:
    """Number of vertices incident with edges on both sides."""
    full = (1 << g.m) - 1
    incident = [mask for mask in g.incident_edge_masks if mask & (mask - 1)]

    def evaluate(x: int) -> int:
        rest = full & ~x
        return sum(1 for mask in incident if mask & x and mask & rest)

    groups = [list(iter_bits(mask)) for mask in incident]
    names = [f"{g.label(a)}-{g.label(b)}" for a, b in g.edges]
    return CutFunction(g.m, evaluate, "bw", _union_find_blocks(g.m, groups), names)


def bicut_cut(d: DiGraph) -> CutFunction:
    """Sum of the two directed GF(2) cut-ranks on the vertex set of ``d``."""
    groups = [list(e) for e in d.edges]
    names = [d.label(v) for v in range(d.n)]
    return CutFunction(d.n, lambda x: bicut_value(d, x), "bcrk", _union_find_blocks(d.n, groups), names)


# --------------------------------------------------------------------------
# widths


@dataclass(frozen=True)
class WidthReport:
    width: int
    per_edge_orders: dict[tuple[int, int], int] = field(default_factory=dict)
    argmax_edge: tuple[int, int] | None = None


def layout_width(t: LayoutTree, f: CutFunction) -> WidthReport:
    if t.ground_size != f.ground_size:
        raise GroundMismatchError(f"layout has {t.ground_size} leaves, cut function {f.ground_size} elements")
    orders = {}
    for edge, side in zip(t.tree_edges, t.side_masks()):
        orders[edge] = f(side)
    if t.ground_size < 2 or not orders:
        return WidthReport(0, orders, None)
    argmax = max(orders, key=lambda e: (orders[e], -t.tree_edges.index(e)))
    return WidthReport(orders[argmax], orders, argmax)


class _SubsetDP:
    """Memoized optimal rooted subtrees over subsets of the ground set.

    rooted(S) is the least width of a subtree whose leaves are S, counting
    the edge above it: max(f(S), min over splits {A, S-A} of
    max(rooted(A), rooted(S-A))).  Splits whose own edges already reach the
    incumbent are skipped, and the scan stops once the incumbent meets the
    lower bound max(f(S), f of any singleton in S).  Among equal values the
    first split in increasing submask order is kept.
    """

    def __init__(self, f: CutFunction):
        self.f = f
        self.single = [f(1 << i) for i in range(f.ground_size)]
        self.memo: dict[int, tuple[int, int]] = {}

    def floor(self, s: int) -> int:
        return max(self.single[i] for i in iter_bits(s))

    def rooted(self, s: int) -> int:
        hit = self.memo.get(s)
        if hit is not None:
            return hit[0]
        fs = self.f(s)
        if s & (s - 1) == 0:
            self.memo[s] = (fs, 0)
            return fs
        best, choice = self.best_split(s, max(fs, self.floor(s)))
        value = max(fs, best)
        self.memo[s] = (value, choice)
        return value

    def best_split(self, s: int, floor: int) -> tuple[int, int]:
        f, rooted = self.f, self.rooted
        low = s & -s
        rest = s ^ low
        best, choice = 1 << 60, 0
        sub = 0
        while True:
            a = low | sub
            if a != s:
                b = s ^ a
                if max(f(a), f(b)) < best:
                    va = rooted(a)
                    if va < best:
                        v = max(va, rooted(b))
                        if v < best:
                            best, choice = v, a
                            if best <= floor:
                                break
            if sub == rest:
                break
            sub = (sub - rest) & rest
        return best, choice

    def nested(self, s: int) -> Nested:
        if s & (s - 1) == 0:
            return s.bit_length() - 1
        self.rooted(s)
        a = self.memo[s][1]
        return (self.nested(a), self.nested(s ^ a))

    def unrooted(self, s: int) -> tuple[int, Nested]:
        """Optimal layout of the elements of ``s`` alone (|s| >= 2)."""
        width, top = self.best_split(s, self.floor(s))
        return width, (self.nested(top), self.nested(s ^ top))


def _solve_block(g: CutFunction) -> tuple[int, Nested]:
    return _SubsetDP(g).unrooted(g.full)


def exact_width(f: CutFunction, cap: int = DEFAULT_EXACT_CAP) -> tuple[int, LayoutTree]:
    """Exact layout-f-width with an optimal layout as witness.

    When ``f`` declares separable blocks each block is solved on its own and
    the cap applies to the largest block.
    """
    n = f.ground_size
    if n == 0:
        return 0, tree_from_nested(None, 0)
    blocks = list(f.blocks) if f.blocks else [f.full]
    largest = max(b.bit_count() for b in blocks)
    if largest > cap:
        raise GroundTooLargeError("exact_width", largest, cap)
    width = 0
    parts: list[Nested] = []
    for block in blocks:
        elements = list(iter_bits(block))
        if len(elements) == 1:
            parts.append(elements[0])
            continue
        w, local = _solve_block(f.restrict(elements))
        width = max(width, w)
        parts.append(_relabel(local, elements))
    struct = parts[0]
    for part in parts[1:]:
        struct = (struct, part)
    tree = tree_from_nested(struct, n)
    return width, tree


def _relabel(s: Nested, elements: Sequence[int]) -> Nested:
    if isinstance(s, int):
        return elements[s]
    return (_relabel(s[0], elements), _relabel(s[1], elements))


def enumerate_width(f: CutFunction, cap: int = DEFAULT_ENUM_CAP) -> int:
    """Exact layout-f-width by trying every unrooted cubic tree on the ground set.

    Trees are generated by inserting leaf k on each edge of every tree on
    leaves 0..k-1, giving (2n-5)!! trees for n >= 3.
    """
    n = f.ground_size
    if n > cap:
        raise GroundTooLargeError("enumerate_width", n, cap)
    if n <= 1:
        return 0
    if n == 2:
        return f(1)
    best = [1 << 60]

    def width_of(edges: list[tuple[int, int]]) -> int:
        adj: dict[int, list[int]] = {}
        for u, v in edges:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)

        def side(u: int, came: int) -> int:
            # leaves are nodes 0..n-1 and carry element u
            if u < n:
                return 1 << u
            mask = 0
            for w in adj[u]:
                if w != came:
                    mask |= side(w, u)
            return mask

        worst = 0
        for u, v in edges:
            val = f(side(v, u)) if v >= n else f(1 << v)
            if val > worst:
                worst = val
                if worst >= best[0]:
                    break
        return worst

    def grow(edges: list[tuple[int, int]], leaf: int, next_node: int) -> None:
        if leaf == n:
            best[0] = min(best[0], width_of(edges))
            return
        for idx in range(len(edges)):
            u, v = edges[idx]
            w = next_node
            grown = edges[:idx] + edges[idx + 1:] + [(u, w), (w, v), (w, leaf)]
            grow(grown, leaf + 1, next_node + 1)

    center = n
    grow([(center, 0), (center, 1), (center, 2)], 3, n + 1)
    return best[0]


# --------------------------------------------------------------------------
# heuristic


class _Tree:
    """Mutable cubic tree used by the local search."""

    def __init__(self, tree: LayoutTree):
        self.k = tree.ground_size
        self.adj: dict[int, set[int]] = {u: set() for u in range(tree.node_count)}
        for u, v in tree.tree_edges:
            self.adj[u].add(v)
            self.adj[v].add(u)
        self.elem = dict(tree.leaf_map)
        self.next = tree.node_count

    def freeze(self) -> LayoutTree:
        relabel = {u: i for i, u in enumerate(sorted(self.adj))}
        edges = sorted((relabel[u], relabel[v]) for u in self.adj for v in self.adj[u] if u < v)
        leaf_map = {relabel[u]: e for u, e in self.elem.items()}
        return LayoutTree(len(relabel), tuple(edges), leaf_map, self.k)

    def orders(self, f: CutFunction) -> list[int]:
        root = next(iter(self.adj))
        parent = {root: root}
        order = [root]
        for u in order:
            for w in self.adj[u]:
                if w not in parent:
                    parent[w] = u
                    order.append(w)
        below = dict.fromkeys(order, 0)
        for u in reversed(order):
            if u in self.elem:
                below[u] |= 1 << self.elem[u]
            if u != root:
                below[parent[u]] |= below[u]
        return [f(below[u]) for u in order if u != root]

    def score(self, f: CutFunction) -> tuple[int, int, int]:
        vals = self.orders(f)
        if not vals:
            return (0, 0, 0)
        w = max(vals)
        return (w, vals.count(w), sum(vals))

    def detach(self, leaf: int) -> tuple[int, int]:
        (p,) = self.adj[leaf]
        a, b = (x for x in self.adj[p] if x != leaf)
        for x in (a, b, leaf):
            self.adj[x].discard(p)
        del self.adj[p]
        self.adj[a].add(b)
        self.adj[b].add(a)
        return a, b

    def attach(self, leaf: int, u: int, v: int) -> None:
        p = self.next
        self.next += 1
        self.adj[u].discard(v)
        self.adj[v].discard(u)
        self.adj[p] = {u, v, leaf}
        self.adj[u].add(p)
        self.adj[v].add(p)
        self.adj[leaf].add(p)


def _bipartition(elements: list[int], f: CutFunction, rng: random.Random) -> tuple[list[int], list[int]]:
    """Random half split improved by single-element moves that lower max(f(A), f(B))."""
    s = 0
    for e in elements:
        s |= 1 << e
    shuffled = elements[:]
    rng.shuffle(shuffled)
    a = 0
    for e in shuffled[: len(shuffled) // 2]:
        a |= 1 << e

    def cost(a: int) -> tuple[int, int, int]:
        b = s & ~a
        fa, fb = f(a), f(b)
        return (max(fa, fb), fa + fb, abs(a.bit_count() - b.bit_count()))

    current = cost(a)
    improved = True
    while improved:
        improved = False
        rng.shuffle(shuffled)
        for e in shuffled:
            cand = a ^ (1 << e)
            if cand == 0 or cand == s:
                continue
            c = cost(cand)
            if c < current:
                a, current, improved = cand, c, True
    left = [e for e in elements if a >> e & 1]
    right = [e for e in elements if not a >> e & 1]
    return left, right


def _greedy_split(elements: list[int], f: CutFunction, rng: random.Random, dp: _SubsetDP) -> Nested:
    """Nested split of ``elements`` laid out as a rooted subtree."""
    if len(elements) == 1:
        return elements[0]
    if len(elements) == 2:
        return (elements[0], elements[1])
    if len(elements) <= EXACT_FINISH:
        s = 0
        for e in elements:
            s |= 1 << e
        return dp.nested(s)
    left, right = _bipartition(elements, f, rng)
    return (_greedy_split(left, f, rng, dp), _greedy_split(right, f, rng, dp))


def _local_search(tree: LayoutTree, f: CutFunction, max_rounds: int = 50) -> LayoutTree:
    if tree.ground_size < 4:
        return tree
    t = _Tree(tree)
    current = t.score(f)
    leaves = sorted(t.elem)
    for _ in range(max_rounds):
        improved = False
        # leaf swaps
        for i, u in enumerate(leaves):
            for v in leaves[i + 1:]:
                t.elem[u], t.elem[v] = t.elem[v], t.elem[u]
                s = t.score(f)
                if s < current:
                    current, improved = s, True
                else:
                    t.elem[u], t.elem[v] = t.elem[v], t.elem[u]
        # leaf moves
        for leaf in leaves:
            a, b = t.detach(leaf)
            best_spot, best_score = (a, b), None
            for u in sorted(t.adj):
                if u == leaf:
                    continue
                for v in sorted(t.adj[u]):
                    if v < u or v == leaf:
                        continue
                    t.attach(leaf, u, v)
                    s = t.score(f)
                    t.detach(leaf)
                    t.next -= 1
                    if best_score is None or s < best_score:
                        best_spot, best_score = (u, v), s
            if best_score is not None and best_score < current:
                current, improved = best_score, True
                t.attach(leaf, *best_spot)
            else:
                t.attach(leaf, a, b)
        if not improved:
            break
    return t.freeze()


def heuristic_width(f: CutFunction, seed: int = 0, restarts: int = 4, rounds: int = 50) -> tuple[int, LayoutTree]:
    """Upper bound on the layout-f-width: greedy recursive bipartition plus local search.

    Parts of at most ``EXACT_FINISH`` elements below the top split are laid
    out optimally as rooted subtrees; ``rounds`` bounds the local-search
    passes (0 skips them).  The returned width is recomputed from
    the returned tree; the result is deterministic for a given seed.
    """
    n = f.ground_size
    if n == 0:
        return 0, tree_from_nested(None, 0)
    if n == 1:
        return 0, tree_from_nested(0, 1)
    rng = random.Random(seed)
    dp = _SubsetDP(f)
    best: tuple[tuple[int, int, int], LayoutTree] | None = None
    for _ in range(max(1, restarts)):
        left, right = _bipartition(list(range(n)), f, rng)
        struct = (_greedy_split(left, f, rng, dp), _greedy_split(right, f, rng, dp))
        tree = _local_search(tree_from_nested(struct, n), f, rounds)
        score = _Tree(tree).score(f)
        if best is None or score < best[0]:
            best = (score, tree)
    tree = best[1]
    return layout_width(tree, f).width, tree


# --------------------------------------------------------------------------
# graph-level entry points


def _run(f: CutFunction, mode: str, cap: int, seed: int) -> tuple[int, LayoutTree]:
    if mode == "exact":
        return exact_width(f, cap)
    if mode == "heuristic":
        return heuristic_width(f, seed)
    raise ValueError(f"unknown mode {mode!r}")


def directed_branch_width(
    d: DiGraph, mode: str = "exact", *, cap: int = DEFAULT_EXACT_CAP, seed: int = 0
) -> tuple[int, LayoutTree]:
    """Directed branch-width of ``d`` with a directed branch decomposition.

    ``via_split`` computes the branch-width of the underlying graph of the
    source-sink split and maps the layout back through the edge bijection.
    """
    mode = mode.replace("-", "_")
    if mode == "via_split":
        from .transforms import source_sink_split

        h, bijection = source_sink_split(d)
        from .core import underlying

        width, tree = exact_width(ubw_cut(underlying(h)), cap)
        back = {new: old for old, new in enumerate(bijection)}
        leaf_map = {node: back[e] for node, e in tree.leaf_map.items()}
        return width, LayoutTree(tree.node_count, tree.tree_edges, leaf_map, d.m)
    return _run(dbw_cut(d), mode, cap, seed)


def bi_cut_rank_width(
    d: DiGraph, mode: str = "exact", *, cap: int = DEFAULT_EXACT_CAP, seed: int = 0
) -> tuple[int, LayoutTree]:
    return _run(bicut_cut(d), mode, cap, seed)


def branch_width(g: UGraph, mode: str = "exact", *, cap: int = DEFAULT_EXACT_CAP, seed: int = 0) -> tuple[int, LayoutTree]:
    return _run(ubw_cut(g), mode, cap, seed)
