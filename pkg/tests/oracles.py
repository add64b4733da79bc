"""Slow, independent reference implementations used only by the tests.

Nothing here shares code with the package beyond reading ``edges`` and ``n``
off a graph object: separators are evaluated from their set definitions,
ranks by naive elimination over lists, and optimisation problems by plain
enumeration.
"""

from __future__ import annotations

from itertools import combinations, permutations, product


def vertex_separator(edges, b):
    """y with an edge into y outside b and an edge out of y inside b."""
    b = set(b)
    heads_out = {edges[i][1] for i in range(len(edges)) if i not in b}
    tails_in = {edges[i][0] for i in b}
    return heads_out & tails_in


def bidirected_separator(edges, x):
    rest = set(range(len(edges))) - set(x)
    return vertex_separator(edges, x) | vertex_separator(edges, rest)


def dbw_value(edges, x) -> int:
    return len(bidirected_separator(edges, x))


def ubw_value(edges, x) -> int:
    x = set(x)
    inside = {v for i in x for v in edges[i]}
    outside = {v for i in range(len(edges)) if i not in x for v in edges[i]}
    return len(inside & outside)


def rank_gf2(rows: list[list[int]]) -> int:
    rows = [list(r) for r in rows]
    rank, col = 0, 0
    width = len(rows[0]) if rows else 0
    while rank < len(rows) and col < width:
        pivot = next((r for r in range(rank, len(rows)) if rows[r][col]), None)
        if pivot is None:
            col += 1
            continue
        rows[rank], rows[pivot] = rows[pivot], rows[rank]
        for r in range(len(rows)):
            if r != rank and rows[r][col]:
                rows[r] = [a ^ b for a, b in zip(rows[r], rows[rank])]
        rank += 1
        col += 1
    return rank


def bicut_value(n, edges, x) -> int:
    x = sorted(set(x))
    rest = [v for v in range(n) if v not in x]
    arcs = set(edges)
    fwd = [[int((u, v) in arcs) for v in x] for u in rest]
    bwd = [[int((u, v) in arcs) for v in rest] for u in x]
    return rank_gf2(fwd) + rank_gf2(bwd)


def line_graph_arcs(edges, distinct=True) -> set[tuple[int, int]]:
    out = set()
    for i, (w, x) in enumerate(edges):
        for j, (x2, y) in enumerate(edges):
            if i != j and x == x2 and (not distinct or len({w, x, y}) == 3):
                out.add((i, j))
    return out


def max_cut(n, edges) -> int:
    best = 0
    for bits in product((0, 1), repeat=n):
        best = max(best, sum(1 for t, h in edges if not bits[t] and bits[h]))
    return best


def hamilton(n, edges) -> bool:
    if n == 0:
        return False
    arcs = set(edges)
    return any(all((p[i], p[i + 1]) in arcs for i in range(n - 1)) for p in permutations(range(n)))


def has_clique(n, edges, r) -> bool:
    adj = {frozenset(e) for e in edges}
    return any(all(frozenset(p) in adj for p in combinations(c, 2)) for c in combinations(range(n), r))


def reach2(n, edges, removed, s) -> set[int]:
    keep = [e for i, e in enumerate(edges) if i not in set(removed)]
    one = {h for t, h in keep if t == s}
    two = {h for t, h in keep if t in one}
    return {s} | one | two


def dred(n, edges, k, h, s) -> bool:
    return any(
        n - len(reach2(n, edges, f, s)) >= h for j in range(k + 1) for f in combinations(range(len(edges)), j)
    )


def layouts(ground: int):
    """Every unrooted cubic tree on leaves 0..ground-1, as (edge list, leaf of element)."""
    if ground < 2:
        yield [], {0: 0} if ground else {}
        return
    if ground == 2:
        yield [(0, 1)], {0: 0, 1: 1}
        return

    def grow(edges, leaves, k, next_node):
        if k == ground:
            yield list(edges), dict(leaves)
            return
        for idx in range(len(edges)):
            u, v = edges[idx]
            mid, leaf = next_node, next_node + 1
            new = edges[:idx] + edges[idx + 1 :] + [(u, mid), (mid, v), (mid, leaf)]
            leaves[k] = leaf
            yield from grow(new, leaves, k + 1, next_node + 2)
            del leaves[k]

    # star on leaves 0, 1, 2 around centre 3
    yield from grow([(0, 3), (1, 3), (2, 3)], {0: 0, 1: 1, 2: 2}, 3, 4)


def width_by_enumeration(ground: int, value) -> int:
    """Minimum over all layouts of the maximum cut value; ``value`` takes a set of elements."""
    if ground < 2:
        return 0
    best = None
    for edges, leaf_of in layouts(ground):
        element_at = {node: e for e, node in leaf_of.items()}
        adj: dict[int, list[int]] = {}
        for u, v in edges:
            adj.setdefault(u, []).append(v)
            adj.setdefault(v, []).append(u)
        worst = 0
        for u, v in edges:
            # elements on v's side once the edge u-v is removed
            side, stack, seen = set(), [v], {u, v}
            while stack:
                w = stack.pop()
                if w in element_at:
                    side.add(element_at[w])
                for z in adj[w]:
                    if z not in seen:
                        seen.add(z)
                        stack.append(z)
            worst = max(worst, value(side))
            if best is not None and worst >= best:
                break
        if best is None or worst < best:
            best = worst
    return best


def dbw(edges) -> int:
    return width_by_enumeration(len(edges), lambda x: dbw_value(edges, x))


def bw(edges) -> int:
    return width_by_enumeration(len(edges), lambda x: ubw_value(edges, x))
