"""Instance families: grids, grid orientations, the contraction counterexample, random graphs."""

from __future__ import annotations

import random

from .core import DiGraph, UGraph, build_digraph
from .transforms import contract_edge, identify_source_sink


def grid(rows: int, cols: int) -> UGraph:
    """rows x cols grid, vertex (r, c) at index r*cols + c; right edge before down edge."""
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be positive")
    edges = []
    for r in range(rows):
        for c in range(cols):
            v = r * cols + c
            if c + 1 < cols:
                edges.append((v, v + 1))
            if r + 1 < rows:
                edges.append((v, v + cols))
    labels = [f"{r},{c}" for r in range(rows) for c in range(cols)]
    return UGraph(rows * cols, tuple(edges), tuple(labels))


def bipartite_orientation_grid(n: int) -> DiGraph:
    """n x n grid with every edge oriented toward its black endpoint ((row + col) odd)."""
    g = grid(n, n)
    edges = []
    for a, b in g.edges:
        ra, ca = divmod(a, n)
        edges.append((b, a) if (ra + ca) % 2 else (a, b))
    return DiGraph(g.n, tuple(edges), g.labels)


def ne_dag_grid(k: int) -> DiGraph:
    """k x k grid with arcs (a, b) -> (a, b+1) and (a, b) -> (a+1, b)."""
    if k < 2:
        raise ValueError("k must be at least 2")
    g = grid(k, k)
    return DiGraph(g.n, g.edges, g.labels)


def counterexample_family(n: int) -> tuple[DiGraph, DiGraph, DiGraph]:
    """The digraphs D_n, Delta_n and Delta'_n of the contraction counterexample.

    D_n: directed n-cycle x_1..x_n, sources s_1..s_n each with an arc to every
    cycle vertex, and gadget arcs s_i -> a_i and b_i -> a_i.  Vertices are
    indexed cycle, sources, a's, b's.  Delta_n contracts every s_i -> a_i and
    Delta'_n identifies b_1..b_n into a single source b.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    x = list(range(n))
    s = list(range(n, 2 * n))
    a = list(range(2 * n, 3 * n))
    b = list(range(3 * n, 4 * n))
    labels = [f"{p}{i + 1}" for p in "xsab" for i in range(n)]
    edges = [(x[i], x[(i + 1) % n]) for i in range(n)]
    edges += [(s[i], x[j]) for i in range(n) for j in range(n)]
    edges += [(s[i], a[i]) for i in range(n)]
    edges += [(b[i], a[i]) for i in range(n)]
    dn = build_digraph(4 * n, edges, labels=labels)

    delta = dn
    for i in range(n):
        delta = contract_edge(delta, delta.edge_index(delta.vertex(f"s{i + 1}"), delta.vertex(f"a{i + 1}")))

    delta_prime = delta
    for i in range(1, n):
        delta_prime = identify_source_sink(delta_prime, delta_prime.vertex("b1"), delta_prime.vertex(f"b{i + 1}"))
    delta_prime = delta_prime.with_labels([("b" if lab == "b1" else lab) for lab in delta_prime.labels])
    return dn, delta, delta_prime


def separator_example() -> DiGraph:
    """Nine-vertex, twelve-arc digraph a..i whose split {e->h, i->h, i->f, f->e} has separators {e} and {e, f}."""
    names = "abcdefghi"
    arcs = ["ab", "bc", "da", "be", "fc", "ed", "fe", "gd", "eh", "if", "gh", "ih"]
    index = {c: i for i, c in enumerate(names)}
    return build_digraph(9, [(index[a], index[b]) for a, b in arcs], labels=list(names))


def bidirect(g: UGraph) -> DiGraph:
    """Replace every edge xy by the arcs x->y and y->x (in that order)."""
    if not g.is_simple():
        raise ValueError("bidirect needs a simple graph")
    edges = []
    for a, b in g.edges:
        edges += [(a, b), (b, a)]
    return DiGraph(g.n, tuple(edges), g.labels)


def random_digraph(n: int, p: float, seed: int) -> DiGraph:
    """Each ordered pair (i, j), i != j, becomes an arc independently with probability p."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    rng = random.Random(seed)
    edges = [(i, j) for i in range(n) for j in range(n) if i != j and rng.random() < p]
    return DiGraph(n, tuple(edges))


def random_dag(n: int, p: float, seed: int) -> DiGraph:
    """Like :func:`random_digraph` restricted to pairs i < j."""
    if not 0 <= p <= 1:
        raise ValueError("p must lie in [0, 1]")
    rng = random.Random(seed)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return DiGraph(n, tuple(edges))


def random_ugraph(n: int, p: float, seed: int) -> UGraph:
    rng = random.Random(seed)
    edges = [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]
    return UGraph(n, tuple(edges))


def random_small_digraph(rng: random.Random, max_edges: int, max_vertices: int = 6, *, allow_antiparallel: bool = True) -> DiGraph:
    """A digraph with at most ``max_edges`` arcs drawn uniformly from the ordered pairs."""
    n = rng.randint(2, max_vertices)
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    rng.shuffle(pairs)
    m = rng.randint(1, min(max_edges, len(pairs)))
    chosen: list[tuple[int, int]] = []
    for t, h in pairs:
        if len(chosen) == m:
            break
        if not allow_antiparallel and (h, t) in chosen:
            continue
        chosen.append((t, h))
    return DiGraph(n, tuple(chosen))
