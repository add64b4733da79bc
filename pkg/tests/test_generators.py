from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from dbwidth.core import build_ugraph, directed_line_graph, sources_and_sinks, topological_order, underlying
from dbwidth.generators import (
    bidirect,
    bipartite_orientation_grid,
    counterexample_family,
    grid,
    ne_dag_grid,
    random_dag,
    random_digraph,
    random_ugraph,
    separator_example,
)
from dbwidth.layout import branch_width, dbw_cut, exact_width


def test_grid_sizes():
    assert (grid(2, 2).n, grid(2, 2).m) == (4, 4)
    assert (grid(3, 3).n, grid(3, 3).m) == (9, 12)
    g = grid(1, 4)
    assert g.edges == ((0, 1), (1, 2), (2, 3))
    with pytest.raises(ValueError):
        grid(0, 3)


@pytest.mark.parametrize("n", range(1, 9))
def test_gamma_grid_sources_and_sinks(n):
    d = bipartite_orientation_grid(n)
    sources, sinks = sources_and_sinks(d)
    assert sources | sinks == set(range(d.n))
    assert directed_line_graph(d).m == 0


def test_gamma_grid_small():
    assert bipartite_orientation_grid(2).m == 4
    assert exact_width(dbw_cut(bipartite_orientation_grid(3)))[0] == 0


@pytest.mark.parametrize("k", range(2, 7))
def test_ne_grid(k):
    d = ne_dag_grid(k)
    sources, sinks = sources_and_sinks(d)
    assert len(sources) == len(sinks) == 1
    assert topological_order(d) is not None
    assert d.m == 2 * k * (k - 1)


def test_ne_grid_lower_bound():
    d = ne_dag_grid(3)
    dbw = exact_width(dbw_cut(d))[0]
    bw = branch_width(underlying(d))[0]
    assert dbw >= bw - 2
    with pytest.raises(ValueError):
        ne_dag_grid(1)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_counterexample_sizes(n):
    dn, delta, dprime = counterexample_family(n)
    assert dn.n == 4 * n
    assert dn.m == n + n * n + 2 * n
    # contracting the n gadget arcs removes n vertices and n arcs
    assert (delta.n, delta.m) == (3 * n, n + n * n + n)
    # identifying b_1..b_n removes n - 1 vertices
    assert (dprime.n, dprime.m) == (2 * n + 1, delta.m)
    labels = [dn.label(v) for v in range(dn.n)]
    assert labels[:n] == [f"x{i + 1}" for i in range(n)]
    assert labels[n : 2 * n] == [f"s{i + 1}" for i in range(n)]
    assert "b" in {dprime.label(v) for v in range(dprime.n)}


def test_counterexample_three_shape():
    dn, _, dprime = counterexample_family(3)
    sources, sinks = sources_and_sinks(dn)
    assert {dn.label(v) for v in sources} == {"s1", "s2", "s3", "b1", "b2", "b3"}
    assert {dn.label(v) for v in sinks} == {"a1", "a2", "a3"}
    sources, sinks = sources_and_sinks(dprime)
    assert {dprime.label(v) for v in sources} == {"b"}
    assert not sinks
    assert exact_width(dbw_cut(dn))[0] <= 3


def test_separator_example_shape():
    d = separator_example()
    assert (d.n, d.m) == (9, 12)


def test_bidirect():
    single = bidirect(grid(1, 2))
    assert single.edges == ((0, 1), (1, 0))
    tri = bidirect(build_ugraph(3, [(0, 1), (1, 2), (0, 2)]))
    assert tri.m == 6 and sources_and_sinks(tri) == (frozenset(), frozenset())
    assert bidirect(grid(1, 3)).m == 4


def test_random_families():
    assert random_digraph(5, 0.0, 1).m == 0
    assert random_digraph(3, 1.0, 1).m == 6
    for seed in range(20):
        assert topological_order(random_dag(8, 0.5, seed)) is not None
    with pytest.raises(ValueError):
        random_digraph(3, 1.5, 0)


@given(st.integers(0, 9), st.floats(0, 1), st.integers(0, 2**20))
def test_generators_deterministic(n, p, seed):
    assert random_digraph(n, p, seed) == random_digraph(n, p, seed)
    assert random_dag(n, p, seed) == random_dag(n, p, seed)
    assert random_ugraph(n, p, seed) == random_ugraph(n, p, seed)
