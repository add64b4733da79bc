"""Acceptance criteria 1-12, one test each (criterion 11 is split by reading).

Every test appends one PASS/FAIL line to the acceptance summary printed at
the end of the pytest run and echoes it to stdout.  Instance families are
drawn from pinned seeds; all comparisons are exact integer comparisons and
the only tolerances are the wall-clock limits below.

Run on its own with ``python tests/test_acceptance.py``.
"""

from __future__ import annotations

import random
import shutil
import subprocess
import sys
import time
from itertools import combinations

import networkx as nx
import pytest
from conftest import ACCEPTANCE_LINES

import oracles
from dbwidth.core import (
    UGraph,
    bidirected_separator,
    build_digraph,
    build_ugraph,
    directed_line_graph,
    sources_and_sinks,
    underlying,
    vertex_separator,
)
from dbwidth.generators import (
    bipartite_orientation_grid,
    counterexample_family,
    random_dag,
    random_digraph,
    random_small_digraph,
    separator_example,
)
from dbwidth.layout import bicut_cut, dbw_cut, enumerate_width, exact_width, ubw_cut
from dbwidth.solvers import (
    brute_force_dred,
    brute_force_max_cut,
    clique_to_dred,
    d_hamilton_path,
    d_max_cut,
    dag_cop_sweep,
    held_karp_hamilton,
)
from dbwidth.transforms import contract_edge, identify_source_sink, is_butterfly_edge, source_sink_split
from dbwidth.verify import _bounds

# pinned limits
ORACLE_SECONDS = 60.0
VERIFY_SECONDS = 600.0
SEED = 20240611


def report(criterion: str, ok: bool, detail: str) -> None:
    line = f"criterion {criterion:>3}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)


def dbw(d) -> int:
    return exact_width(dbw_cut(d))[0]


def bw(g) -> int:
    return exact_width(ubw_cut(g))[0]


def small_digraphs(count: int, salt: str, max_edges: int = 7, **kw):
    rng = random.Random(f"{SEED}:{salt}")
    return [random_small_digraph(rng, max_edges, **kw) for _ in range(count)]


def test_criterion_01_exact_equals_enumeration():
    rng = random.Random(f"{SEED}:c1")
    start = time.perf_counter()
    mismatches, counts = [], {"dbw": 0, "bw": 0, "bcrk": 0}
    for i in range(300):
        kind = ("dbw", "bw", "bcrk")[i % 3]
        if kind == "bcrk":
            n = rng.randint(1, 8)
            f = bicut_cut(random_digraph(n, rng.choice([0.2, 0.35, 0.5]), rng.randrange(1 << 30)))
        else:
            d = random_small_digraph(rng, 8)
            f = dbw_cut(d) if kind == "dbw" else ubw_cut(underlying(d))
        assert f.ground_size <= 8
        counts[kind] += 1
        a, b = exact_width(f)[0], enumerate_width(f)
        if a != b:
            mismatches.append((kind, a, b))
    took = time.perf_counter() - start
    ok = not mismatches and took < ORACLE_SECONDS
    report("1", ok, f"300 instances {counts}, {len(mismatches)} mismatches, {took:.1f}s (limit {ORACLE_SECONDS:.0f}s)")
    assert ok, mismatches[:5]


def test_criterion_02_figure_one():
    d = separator_example()
    x = [d.edge_index(d.vertex(a), d.vertex(b)) for a, b in ("eh", "ih", "if", "fe")]
    rest = [i for i in range(d.m) if i not in x]
    first = {d.label(v) for v in vertex_separator(d, x)}
    second = {d.label(v) for v in vertex_separator(d, rest)}
    value = dbw_cut(d)(sum(1 << i for i in x))
    union = {d.label(v) for v in bidirected_separator(d, x)}
    ok = first == {"e"} and second == {"e", "f"} and value == 2 and union == {"e", "f"}
    report("2", ok, f"separators {sorted(first)} and {sorted(second)}, f_D(X) = {value}")
    assert ok


def test_criterion_03_sandwich():
    violations = []
    for d in small_digraphs(200, "c34"):
        sources, sinks = sources_and_sinks(d)
        s = len(sources | sinks)
        a, b = dbw(d), bw(underlying(d))
        if not b - s <= a <= b:
            violations.append((d.edges, a, b, s))
    report("3", not violations, f"200 digraphs with <= 7 edges, {len(violations)} violations of bw(u) - |S| <= dbw <= bw(u)")
    assert not violations


def test_criterion_04_split_pipeline():
    mismatches = []
    for d in small_digraphs(200, "c34"):
        h, _ = source_sink_split(d)
        a, b = dbw(d), bw(underlying(h))
        if a != b:
            mismatches.append((d.edges, a, b))
    report("4", not mismatches, f"200 digraphs, {len(mismatches)} mismatches of dbw(D) = bw(u(split(D)))")
    assert not mismatches


def test_criterion_05_line_graph_sandwich():
    violations, tightest = [], 0
    for d in small_digraphs(150, "c5"):
        line = directed_line_graph(d)
        bcrk = exact_width(bicut_cut(line))[0]
        w = dbw(d)
        if not (bcrk / 2 - 1 <= w <= 8 * (1 + 2**bcrk)):
            violations.append((d.edges, w, bcrk))
        tightest = max(tightest, bcrk)
    report("5", not violations, f"150 digraphs, {len(violations)} violations, max bcrk(L(D)) = {tightest}")
    assert not violations


def test_criterion_06_constants():
    three_path = bw(build_ugraph(4, [(0, 1), (1, 2), (2, 3)]))
    stars = [bw(build_ugraph(k + 1, [(0, i) for i in range(1, k + 1)])) for k in range(1, 8)]
    single = bw(build_ugraph(2, [(0, 1)]))
    gamma = dbw(bipartite_orientation_grid(3))
    d3, _, p3 = counterexample_family(3)
    d3w = dbw(d3)
    p3w = dbw(p3)
    # an independent exact route through the split for the 15-edge block
    p3_split = bw(underlying(source_sink_split(p3)[0]))
    d4, _, p4 = counterexample_family(4)
    d4_lo, d4_hi, d4_exact = _bounds(d4, 20)
    p4_lo, p4_hi, _ = _bounds(p4, 16)
    growth = all(lo >= 2 * n / 3 - 3 for n, lo in ((3, p3w), (4, p4_lo)))
    ok = (
        three_path == 2
        and max(stars) <= 1
        and single == 0
        and gamma == 0
        and d3w <= 3
        and p3w == p3_split
        and d4_exact
        and d4_hi <= 3
        and growth
    )
    report(
        "6",
        ok,
        f"bw(P3 edges) = {three_path}, bw(stars) = {max(stars)}, bw(K2) = {single}, dbw(Gamma 3x3) = {gamma}, "
        f"dbw(D3) = {d3w}, dbw(Delta'3) = {p3w}, dbw(D4) = {d4_hi}, dbw(Delta'4) in [{p4_lo}, {p4_hi}]",
    )
    assert ok


def test_criterion_07_identification_invariance():
    failures, pairs = [], 0
    for d in small_digraphs(100, "c7"):
        base = dbw(d)
        sources, sinks = sources_and_sinks(d)
        for group in (sources, sinks):
            for x, y in combinations(sorted(group), 2):
                pairs += 1
                got = dbw(identify_source_sink(d, x, y))
                if got != base:
                    failures.append((d.edges, x, y, base, got))
    report("7", not failures, f"100 digraphs, {pairs} identifications, {len(failures)} changes of dbw")
    assert not failures


def test_criterion_08_butterfly_monotone():
    failures, edges = [], 0
    for d in small_digraphs(100, "c8"):
        base = dbw(d)
        for e in range(d.m):
            if is_butterfly_edge(d, e):
                edges += 1
                got = dbw(contract_edge(d, e))
                if got > base:
                    failures.append((d.edges, e, base, got))
    report("8", not failures, f"100 digraphs, {edges} butterfly contractions, {len(failures)} increases")
    assert not failures


def test_criterion_09_solvers():
    rng = random.Random(f"{SEED}:c9")
    cut_bad, ham_bad, gate_bad, gated, yes = [], [], [], 0, 0
    for _ in range(200):
        n = rng.randint(1, 10)
        d = random_digraph(n, rng.choice([0.15, 0.25, 0.35, 0.5]), rng.randrange(1 << 30))
        value, _ = d_max_cut(d)
        if value != brute_force_max_cut(d):
            cut_bad.append(d.edges)
        found, _ = d_hamilton_path(d)
        if found != held_karp_hamilton(d):
            ham_bad.append(d.edges)
        yes += found
        sources, sinks = sources_and_sinks(d)
        if len(sources) >= 2 or len(sinks) >= 2:
            gated += 1
            if found:
                gate_bad.append(d.edges)
    j = build_digraph(3, [(0, 1), (2, 1)], labels=["a", "b", "c"])
    j_ok = d_hamilton_path(j) == (False, None)
    ok = not cut_bad and not ham_bad and not gate_bad and j_ok
    report(
        "9",
        ok,
        f"200 digraphs <= 10 vertices, max-cut mismatches {len(cut_bad)}, Hamilton mismatches {len(ham_bad)} "
        f"({yes} yes), gate rejected {gated - len(gate_bad)}/{gated}, J rejected {j_ok}",
    )
    assert ok


def _atlas(max_vertices: int):
    for g in nx.graph_atlas_g()[1:]:
        if g.number_of_nodes() <= max_vertices:
            yield UGraph(g.number_of_nodes(), tuple(sorted(tuple(sorted(e)) for e in g.edges)))


def test_criterion_10_clique_reduction():
    mismatches, wide, count, worst = [], [], 0, 0
    for g in _atlas(6):
        for r in (2, 3):
            count += 1
            inst = clique_to_dred(g, r)
            clique = oracles.has_clique(g.n, g.edges, r)
            answer = brute_force_dred(inst)
            if g.n <= 4 and answer != oracles.dred(inst.d.n, inst.d.edges, inst.k, inst.h, inst.s):
                mismatches.append((g.edges, r, "oracle"))
            if clique != answer:
                mismatches.append((g.edges, r, clique, answer))
            w = dbw(inst.d)
            worst = max(worst, w)
            if w > 1:
                wide.append((g.edges, r, w))
    ok = not mismatches and not wide
    report("10", ok, f"{count} (G, r) pairs from all graphs on <= 6 vertices, {len(mismatches)} mismatches, max dbw {worst}")
    assert ok


def _dags():
    rng = random.Random(f"{SEED}:c11")
    return [random_dag(rng.randint(1, 50), rng.uniform(0.02, 0.5), rng.randrange(1 << 30)) for _ in range(100)]


def test_criterion_11_cop_sweep_directed():
    cleared = sum(dag_cop_sweep(d, "directed")[0] for d in _dags())
    report("11a", cleared == 100, f"directed reading: {cleared}/100 random DAGs (<= 50 vertices) cleared")
    assert cleared == 100


@pytest.mark.xfail(
    strict=True,
    reason="one cop cannot clear a DAG with an undirected 2-path a->c<-b under underlying-graph reachability",
)
def test_criterion_11_cop_sweep_undirected():
    # The contaminated set loses only the cop's vertex each round.  With
    # robber moves along u(D) - v, a robber on c returns to a while the cop
    # stands on b, so any DAG with two arcs into (or out of) a vertex whose
    # other endpoints are not both already guarded stays contaminated.  This
    # is the node-search number of u(D), at least 2 whenever u(D) has a
    # vertex of degree 2, so the undirected reading is not achievable.
    dags = _dags()
    cleared = sum(dag_cop_sweep(d, "undirected")[0] for d in dags)
    trivial = sum(1 for d in dags if max((d.degree(v) for v in range(d.n)), default=0) <= 1)
    report(
        "11b",
        cleared == 100,
        f"undirected reading: {cleared}/100 cleared ({trivial} have max degree <= 1); expected failure, see test docstring",
    )
    assert cleared == 100


def test_criterion_12_verify_suite():
    exe = shutil.which("dbwidth")
    cmd = [exe] if exe else [sys.executable, "-m", "dbwidth"]
    start = time.perf_counter()
    proc = subprocess.run(cmd + ["verify", "--suite", "all"], capture_output=True, text=True, timeout=VERIFY_SECONDS)
    took = time.perf_counter() - start
    last = proc.stdout.strip().splitlines()[-1] if proc.stdout.strip() else proc.stderr.strip()
    ok = proc.returncode == 0 and took < VERIFY_SECONDS
    report("12", ok, f"verify --suite all: exit {proc.returncode}, {took:.1f}s (limit {VERIFY_SECONDS:.0f}s), {last}")
    assert ok, proc.stdout + proc.stderr


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-rA"]))
