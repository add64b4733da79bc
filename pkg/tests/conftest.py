from __future__ import annotations

import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from dbwidth.core import DiGraph, UGraph, build_digraph  # noqa: E402
from dbwidth.generators import separator_example  # noqa: E402

settings.register_profile("default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def digraphs(draw, max_vertices=6, max_edges=7, min_edges=0, antiparallel=True):
    n = draw(st.integers(2, max_vertices))
    pairs = [(i, j) for i in range(n) for j in range(n) if i != j]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, min_size=min_edges, max_size=max_edges))
    if not antiparallel:
        kept = []
        for t, h in chosen:
            if (h, t) not in kept:
                kept.append((t, h))
        chosen = kept
    return DiGraph(n, tuple(chosen))


@st.composite
def ugraphs(draw, max_vertices=6, max_edges=7):
    n = draw(st.integers(2, max_vertices))
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=max_edges))
    return UGraph(n, tuple(chosen))


def path(k: int) -> DiGraph:
    return build_digraph(k, [(i, i + 1) for i in range(k - 1)])


def cycle(k: int) -> DiGraph:
    return build_digraph(k, [(i, (i + 1) % k) for i in range(k)])


def J() -> DiGraph:
    """a -> b <- c"""
    return build_digraph(3, [(0, 1), (2, 1)], labels=["a", "b", "c"])


@pytest.fixture
def fig1() -> DiGraph:
    return separator_example()


def fig1_split(d: DiGraph) -> list[int]:
    """X = {e->h, i->h, i->f, f->e} as edge indices."""
    return [d.edge_index(d.vertex(a), d.vertex(b)) for a, b in ("eh", "ih", "if", "fe")]


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
