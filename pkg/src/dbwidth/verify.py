"""Executable checks of the width inequalities and invariances against exact engines and oracles.

Each check draws its instances from a seeded generator, evaluates every
instance independently and records failures as self-contained payloads
(graphs in the shared structured format) that :func:`replay` re-runs.
A check that can only bound one side of a claim says so in its notes.
"""

from __future__ import annotations

import json
import random
import time
from collections.abc import Callable, Sequence
from dataclasses import asdict, dataclass, field, fields
from itertools import combinations
from pathlib import Path
from typing import Any

from .core import (
    DiGraph,
    UGraph,
    bidirected_separator,
    directed_line_graph,
    is_consistent,
    iter_bits,
    labeling_from_separator,
    sources_and_sinks,
    topological_order,
    underlying,
)
from .errors import GroundTooLargeError, UnknownCheckError
from .generators import bidirect, counterexample_family, ne_dag_grid, random_dag, random_digraph, random_small_digraph
from .gf2 import rank_of_rows
from .io import digraph_from_doc, graph_to_doc, ugraph_from_doc
from .layout import bicut_cut, dbw_cut, exact_width, heuristic_width, ubw_cut
from .solvers import (
    brute_force_dred,
    brute_force_max_cut,
    clique_to_dred,
    d_hamilton_path,
    d_max_cut,
    decide_dbw,
    has_clique,
    held_karp_hamilton,
)
from .transforms import contract_edge, delete_edges, delete_vertices, identify_source_sink, is_butterfly_edge, source_sink_split
from .treedec import branch_to_tree_decomposition, validate_tree_decomposition

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Budget:
    instances: int = 100
    max_edges: int = 7
    exact_cap: int = 16
    family_cap: int = 20
    solver_vertices: int = 10
    clique_vertices: int = 6
    atlas_edges: int = 4

    @classmethod
    def parse(cls, spec: str | None) -> Budget:
        """``"instances=100,max_edges=6"`` style overrides."""
        if not spec:
            return cls()
        known = {f.name for f in fields(cls)}
        values = {}
        for part in spec.split(","):
            if not part.strip():
                continue
            key, _, value = part.partition("=")
            key = key.strip().replace("-", "_")
            if key not in known:
                raise ValueError(f"unknown cap {key!r}; known: {', '.join(sorted(known))}")
            values[key] = int(value)
        return cls(**values)


@dataclass
class CheckResult:
    name: str
    title: str
    instances: int = 0
    failures: list[dict[str, Any]] = field(default_factory=list)
    seconds: float = 0.0
    notes: list[str] = field(default_factory=list)
    records: list[dict[str, Any]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures


@dataclass
class Report:
    seed: int
    budget: Budget
    results: list[CheckResult]

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.results)

    def to_doc(self, timings: bool = True) -> dict[str, Any]:
        return {
            "schema_version": SCHEMA_VERSION,
            "seed": self.seed,
            "budget": asdict(self.budget),
            "ok": self.ok,
            "instances": sum(r.instances for r in self.results),
            "checks": [
                {
                    "name": r.name,
                    "title": r.title,
                    "ok": r.ok,
                    "instances": r.instances,
                    "failures": r.failures,
                    **({"seconds": round(r.seconds, 3)} if timings else {}),
                    "notes": r.notes,
                    "records": r.records,
                }
                for r in self.results
            ],
        }

    def to_text(self, timings: bool = True) -> str:
        lines = []
        for r in self.results:
            status = "PASS" if r.ok else "FAIL"
            took = f", {r.seconds:.2f}s" if timings else ""
            lines.append(f"{status} {r.name:<4} {r.title}: {r.instances} instances, {len(r.failures)} failures{took}")
            for note in r.notes:
                lines.append(f"       note: {note}")
            for rec in r.records:
                lines.append("       " + ", ".join(f"{k}={v}" for k, v in rec.items()))
            for fail in r.failures[:5]:
                lines.append(f"       counterexample: {json.dumps(fail['detail'])}")
        total = sum(r.instances for r in self.results)
        lines.append(f"{'OK' if self.ok else 'FAILED'}: {len(self.results)} checks, {total} instances, seed {self.seed}")
        return "\n".join(lines) + "\n"

    def save_counterexamples(self, directory: str | Path) -> list[Path]:
        out = Path(directory)
        out.mkdir(parents=True, exist_ok=True)
        written = []
        for r in self.results:
            for i, fail in enumerate(r.failures):
                path = out / f"{r.name}_{i}.json"
                path.write_text(json.dumps({"check": r.name, **fail}, indent=2) + "\n")
                written.append(path)
        return written


# --------------------------------------------------------------------------
# helpers


def _dbw(d: DiGraph, cap: int) -> int:
    return exact_width(dbw_cut(d), cap)[0]


def _bw(g: UGraph, cap: int) -> int:
    return exact_width(ubw_cut(g), cap)[0]


def _terminals(d: DiGraph) -> frozenset[int]:
    sources, sinks = sources_and_sinks(d)
    return sources | sinks


def _small(rng: random.Random, budget: Budget, **kw) -> DiGraph:
    return random_small_digraph(rng, budget.max_edges, **kw)


def _graph_payloads(rng, budget, **kw) -> list[dict[str, Any]]:
    return [{"graph": graph_to_doc(_small(rng, budget, **kw))} for _ in range(budget.instances)]


def _has_antiparallel(d: DiGraph) -> bool:
    arcs = set(d.edges)
    return any((h, t) in arcs for t, h in d.edges)


Outcome = tuple[bool, dict[str, Any]]


# --------------------------------------------------------------------------
# checks


def _gen_c1(rng, budget):
    out = []
    for _ in range(budget.instances):
        d = _small(rng, budget)
        drop_e = sorted(rng.sample(range(d.m), rng.randint(0, d.m)))
        drop_v = sorted(v for v in range(d.n) if rng.random() < 0.2)
        out.append({"graph": graph_to_doc(d), "delete_edges": drop_e, "delete_vertices": drop_v})
    return out


def _eval_c1(p, budget) -> Outcome:
    d = digraph_from_doc(p["graph"])
    h, _ = delete_edges(d, p["delete_edges"])
    h, _ = delete_vertices(h, p["delete_vertices"])
    a, b = _dbw(h, budget.exact_cap), _dbw(d, budget.exact_cap)
    return a <= b, {"dbw_subgraph": a, "dbw_graph": b}


def _gen_c2(rng, budget):
    small = Budget(**{**asdict(budget), "max_edges": min(budget.max_edges, 6)})
    return _graph_payloads(rng, small)


def _eval_c2(p, budget) -> Outcome:
    d = digraph_from_doc(p["graph"])
    terminals = _terminals(d)
    inc = [0] * d.n
    for i, (t, h) in enumerate(d.edges):
        inc[t] |= 1 << i
        inc[h] |= 1 << i
    full = (1 << d.m) - 1
    for x in range(1 << d.m):
        rest = full & ~x
        shared = {v for v in range(d.n) if inc[v] & x and inc[v] & rest}
        got = bidirected_separator(d, list(iter_bits(x)))
        if got != shared - terminals:
            return False, {"X": list(iter_bits(x)), "separator": sorted(got), "expected": sorted(shared - terminals)}
    return True, {}


def _eval_c3(p, budget) -> Outcome:
    d = digraph_from_doc(p["graph"])
    dbw = _dbw(d, budget.exact_cap)
    bw = _bw(underlying(d), budget.exact_cap)
    s = len(_terminals(d))
    return bw - s <= dbw <= bw, {"dbw": dbw, "bw_u": bw, "terminals": s}


def _gen_c4(rng, budget):
    import networkx as nx

    out = []
    for g in nx.graph_atlas_g():
        m = g.number_of_edges()
        if 1 <= m <= budget.atlas_edges and min(dict(g.degree).values()) > 0:
            ug = UGraph(g.number_of_nodes(), tuple(sorted(tuple(sorted(e)) for e in g.edges)))
            out.append({"ugraph": graph_to_doc(ug)})
    return out


def _eval_c4(p, budget) -> Outcome:
    # every leaf edge of a bidirected layout has order 2, so the identity
    # holds with max(2, bw(G)); bw(u(D)) counts the doubled edges and agrees
    g = ugraph_from_doc(p["ugraph"])
    d = bidirect(g)
    a, b = _dbw(d, budget.exact_cap), _bw(g, budget.exact_cap)
    c = _bw(underlying(d), budget.exact_cap)
    expected = max(2, b) if g.m else b
    return a == expected and a == c, {"dbw_bidirected": a, "bw": b, "bw_u": c, "literal": a == b}


def _summarize_c4(details: list[dict[str, Any]]) -> list[str]:
    off = [d for d in details if not d.get("literal", True)]
    if not off:
        return []
    worst = max(d["bw"] for d in off)
    return [f"dbw(D) = bw(G) read literally fails on {len(off)} of {len(details)} graphs, all with bw(G) = {worst} or less"]


def _eval_c5(p, budget) -> Outcome:
    d = digraph_from_doc(p["graph"])
    base = _dbw(d, budget.exact_cap)
    sources, sinks = sources_and_sinks(d)
    for group in (sources, sinks):
        for x, y in combinations(sorted(group), 2):
            h = identify_source_sink(d, x, y)
            got = _dbw(h, budget.exact_cap)
            if got != base:
                return False, {"pair": [x, y], "dbw": base, "dbw_identified": got}
    return True, {"dbw": base}


def _eval_c6(p, budget) -> Outcome:
    d = digraph_from_doc(p["graph"])
    h, _ = source_sink_split(d)
    a, b = _dbw(d, budget.exact_cap), _bw(underlying(h), budget.exact_cap)
    return a == b, {"dbw": a, "bw_split": b}


def _eval_c7(p, budget) -> Outcome:
    d = digraph_from_doc(p["graph"])
    dbw = _dbw(d, budget.exact_cap)
    bcrk = exact_width(bicut_cut(directed_line_graph(d)), budget.exact_cap)[0]
    ok = bcrk / 2 - 1 <= dbw <= 8 * (1 + 2**bcrk)
    return ok, {"dbw": dbw, "bcrk_line_graph": bcrk}


def _eval_c8(p, budget) -> Outcome:
    d = digraph_from_doc(p["graph"])
    base = _dbw(d, budget.exact_cap)
    for e in range(d.m):
        if is_butterfly_edge(d, e):
            got = _dbw(contract_edge(d, e), budget.exact_cap)
            if got > base:
                return False, {"edge": e, "dbw": base, "dbw_contracted": got}
    return True, {"dbw": base}


def _gen_c9(rng, budget):
    return [{"n": 3}, {"n": 4}]


def _bounds(d: DiGraph, cap: int, seed: int = 0) -> tuple[int, int, bool]:
    """(lower, upper, exact) for dbw(d); lower comes from the largest exactly solvable prefix subgraph."""
    f = dbw_cut(d)
    try:
        w, _ = exact_width(f, cap)
        return w, w, True
    except GroundTooLargeError:
        pass
    upper = heuristic_width(f, seed)[0]
    keep = d.m
    while keep > 0:
        keep -= 1
        h, _ = delete_edges(d, range(keep, d.m))
        if max(b.bit_count() for b in dbw_cut(h).blocks or [0]) <= cap:
            break
    return exact_width(dbw_cut(h), cap)[0], upper, False


def _eval_c9(p, budget) -> Outcome:
    n = p["n"]
    dn, _, dprime = counterexample_family(n)
    lo_d, hi_d, exact_d = _bounds(dn, budget.family_cap)
    lo_p, hi_p, exact_p = _bounds(dprime, budget.exact_cap)
    ok = hi_d <= 3 and lo_p >= 2 * n / 3 - 3
    return ok, {
        "n": n,
        "dbw_D": hi_d if exact_d else [lo_d, hi_d],
        "dbw_Dprime": hi_p if exact_p else [lo_p, hi_p],
        "exact": exact_d and exact_p,
    }


def _gen_c10(rng, budget):
    out = [{"grid": k} for k in (2, 3)]
    for _ in range(budget.instances):
        n = rng.randint(2, 7)
        d = random_dag(n, rng.uniform(0.2, 0.7), rng.randrange(1 << 30))
        while d.m > budget.max_edges + 3:
            d, _ = delete_edges(d, [d.m - 1])
        out.append({"graph": graph_to_doc(d)})
    return out


def _eval_c10(p, budget) -> Outcome:
    d = ne_dag_grid(p["grid"]) if "grid" in p else digraph_from_doc(p["graph"])
    if topological_order(d) is None:
        return False, {"reason": "not acyclic"}
    sources, sinks = sources_and_sinks(d)
    if "grid" in p and (len(sources), len(sinks)) != (1, 1):
        return False, {"sources": len(sources), "sinks": len(sinks)}
    dbw = _dbw(d, budget.exact_cap)
    bw = _bw(underlying(d), budget.exact_cap)
    s = len(sources | sinks)
    return dbw >= bw - s, {"dbw": dbw, "bw_u": bw, "terminals": s}


def _gen_c11(rng, budget):
    small = Budget(**{**asdict(budget), "max_edges": min(budget.max_edges, 6)})
    return _graph_payloads(rng, small)


def _eval_c11(p, budget) -> Outcome:
    d = digraph_from_doc(p["graph"])
    # with an antiparallel pair the labeling argument needs the walk line graph
    walk = _has_antiparallel(d)
    line = directed_line_graph(d, distinct=not walk)
    rows = line.out_vertex_masks
    full = (1 << d.m) - 1
    for x in range(1 << d.m):
        xs = list(iter_bits(x))
        rest = [i for i in range(d.m) if not x >> i & 1]
        lam1, lam2 = labeling_from_separator(d, xs)
        if not is_consistent(line, rest, xs, lam1, lam2):
            return False, {"X": xs, "reason": "labeling not consistent", "walk_reading": walk}
        rank = rank_of_rows([rows[i] & x for i in rest])
        if rank > lam1.label_count:
            return False, {"X": xs, "rank": rank, "labels": lam1.label_count}
    return True, {"walk_reading": walk, "edges": d.m, "subsets": full + 1}


def _gen_c12(rng, budget):
    out = []
    tasks = ["maxcut", "hamilton", "decide", "maxcut_identify", "treedec"]
    for i in range(budget.instances):
        task = tasks[i % len(tasks)]
        if task in ("maxcut", "hamilton"):
            n = rng.randint(1, budget.solver_vertices)
            d = random_digraph(n, rng.choice([0.15, 0.25, 0.4]), rng.randrange(1 << 30))
        else:
            d = _small(rng, budget)
        out.append({"task": task, "graph": graph_to_doc(d)})
    return out


def _eval_c12(p, budget) -> Outcome:
    d = digraph_from_doc(p["graph"])
    task = p["task"]
    if task == "maxcut":
        a, _ = d_max_cut(d)
        b = brute_force_max_cut(d)
        return a == b, {"dp": a, "oracle": b}
    if task == "hamilton":
        a, _ = d_hamilton_path(d)
        b = held_karp_hamilton(d)
        return a == b, {"dp": a, "oracle": b}
    if task == "decide":
        w = _dbw(d, budget.exact_cap)
        for k in (w - 1, w):
            if k >= 0 and decide_dbw(d, k, cap=budget.exact_cap) != (w <= k):
                return False, {"k": k, "dbw": w}
        return True, {"dbw": w}
    if task == "maxcut_identify":
        base = brute_force_max_cut(d)
        sources, sinks = sources_and_sinks(d)
        for group in (sources, sinks):
            for x, y in combinations(sorted(group), 2):
                # parallel arcs are kept: collapsing them would lose cut edges
                got = brute_force_max_cut(identify_source_sink(d, x, y, keep_parallel=True))
                if got != base:
                    return False, {"pair": [x, y], "max_cut": base, "identified": got}
        return True, {"max_cut": base}
    if task == "treedec":
        g = underlying(d)
        w, tree = exact_width(ubw_cut(g), budget.exact_cap)
        td = branch_to_tree_decomposition(tree, g)
        bound = max(1, 3 * w // 2 - 1)
        ok = validate_tree_decomposition(g, td) and td.width <= bound
        return ok, {"layout_width": w, "td_width": td.width, "bound": bound}
    raise ValueError(f"unknown task {task!r}")


def _gen_c13(rng, budget):
    import networkx as nx

    out = []
    for g in nx.graph_atlas_g()[1:]:
        if g.number_of_nodes() > budget.clique_vertices:
            continue
        ug = UGraph(g.number_of_nodes(), tuple(sorted(tuple(sorted(e)) for e in g.edges)))
        for r in (2, 3):
            out.append({"ugraph": graph_to_doc(ug), "r": r})
    return out


def _eval_c13(p, budget) -> Outcome:
    g = ugraph_from_doc(p["ugraph"])
    inst = clique_to_dred(g, p["r"])
    clique = has_clique(g, p["r"])
    dred = brute_force_dred(inst)
    dbw = _dbw(inst.d, budget.exact_cap)
    return clique == dred and dbw <= 1, {"clique": clique, "dred": dred, "dbw": dbw}


@dataclass(frozen=True)
class Check:
    title: str
    generate: Callable[[random.Random, Budget], list[dict[str, Any]]]
    evaluate: Callable[[dict[str, Any], Budget], Outcome]
    notes: tuple[str, ...] = ()
    summarize: Callable[[list[dict[str, Any]]], list[str]] | None = None


CHECKS: dict[str, Check] = {
    "C1": Check("subgraph monotonicity", _gen_c1, _eval_c1),
    "C2": Check("bidirected separator = shared vertices minus sources/sinks", _gen_c2, _eval_c2),
    "C3": Check("bw(u(D)) - |S| <= dbw(D) <= bw(u(D))", lambda r, b: _graph_payloads(r, b), _eval_c3),
    "C4": Check(
        "bidirected orientation: dbw(D) = bw(u(D)) = max(2, bw(G))",
        _gen_c4,
        _eval_c4,
        summarize=_summarize_c4,
    ),
    "C5": Check("source/sink identification invariance", lambda r, b: _graph_payloads(r, b), _eval_c5),
    "C6": Check("dbw(D) = bw(u(source-sink split))", lambda r, b: _graph_payloads(r, b), _eval_c6),
    "C7": Check(
        "bcrk(L(D))/2 - 1 <= dbw(D) <= 8(1 + 2^bcrk(L(D)))",
        lambda r, b: _graph_payloads(r, b),
        _eval_c7,
    ),
    "C8": Check("butterfly contraction never raises dbw", lambda r, b: _graph_payloads(r, b), _eval_c8),
    "C9": Check(
        "contraction counterexample: dbw(D_n) <= 3, dbw(D'_n) >= 2n/3 - 3",
        _gen_c9,
        _eval_c9,
        ("n=4: D'_n has a 24-edge block; its value is bracketed by an exact subgraph lower bound"
         " and a heuristic upper bound, so only the lower-bound side is asserted",),
    ),
    "C10": Check("DAG lower bound dbw(D) >= bw(u(D)) - |S|", _gen_c10, _eval_c10),
    "C11": Check(
        "separator labelings are consistent in the directed line graph",
        _gen_c11,
        _eval_c11,
        ("digraphs with an antiparallel pair are checked against the walk line graph"
         " (w = y allowed); the distinct-endpoint line graph breaks the labeling there",),
    ),
    "C12": Check("solvers agree with brute-force oracles", _gen_c12, _eval_c12),
    "C13": Check("clique <=> DRED on the reduction, reduction has dbw <= 1", _gen_c13, _eval_c13),
}


def _evaluate_one(args) -> tuple[bool, dict[str, Any]]:
    name, payload, budget = args
    return CHECKS[name].evaluate(payload, budget)


def resolve_suite(suite: Sequence[str] | str | None) -> list[str]:
    if suite is None or suite == "all":
        return list(CHECKS)
    if isinstance(suite, str):
        suite = [s for s in suite.split(",") if s]
    names = []
    for s in suite:
        if s == "all":
            names.extend(CHECKS)
            continue
        key = s.upper()
        if key not in CHECKS:
            raise UnknownCheckError(s)
        names.append(key)
    return list(dict.fromkeys(names))


def run_checks(
    suite: Sequence[str] | str | None = "all",
    budget: Budget | None = None,
    seed: int = 0,
    *,
    threads: int = 1,
) -> Report:
    budget = budget or Budget()
    names = resolve_suite(suite)
    results = []
    for name in names:
        check = CHECKS[name]
        start = time.perf_counter()
        rng = random.Random(f"{seed}:{name}")
        payloads = check.generate(rng, budget)
        jobs = [(name, p, budget) for p in payloads]
        if threads > 1 and len(jobs) > 1:
            from concurrent.futures import ProcessPoolExecutor

            with ProcessPoolExecutor(max_workers=threads) as pool:
                outcomes = list(pool.map(_evaluate_one, jobs, chunksize=max(1, len(jobs) // (4 * threads))))
        else:
            outcomes = [_evaluate_one(j) for j in jobs]
        result = CheckResult(name, check.title, len(payloads), notes=list(check.notes))
        for payload, (ok, detail) in zip(payloads, outcomes):
            if not ok:
                result.failures.append({"payload": payload, "detail": detail})
            elif name == "C9":
                result.records.append(detail)
        if check.summarize is not None:
            result.notes.extend(check.summarize([detail for _, detail in outcomes]))
        result.seconds = time.perf_counter() - start
        results.append(result)
    return Report(seed, budget, results)


def replay(check: str, payload: dict[str, Any], budget: Budget | None = None) -> Outcome:
    """Re-run one saved instance; a dumped counterexample fails again."""
    key = check.upper()
    if key not in CHECKS:
        raise UnknownCheckError(check)
    return CHECKS[key].evaluate(payload, budget or Budget())


def replay_file(path: str | Path, budget: Budget | None = None) -> Outcome:
    doc = json.loads(Path(path).read_text())
    return replay(doc["check"], doc["payload"], budget)
