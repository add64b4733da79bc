from __future__ import annotations

import json

import pytest

from dbwidth.errors import UnknownCheckError
from dbwidth.io import digraph_from_doc
from dbwidth.verify import CHECKS, Budget, Check, replay, replay_file, resolve_suite, run_checks

SMALL = Budget(instances=15)


def test_budget_parse():
    b = Budget.parse("instances=7, max-edges=5")
    assert b.instances == 7 and b.max_edges == 5 and b.exact_cap == Budget().exact_cap
    assert Budget.parse(None) == Budget()
    with pytest.raises(ValueError):
        Budget.parse("speed=3")


def test_resolve_suite():
    assert resolve_suite("all") == list(CHECKS)
    assert resolve_suite("c3,C4,c3") == ["C3", "C4"]
    with pytest.raises(UnknownCheckError):
        resolve_suite(["C99"])
    with pytest.raises(UnknownCheckError):
        replay("C99", {})


@pytest.mark.parametrize("name", list(CHECKS))
def test_each_check_passes_small(name):
    report = run_checks([name], SMALL, seed=11)
    result = report.results[0]
    assert result.ok, result.failures[:2]
    assert result.instances > 0


def test_report_totals_and_determinism():
    a = run_checks(["C3", "C6"], SMALL, seed=4)
    b = run_checks(["C3", "C6"], SMALL, seed=4)
    doc = a.to_doc(timings=False)
    assert doc == b.to_doc(timings=False)
    assert doc["instances"] == sum(c["instances"] for c in doc["checks"]) == 2 * SMALL.instances
    assert "seconds" not in doc["checks"][0]
    assert a.to_text(False) == b.to_text(False)
    assert a.to_text(False).endswith(f"OK: 2 checks, {2 * SMALL.instances} instances, seed 4\n")


def test_threads_do_not_change_report():
    one = run_checks(["C5"], SMALL, seed=2).to_doc(False)
    two = run_checks(["C5"], SMALL, seed=2, threads=2).to_doc(False)
    assert one == two


def test_c4_and_c9_notes():
    report = run_checks(["C4", "C9"], Budget())
    c4, c9 = report.results
    assert c4.ok and any("literally" in n for n in c4.notes)
    assert c9.ok and [r["n"] for r in c9.records] == [3, 4]
    assert c9.records[0]["exact"] and c9.records[0]["dbw_D"] <= 3


def _three_edge_failure(payload, budget):
    d = digraph_from_doc(payload["graph"])
    return d.m < 3, {"edges": d.m}


def test_dumped_counterexamples_replay(tmp_path, monkeypatch):
    # a deliberately false claim, so the run has failures to dump
    monkeypatch.setitem(CHECKS, "CX", Check("fewer than three edges", CHECKS["C3"].generate, _three_edge_failure))
    report = run_checks(["CX"], SMALL, seed=5)
    result = report.results[0]
    assert not report.ok and result.failures
    paths = report.save_counterexamples(tmp_path)
    assert len(paths) == len(result.failures)
    for path, fail in zip(paths, result.failures):
        doc = json.loads(path.read_text())
        assert doc["check"] == "CX"
        ok, detail = replay_file(path)
        assert not ok and detail == fail["detail"]
        assert replay_file(path) == (ok, detail)
