import random
from pathlib import Path

import pytest

from leakyforce.forcing import Force as F, closure
from leakyforce.graph import Graph, complete, path, read_corpus
from leakyforce.leaks import Leak, LeakSet, leak_universe
from leakyforce.verify import (
    CHECKS,
    ResourceError,
    SuiteReport,
    oracle_mismatches,
    possible_forces_oracle,
    run_theorem_suite,
    sample_splices,
)

FIXTURES = Path(__file__).parent / "fixtures"


def test_oracle_examples(p3, prism):
    assert possible_forces_oracle(p3, {0, 2}, LeakSet()) == {F(0, 1), F(2, 1)}
    assert possible_forces_oracle(p3, {0}, LeakSet()) == {F(0, 1), F(1, 2)}
    assert len(possible_forces_oracle(prism, {0, 1, 2}, LeakSet())) == 9


def test_oracle_modes_differ_only_when_incomplete(p3):
    leaks = LeakSet([Leak.vertex(1)])
    assert possible_forces_oracle(p3, {0}, leaks) == set()
    assert possible_forces_oracle(p3, {0}, leaks, complete=False) == {F(0, 1)}


def test_oracle_state_cap():
    with pytest.raises(ResourceError):
        possible_forces_oracle(path(12), {0}, LeakSet(), state_cap=4)


def test_oracle_mismatches_none_on_small_graph(prism):
    sets = [frozenset(prism.members(m)) for m in range(0, 64, 5)]
    leak_sets = [LeakSet()] + [LeakSet([x]) for x in leak_universe(prism, "mixed")[:6]]
    assert oracle_mismatches(prism, leak_sets, sets) == []


def test_sample_splices_clean(prism):
    checked, bad = sample_splices(prism, 30, random.Random(1))
    assert checked > 0 and bad == []


def test_suite_on_order_three():
    corpus = read_corpus((FIXTURES / "order3.g6").read_text())
    report = run_theorem_suite(corpus, 2)
    assert report.graphs == 2
    assert report.violations == [] and report.resource_errors == []
    assert report.total_checks > 0
    assert set(report.checks) == set(CHECKS)


def test_suite_on_prism_reports_note(prism):
    report = run_theorem_suite([prism], 2)
    assert report.ok
    (note,) = report.notes
    assert note["set"] == [0, 1, 2]
    assert note["matching_pattern"]["holds"] is False
    assert note["matching_pattern"]["independence_number"] == 3
    assert note["matching_pattern"]["counterexample"] == ["a:0>3", "a:1>4"]
    assert note["in_star_pattern"]["holds"] is True


def test_empty_corpus():
    report = run_theorem_suite([], 2)
    assert report.total_checks == 0 and report.graphs == 0 and report.ok


def test_ell_max_must_be_positive():
    with pytest.raises(ValueError):
        run_theorem_suite([path(3)], 0)


def test_suite_deterministic():
    corpus = [path(4), complete(4), Graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)])]
    a = run_theorem_suite(corpus, 2, seed=3).to_dict()
    b = run_theorem_suite(corpus, 2, seed=3).to_dict()
    c = run_theorem_suite(list(reversed(corpus)), 2, seed=3).to_dict()
    assert a == b
    assert a["checks"] == c["checks"]


def test_report_merge():
    r = SuiteReport()
    r.tally("monotonicity", True, 3)
    s = SuiteReport()
    s.tally("monotonicity", False)
    s.violations.append({"check": "monotonicity", "graph": "x", "details": ""})
    r.merge(s)
    assert r.checks["monotonicity"] == [3, 1]
    assert not r.ok and r.total_checks == 4


def test_flagged_violation_reverifies(prism):
    # a deliberately stalled instance yields a certificate the closure confirms
    leaks = LeakSet([Leak.arc(0, 3), Leak.arc(1, 4)])
    res = closure(prism, {0, 1, 2}, leaks)
    assert prism.vertices - res.final == {3, 4}
