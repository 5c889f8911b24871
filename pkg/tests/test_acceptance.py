"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

The corpus-wide criteria share a single suite run over every connected graph
on at most six vertices (a few minutes on one core).
"""

import json
import random
from pathlib import Path

import networkx as nx
import pytest

from leakyforce.cli import run
from leakyforce.forcing import closure, is_zero_forcing_set, possible_forces
from leakyforce.graph import Graph, complete_prism, paw, read_corpus
from leakyforce.leaks import Leak, LeakBudget, LeakPattern, LeakSet, independence_number, leak_universe
from leakyforce.solver import check_leaky_set, check_pattern_leaky_set, leaky_number, pattern_leaky_number
from leakyforce.verify import oracle_mismatches, possible_forces_oracle, run_theorem_suite

FIXTURES = Path(__file__).parent / "fixtures"
CORPUS_FILE = FIXTURES / "connected_le6.g6"
SPLICES_PER_GRAPH = 70


@pytest.fixture(scope="module")
def suite(corpus):
    return run_theorem_suite(corpus, 2, seed=0, splice_samples=SPLICES_PER_GRAPH, oracle_samples=0)


def _failed(report, *checks):
    return sum(report.checks[c][1] for c in checks)


def _checked(report, *checks):
    return sum(sum(report.checks[c]) for c in checks)


def test_corpus_is_every_connected_graph_up_to_six(corpus):
    ours = [nx.Graph(g.edges()) if g.edges() else nx.empty_graph(g.n) for g in corpus]
    reference = [h for h in nx.graph_atlas_g()[1:] if h.number_of_nodes() <= 6 and nx.is_connected(h)]
    assert len(corpus) == len(reference) == 143
    assert all(nx.is_connected(h) for h in ours)
    for h in reference:
        assert sum(nx.is_isomorphic(h, x) for x in ours) == 1


def test_criterion_1_flavor_equivalence(suite, criterion):
    checks = ("flavor_equivalence", "flavor_numbers")
    ok = suite.graphs == 143 and _failed(suite, *checks) == 0 and _checked(suite, *checks) > 0
    assert criterion(1, "four leak flavors agree on every set and number, ell in {1,2}", ok,
                     f"{_checked(suite, *checks)} checks, {_failed(suite, *checks)} violations")


def test_criterion_2_characterization(suite, criterion):
    n, bad = _checked(suite, "characterization"), _failed(suite, "characterization")
    assert criterion(2, "characterization matches brute-force membership", n > 0 and bad == 0,
                     f"{n} checks, {bad} violations")


def test_criterion_3_failure_lemmas(suite, criterion):
    checks = [f"failure_lemma_{k}" for k in ("vertex", "edge", "specified", "mixed")]
    n, bad = _checked(suite, *checks), _failed(suite, *checks)
    assert criterion(3, "untouched leaks <= k - ell for k in {ell, ell+1}", n > 0 and bad == 0,
                     f"{n} checks, {bad} violations")


def test_criterion_4_splices(suite, criterion):
    n, bad = _checked(suite, "switch_lemma"), _failed(suite, "switch_lemma")
    assert criterion(4, "randomized splices validate", n >= 10_000 and bad == 0, f"{n} splices, {bad} violations")


def _random_instance(rng):
    n = rng.randint(1, 9)
    p = rng.random()
    g = Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p])
    b = [v for v in range(n) if rng.random() < 0.4]
    universe = leak_universe(g, "mixed")
    leaks = LeakSet(rng.sample(universe, min(len(universe), rng.randint(0, 3))))
    return g, b, leaks


def test_criterion_5_possible_forces_oracle(corpus, criterion):
    exhaustive = 0
    bad = []
    for g in corpus:
        leak_sets = [LeakSet()] + [LeakSet([x]) for x in leak_universe(g, "mixed")]
        bad += oracle_mismatches(g, leak_sets)
        exhaustive += len(leak_sets) << g.n
    rng = random.Random(2024)
    random_count = 1000
    for _ in range(random_count):
        g, b, leaks = _random_instance(rng)
        for complete in (True, False):
            if possible_forces(g, b, leaks, complete) != possible_forces_oracle(g, b, leaks, complete):
                bad.append((g.edges(), b, leaks.strings(), complete))
    assert criterion(5, "blocked closure equals the state-space oracle", not bad,
                     f"{exhaustive} exhaustive + {random_count} random instances, {len(bad)} mismatches")


def test_criterion_6_prism(criterion):
    g = complete_prism(3)
    b = {0, 1, 2}
    v = check_leaky_set(g, b, LeakBudget("specified", 2))
    white = g.vertices - v.stalled if v.stalled is not None else None
    stalled_ok = not v.holds and white == {3, 4}
    # re-verify the certificate
    stalled_ok = stalled_ok and closure(g, b, v.leaks).final == v.stalled

    l1 = LeakPattern([(0, 3), (1, 4), (2, 5)])
    l2 = LeakPattern([(0, 2), (1, 2)])
    bounds = {}
    for name, pat in (("matching", l1), ("in_star", l2)):
        zp = pattern_leaky_number(g, pat).value
        zs = leaky_number(g, LeakBudget("specified", independence_number(pat.arcs))).value
        bounds[name] = (zp, zs)
    bound_ok = all(zp <= zs for zp, zs in bounds.values())

    # regression lock for the matching pattern on the x-clique
    p = check_pattern_leaky_set(g, b, l1)
    lock_ok = (not p.holds and p.leaks == LeakSet([Leak.arc(0, 3), Leak.arc(1, 4)])
               and p.stalled == {0, 1, 2, 5} and check_pattern_leaky_set(g, b, l2).holds)

    ok = stalled_ok and bound_ok and lock_ok
    assert criterion(6, "prism: specified-2 stalls {3,4}; pattern bound; matching verdict locked", ok,
                     f"white={sorted(white or [])} bounds={bounds} matching_holds={p.holds}")


def test_criterion_7_paw(criterion):
    g = paw()
    z0 = leaky_number(g, LeakBudget("vertex", 0)).value
    z1 = leaky_number(g, LeakBudget("vertex", 1)).value
    ok = is_zero_forcing_set(g, {1, 3}) and z0 == 2 and z1 == 3
    assert criterion(7, "paw: {1,3} forces, Z=2, Z_(1)=3", ok, f"Z={z0} Z_(1)={z1}")


def test_criterion_8_monotonicity(suite, criterion):
    n, bad = _checked(suite, "monotonicity"), _failed(suite, "monotonicity")
    assert criterion(8, "Z_(ell) <= Z_(ell+1) for ell in {0,1}", n == 2 * 143 and bad == 0,
                     f"{n} checks, {bad} violations")


def _stable(argv):
    code, doc, err = run(argv)
    assert code == 0, err
    doc["stats"].pop("runtime_ms")
    return json.dumps(doc, indent=2)


def test_criterion_9_determinism(tmp_path, criterion):
    small = tmp_path / "small.g6"
    small.write_text("\n".join(CORPUS_FILE.read_text().splitlines()[:40]) + "\nE{Sw\n")
    assert len(read_corpus(small.read_text())) >= 20
    commands = [
        ["verify", "--corpus", str(small), "--ell-max", "2", "--seed", "5"],
        ["number", "--g6", "E{Sw", "--ell", "2", "--kind", "mixed"],
        ["number", "--g6", "E{Sw", "--ell", "1", "--kind", "vertex"],
    ]
    outputs = {}
    for argv in commands:
        outputs[argv[0] + " " + argv[-1]] = {_stable(argv + ["--workers", str(w)]) for w in (1, 4, 8, 1)}
    ok = all(len(v) == 1 for v in outputs.values())
    assert criterion(9, "verify and number JSON identical under 1, 4 and 8 workers", ok,
                     f"{len(commands)} commands x 4 runs")
