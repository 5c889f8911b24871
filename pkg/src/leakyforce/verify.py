"""Brute-force oracles and the theorem-suite runner.

The suite checks, instance by instance, the statements relating vertex, edge,
specified and mixed leaky forcing; it proves nothing universally.
"""

from __future__ import annotations

import random
import time
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Mapping

from .forcing import (
    Force,
    close_mask,
    is_forcing_process,
    possible_forces,
    random_process,
    splice_processes,
)
from .graph import Graph, complete_prism, emit_edge_list, emit_graph6, iter_bits, popcount
from .leaks import (
    KINDS,
    PATTERN_LIBRARY,
    Leak,
    LeakBudget,
    LeakPattern,
    LeakSet,
    disabled_table,
    independence_number,
    leak_contribution,
    leak_universe,
    split_by_touch,
    touch_mask,
)
from .solver import (
    _budget_source,
    _first_failure,
    _pattern_source,
    check_via_characterization,
    leaky_number,
)

DEFAULT_STATE_CAP = 1 << 16

CHECKS = (
    "flavor_equivalence",
    "flavor_numbers",
    "characterization",
    "failure_lemma_vertex",
    "failure_lemma_edge",
    "failure_lemma_specified",
    "failure_lemma_mixed",
    "monotonicity",
    "switch_lemma",
    "independence_bound",
    "independence_bound_numbers",
    "single_independent_equivalence",
    "possible_forces_oracle",
)


class ResourceError(RuntimeError):
    """An exhaustive oracle exceeded its state cap."""


def graph_id(g: Graph) -> str:
    return emit_graph6(g) if g.n <= 62 else emit_edge_list(g)


# ----------------------------------------------------------------------------
# oracle


def possible_forces_oracle(
    g: Graph,
    b: Iterable[int],
    leaks: Iterable[Leak] | None = None,
    complete: bool = True,
    state_cap: int = DEFAULT_STATE_CAP,
) -> frozenset[Force]:
    """Possible forces by exploring every reachable blue set.

    Transitions are single valid, non-disabled forces. With ``complete`` only
    labels on transitions into states from which the all-blue state is still
    reachable are kept, i.e. forces belonging to a process that colours the
    whole graph.
    """
    dis = disabled_table(g, leaks)
    start = g.mask(b)
    edges: dict[int, list[tuple[Force, int]]] = {}
    queue = deque([start])
    edges[start] = []
    while queue:
        s = queue.popleft()
        out = edges[s]
        for u in iter_bits(s):
            w = g.nbr[u] & ~s
            if w and not w & (w - 1) and not w & dis[u]:
                t = s | w
                out.append((Force(u, w.bit_length() - 1), t))
                if t not in edges:
                    if len(edges) >= state_cap:
                        raise ResourceError(f"oracle state cap {state_cap} exceeded")
                    edges[t] = []
                    queue.append(t)
    if not complete:
        return frozenset(f for out in edges.values() for f, _ in out)
    if g.full not in edges:
        return frozenset()
    # every transition adds a vertex, so descending popcount is a reverse topological order
    good = {g.full}
    for s in sorted(edges, key=popcount, reverse=True):
        if any(t in good for _, t in edges[s]):
            good.add(s)
    return frozenset(f for s in good for f, t in edges[s] if t in good)


def oracle_mismatches(
    g: Graph, leak_sets: Iterable[LeakSet], sets: Iterable[Iterable[int]] | None = None
) -> list[dict]:
    """Compare :func:`possible_forces` with the oracle in both modes."""
    bad = []
    leak_sets = list(leak_sets)
    sets = [frozenset(iter_bits(m)) for m in range(1 << g.n)] if sets is None else sets
    for b in sets:
        for leaks in leak_sets:
            for complete in (True, False):
                fast = possible_forces(g, b, leaks, complete=complete)
                slow = possible_forces_oracle(g, b, leaks, complete=complete)
                if fast != slow:
                    bad.append(_violation(
                        "possible_forces_oracle", g, b=b, leaks=leaks,
                        details=f"complete={complete} fast={_fs(fast)} oracle={_fs(slow)}",
                    ))
    return bad


def _fs(forces) -> list[str]:
    return sorted(str(f) for f in forces)


def _violation(check: str, g: Graph, b=None, leaks=None, ell=None, kind=None, details="") -> dict:
    out = {"check": check, "graph": graph_id(g)}
    if b is not None:
        out["set"] = sorted(b)
    if leaks is not None:
        out["leaks"] = LeakSet(leaks).strings()
    if ell is not None:
        out["ell"] = ell
    if kind is not None:
        out["kind"] = kind
    out["details"] = details
    return out


# ----------------------------------------------------------------------------
# switch lemma sampling


def sample_splices(g: Graph, samples: int, rng: random.Random) -> tuple[int, list[dict]]:
    """Splice random pairs of complete processes at random obtained sets.

    Blue sets are drawn among sets that colour the graph under a random leak
    set (sometimes empty). Returns (instances checked, violations).
    """
    universe = leak_universe(g, "mixed")
    forcing_sets = [m for m in range(1 << g.n) if close_mask(g.nbr, m) == g.full]
    checked = 0
    bad = []
    for _ in range(samples):
        bmask = rng.choice(forcing_sets)
        leaks = LeakSet()
        if universe and rng.random() < 0.5:
            cand = LeakSet([rng.choice(universe)])
            if close_mask(g.nbr, bmask, disabled_table(g, cand)) == g.full:
                leaks = cand
        b = g.members(bmask)
        f = random_process(g, b, leaks, rng)
        f2 = random_process(g, b, leaks, rng)
        cut = rng.randint(0, len(f))
        b_prime = b | {x.head for x in f[:cut]}
        checked += 1
        try:
            spliced = splice_processes(g, b, f, f2, b_prime, leaks)
            ok = is_forcing_process(g, b, leaks, spliced)
        except (AssertionError, ValueError) as exc:
            ok, spliced = False, [str(exc)]
        if not ok:
            bad.append(_violation(
                "switch_lemma", g, b=b, leaks=leaks,
                details=f"F={_fs(f)} F'={_fs(f2)} B'={sorted(b_prime)} result={[str(x) for x in spliced]}",
            ))
    return checked, bad


# ----------------------------------------------------------------------------
# per-graph checks


@dataclass
class SuiteReport:
    checks: dict[str, list[int]] = field(default_factory=lambda: {c: [0, 0] for c in CHECKS})
    violations: list[dict] = field(default_factory=list)
    notes: list[dict] = field(default_factory=list)
    resource_errors: list[dict] = field(default_factory=list)
    graphs: int = 0
    wall_clock_ms: float = 0.0

    def tally(self, check: str, ok: bool, n: int = 1) -> None:
        self.checks[check][0 if ok else 1] += n

    def merge(self, other: SuiteReport) -> None:
        for c, (p, f) in other.checks.items():
            self.checks[c][0] += p
            self.checks[c][1] += f
        self.violations += other.violations
        self.notes += other.notes
        self.resource_errors += other.resource_errors
        self.graphs += other.graphs

    @property
    def total_checks(self) -> int:
        return sum(p + f for p, f in self.checks.values())

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "graphs": self.graphs,
            "total_checks": self.total_checks,
            "checks": {c: {"passed": p, "failed": f} for c, (p, f) in self.checks.items()},
            "violations": sorted(self.violations, key=_sort_key),
            "notes": self.notes,
            "resource_errors": self.resource_errors,
        }


def _sort_key(v: Mapping) -> tuple:
    return (v["check"], v["graph"], v.get("ell", -1), v.get("kind", ""), v.get("set", []),
            v.get("leaks", []), v["details"])


@dataclass(frozen=True)
class SuiteConfig:
    ell_max: int
    seed: int = 0
    splice_samples: int = 20
    oracle_samples: int = 20
    patterns: tuple[tuple[str, LeakPattern], ...] = tuple(PATTERN_LIBRARY.items())


def _leaky_table(g: Graph, ell_max: int) -> dict[tuple[str, int], list[bool]]:
    """holds[(kind, ell)][B mask] for every flavour and ell <= ell_max + 1 (vertex only above)."""
    table = {}
    zero = _budget_source(g, LeakBudget("vertex", 0))
    base = [_first_failure(g, m, zero)[0] is None for m in range(1 << g.n)]
    for kind in KINDS:
        table[kind, 0] = base
        prev = base
        for ell in range(1, ell_max + 1):
            source = _budget_source(g, LeakBudget(kind, ell))
            # budget ell includes every leak set of budget ell-1
            cur = [p and _first_failure(g, m, source)[0] is None for m, p in enumerate(prev)]
            table[kind, ell] = prev = cur
    return table


def _min_size(holds: list[bool]) -> int:
    return min(popcount(m) for m, h in enumerate(holds) if h)


def _failure_lemmas(g: Graph, table, ell_max: int, report: SuiteReport) -> None:
    for kind in KINDS:
        check = f"failure_lemma_{kind}"
        universe = leak_universe(g, kind)
        contribs = [leak_contribution(x, g.full) for x in universe]
        touch = [touch_mask(x) for x in universe]
        for ell in range(1, ell_max + 1):
            sets = [m for m, h in enumerate(table[kind, ell - 1]) if h]
            for k in (ell, ell + 1):
                passed = 0
                for combo in combinations(range(len(universe)), k):
                    dis = [0] * g.n
                    for i in combo:
                        for v, m in contribs[i]:
                            dis[v] |= m
                    for bmask in sets:
                        fin = close_mask(g.nbr, bmask, dis)
                        untouched = sum(1 for i in combo if not touch[i] & fin)
                        if untouched <= k - ell:
                            passed += 1
                            continue
                        leaks = LeakSet(universe[i] for i in combo)
                        # re-derive through the public split for the record
                        free, _ = split_by_touch(leaks, g.members(fin))
                        report.tally(check, False)
                        report.violations.append(_violation(
                            check, g, b=g.members(bmask), leaks=leaks, ell=ell, kind=kind,
                            details=f"k={k} untouched={len(free)} > {k - ell}",
                        ))
                report.tally(check, True, passed)


def _pattern_checks(g: Graph, table, cfg: SuiteConfig, report: SuiteReport) -> None:
    spec_numbers: dict[int, int] = {}
    for name, pattern in cfg.patterns:
        ind = independence_number(pattern.arcs)
        source = _pattern_source(g, pattern)
        holds = [_first_failure(g, m, source)[0] is None for m in range(1 << g.n)]
        spec_source = None
        if ("specified", ind) in table:
            spec_holds = table["specified", ind]
        else:
            spec_holds = None
            spec_source = _budget_source(g, LeakBudget("specified", ind))
        for m, h in enumerate(holds):
            if h:
                report.tally("independence_bound", True)
                continue
            # specified I(P)-leaky must imply P-leaky
            s_h = spec_holds[m] if spec_holds is not None else _first_failure(g, m, spec_source)[0] is None
            report.tally("independence_bound", not s_h)
            if s_h:
                report.violations.append(_violation(
                    "independence_bound", g, b=g.members(m),
                    details=f"pattern={name} specified {ind}-leaky but not pattern-leaky",
                ))
        if ind not in spec_numbers:
            spec_numbers[ind] = (
                _min_size(spec_holds) if spec_holds is not None else leaky_number(g, LeakBudget("specified", ind)).value
            )
        zp = _min_size(holds)
        report.tally("independence_bound_numbers", zp <= spec_numbers[ind])
        if zp > spec_numbers[ind]:
            report.violations.append(_violation(
                "independence_bound_numbers", g,
                details=f"pattern={name} Z_P={zp} > Z^s_({ind})={spec_numbers[ind]}",
            ))
        if ind == 1 and ("specified", 1) in table:
            for m, h in enumerate(holds):
                same = h == table["specified", 1][m]
                report.tally("single_independent_equivalence", same)
                if not same:
                    report.violations.append(_violation(
                        "single_independent_equivalence", g, b=g.members(m),
                        details=f"pattern={name} pattern-leaky={h} specified-1-leaky={not h}",
                    ))


def _prism_note(g: Graph) -> dict | None:
    if g.n < 6 or g.n % 2 or g != complete_prism(g.n // 2):
        return None
    k = g.n // 2
    l1 = LeakPattern((i, i + k) for i in range(k))
    l2 = LeakPattern((i, k - 1) for i in range(k - 1))
    x_clique = range(k)
    out = {"note": "complete prism example", "graph": graph_id(g), "set": list(x_clique)}
    for label, pat in (("matching_pattern", l1), ("in_star_pattern", l2)):
        source = _pattern_source(g, pat)
        combo, fin, _ = _first_failure(g, g.mask(x_clique), source)
        out[label] = {
            "arcs": [f"a:{t}>{h}" for t, h in pat.sorted_arcs()],
            "independence_number": independence_number(pat.arcs),
            "holds": combo is None,
        }
        if combo is not None:
            out[label]["counterexample"] = source.leakset(combo).strings()
            out[label]["stalled"] = sorted(g.members(fin))
    return out


def check_graph(g: Graph, cfg: SuiteConfig) -> SuiteReport:
    report = SuiteReport(graphs=1)
    rng = random.Random(f"{cfg.seed}:{graph_id(g)}")
    table = _leaky_table(g, cfg.ell_max)
    nsets = 1 << g.n

    for ell in range(1, cfg.ell_max + 1):
        # (a) the four flavours agree set by set and in their minima
        for m in range(nsets):
            verdicts = {kind: table[kind, ell][m] for kind in KINDS}
            agree = len(set(verdicts.values())) == 1
            report.tally("flavor_equivalence", agree)
            if not agree:
                report.violations.append(_violation(
                    "flavor_equivalence", g, b=g.members(m), ell=ell, details=str(verdicts)))
        numbers = {kind: _min_size(table[kind, ell]) for kind in KINDS}
        report.tally("flavor_numbers", len(set(numbers.values())) == 1)
        if len(set(numbers.values())) != 1:
            report.violations.append(_violation("flavor_numbers", g, ell=ell, details=str(numbers)))
        # (b) characterisation
        for m in range(nsets):
            b = g.members(m)
            char = check_via_characterization(g, b, ell)
            report.tally("characterization", char == table["vertex", ell][m])
            if char != table["vertex", ell][m]:
                report.violations.append(_violation(
                    "characterization", g, b=b, ell=ell,
                    details=f"characterization={char} brute_force={table['vertex', ell][m]}"))
    for ell in range(cfg.ell_max):
        lo, hi = _min_size(table["vertex", ell]), _min_size(table["vertex", ell + 1])
        report.tally("monotonicity", lo <= hi)
        if lo > hi:
            report.violations.append(_violation(
                "monotonicity", g, ell=ell, details=f"Z_({ell})={lo} > Z_({ell + 1})={hi}"))

    # (c) failure lemmas
    _failure_lemmas(g, table, cfg.ell_max, report)

    # (d) switch lemma
    checked, bad = sample_splices(g, cfg.splice_samples, rng)
    report.tally("switch_lemma", True, checked - len(bad))
    report.tally("switch_lemma", False, len(bad))
    report.violations += bad

    # (e) independent leaks
    _pattern_checks(g, table, cfg, report)
    note = _prism_note(g)
    if note:
        report.notes.append(note)

    # (f) possible forces against the oracle
    universe = leak_universe(g, "mixed")
    for _ in range(cfg.oracle_samples):
        b = g.members(rng.randrange(nsets))
        leaks = LeakSet(rng.sample(universe, min(len(universe), rng.randint(0, 2))))
        try:
            bad = oracle_mismatches(g, [leaks], [b])
        except ResourceError as exc:
            report.resource_errors.append(_violation(
                "possible_forces_oracle", g, b=b, leaks=leaks, details=str(exc)))
            continue
        report.tally("possible_forces_oracle", not bad)
        report.violations += bad
    return report


def _check_graph_job(args) -> SuiteReport:
    return check_graph(*args)


def run_theorem_suite(
    corpus: Iterable[Graph], ell_max: int, workers: int = 1, **options
) -> SuiteReport:
    """Run every check on every graph of ``corpus`` for leak budgets up to ``ell_max``.

    ``options`` are forwarded to :class:`SuiteConfig` (seed, splice_samples,
    oracle_samples, patterns). Per-graph randomness is seeded from the seed and
    the graph itself, so reports do not depend on ``workers``.
    """
    if ell_max < 1:
        raise ValueError(f"ell_max must be at least 1, got {ell_max}")
    cfg = SuiteConfig(ell_max=ell_max, **options)
    start = time.perf_counter()
    jobs = [(g, cfg) for g in corpus]
    report = SuiteReport()
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(workers) as pool:
            parts = list(pool.map(_check_graph_job, jobs))
    else:
        parts = [_check_graph_job(j) for j in jobs]
    for part in parts:
        report.merge(part)
    report.wall_clock_ms = (time.perf_counter() - start) * 1000
    return report
