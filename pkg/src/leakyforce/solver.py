"""Leaky forcing membership, minimum leaky forcing numbers, and the
possible-forces characterisation of leaky forcing sets."""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import chain, combinations, islice
from typing import Iterable, Iterator, Sequence

from .forcing import close_mask, possible_forces
from .graph import Graph
from .leaks import (
    Leak,
    LeakBudget,
    LeakPattern,
    LeakSet,
    enumerate_leak_sets,
    enumerate_placements,
    leak_contribution,
    leak_universe,
)

CHUNK = 64


@dataclass(frozen=True)
class Verdict:
    holds: bool
    leaks: LeakSet | None = None
    stalled: frozenset[int] | None = None
    leaksets_checked: int = 0

    def to_dict(self) -> dict:
        out: dict = {"holds": self.holds}
        if not self.holds:
            out["counterexample"] = {
                "leaks": self.leaks.strings(),
                "stalled": sorted(self.stalled),
            }
        return out


@dataclass(frozen=True)
class NumberResult:
    value: int
    witness: frozenset[int]
    subsets_checked: int = 0
    leaksets_checked: int = 0

    def to_dict(self) -> dict:
        return {"value": self.value, "witness": sorted(self.witness)}


# ----------------------------------------------------------------------------
# leak sources: a universe of leaks plus a sequence of index tuples into it


@dataclass(frozen=True)
class _Source:
    universe: tuple[Leak, ...]
    contribs: tuple[tuple[tuple[int, int], ...], ...]
    ell: int | None = None  # budget mode: all combos of size <= ell
    combos: tuple[tuple[int, ...], ...] = field(default=())  # pattern mode

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        if self.ell is None:
            return iter(self.combos)
        idx = range(len(self.universe))
        return chain.from_iterable(
            combinations(idx, j) for j in range(min(self.ell, len(self.universe)) + 1)
        )

    def leakset(self, combo: tuple[int, ...]) -> LeakSet:
        return LeakSet(self.universe[i] for i in combo)


def _budget_source(g: Graph, budget: LeakBudget) -> _Source:
    universe = tuple(leak_universe(g, budget.kind))
    return _Source(universe, tuple(leak_contribution(x, g.full) for x in universe), ell=budget.ell)


def _pattern_source(g: Graph, pattern: LeakPattern) -> _Source:
    universe = tuple(Leak.arc(u, v) for u, v in g.arcs())
    pos = {x: i for i, x in enumerate(universe)}
    combos = tuple(tuple(pos[x] for x in p.sorted()) for p in enumerate_placements(g, pattern))
    return _Source(universe, tuple(leak_contribution(x, g.full) for x in universe), combos=combos)


def _first_failure(g: Graph, bmask: int, source: _Source) -> tuple[tuple[int, ...] | None, int, int]:
    """Scan leak sets in order; return (failing combo or None, stalled mask, sets checked)."""
    nbr, full, n, contribs = g.nbr, g.full, g.n, source.contribs
    checked = 0
    for combo in source:
        checked += 1
        if combo:
            dis = [0] * n
            for i in combo:
                for v, m in contribs[i]:
                    dis[v] |= m
            fin = close_mask(nbr, bmask, dis)
        else:
            fin = close_mask(nbr, bmask)
        if fin != full:
            return combo, fin, checked
    return None, full, checked


def _verdict(g: Graph, bmask: int, source: _Source) -> Verdict:
    combo, fin, checked = _first_failure(g, bmask, source)
    if combo is None:
        return Verdict(True, leaksets_checked=checked)
    return Verdict(False, source.leakset(combo), g.members(fin), checked)


def check_leaky_set(g: Graph, b: Iterable[int], budget: LeakBudget) -> Verdict:
    """Does ``b`` colour ``g`` under every leak set allowed by ``budget``?

    On failure the counterexample is the first failing leak set in
    enumeration order together with its stalled closure.
    """
    return _verdict(g, g.mask(b), _budget_source(g, budget))


def check_pattern_leaky_set(g: Graph, b: Iterable[int], pattern: LeakPattern) -> Verdict:
    return _verdict(g, g.mask(b), _pattern_source(g, pattern))


# ----------------------------------------------------------------------------
# minimum search


def colex_masks(n: int, k: int) -> Iterator[int]:
    """k-subsets of 0..n-1 as bitmasks in colexicographic (= numeric) order."""
    if k == 0:
        yield 0
        return
    if k > n:
        return
    m = (1 << k) - 1
    limit = 1 << n
    while m < limit:
        yield m
        low = m & -m
        ripple = m + low
        m = ripple | (((m ^ ripple) >> 2) // low)


def _scan_chunk(args) -> list[tuple[bool, int]]:
    g, source, masks = args
    out = []
    for m in masks:
        combo, _, checked = _first_failure(g, m, source)
        out.append((combo is None, checked))
        if combo is None:
            break
    return out


def _chunks(it: Iterator[int], size: int) -> Iterator[list[int]]:
    while True:
        block = list(islice(it, size))
        if not block:
            return
        yield block


def _minimum(g: Graph, source: _Source, start: int, pool: ProcessPoolExecutor | None) -> NumberResult:
    subsets = leaksets = 0
    for k in range(start, g.n + 1):
        chunks = ((g, source, block) for block in _chunks(colex_masks(g.n, k), CHUNK))
        results = pool.map(_scan_chunk, chunks) if pool else map(_scan_chunk, chunks)
        offset = 0
        for block_result in results:
            for i, (holds, checked) in enumerate(block_result):
                subsets += 1
                leaksets += checked
                if holds:
                    witness = next(islice(colex_masks(g.n, k), offset + i, None))
                    return NumberResult(k, g.members(witness), subsets, leaksets)
            offset += CHUNK
    raise AssertionError("unreachable: the full vertex set always passes")


def _run_minimum(g: Graph, source: _Source, workers: int) -> NumberResult:
    zero = _budget_source(g, LeakBudget("vertex", 0))
    if workers > 1:
        with ProcessPoolExecutor(workers) as pool:
            z = _minimum(g, zero, 0, pool)
            res = _minimum(g, source, z.value, pool)
    else:
        z = _minimum(g, zero, 0, None)
        res = _minimum(g, source, z.value, None)
    return NumberResult(
        res.value,
        res.witness,
        z.subsets_checked + res.subsets_checked,
        z.leaksets_checked + res.leaksets_checked,
    )


def leaky_number(g: Graph, budget: LeakBudget, workers: int = 1) -> NumberResult:
    """Minimum size of a set passing :func:`check_leaky_set`.

    Searches sizes upward from the zero forcing number; the witness is the
    first passing set in colex order regardless of ``workers``.
    """
    return _run_minimum(g, _budget_source(g, budget), workers)


def pattern_leaky_number(g: Graph, pattern: LeakPattern, workers: int = 1) -> NumberResult:
    return _run_minimum(g, _pattern_source(g, pattern), workers)


def zero_forcing_number(g: Graph) -> NumberResult:
    return leaky_number(g, LeakBudget("vertex", 0))


# ----------------------------------------------------------------------------
# characterisation


def has_double_forcers(g: Graph, b: Iterable[int], leaks: Sequence[Leak] = ()) -> bool:
    """Every vertex outside ``b`` has possible forcers with two distinct tails."""
    b = frozenset(b)
    tails: dict[int, set[int]] = {}
    for f in possible_forces(g, b, leaks):
        tails.setdefault(f.head, set()).add(f.tail)
    return all(len(tails.get(v, ())) >= 2 for v in range(g.n) if v not in b)


def check_via_characterization(g: Graph, b: Iterable[int], ell: int) -> bool:
    """Leaky membership decided through possible forces instead of leak search.

    ``ell == 0`` is plain zero forcing. Otherwise ``b`` must pass at
    ``ell - 1`` and, for every set of at most ``ell - 1`` vertex leaks, each
    vertex outside ``b`` needs two possible forces from distinct tails.
    """
    if ell < 0:
        raise ValueError(f"ell must be nonnegative, got {ell}")
    b = frozenset(b)
    if ell == 0:
        return close_mask(g.nbr, g.mask(b)) == g.full
    if not check_via_characterization(g, b, ell - 1):
        return False
    return all(
        has_double_forcers(g, b, leaks)
        for leaks in enumerate_leak_sets(g, LeakBudget("vertex", ell - 1))
    )
