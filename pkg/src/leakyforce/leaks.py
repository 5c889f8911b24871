"""Leaks (vertex, edge, arc), leak budgets, enumeration of adversarial leak
sets, and arc-pattern placements."""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Hashable, Iterable, Iterator

from .graph import Graph, GraphError

VERTEX, EDGE, ARC = "vertex", "edge", "arc"
_KIND_RANK = {VERTEX: 0, EDGE: 1, ARC: 2}

KINDS = ("vertex", "edge", "specified", "mixed")


class LeakError(ValueError):
    pass


class LeakParseError(LeakError):
    def __init__(self, message: str, column: int):
        super().__init__(f"column {column}: {message}")
        self.column = column


@dataclass(frozen=True)
class Leak:
    """A disabled fault. ``b`` is unused (-1) for vertex leaks; edges keep ``a < b``."""

    kind: str
    a: int
    b: int = -1

    def __post_init__(self):
        if self.kind not in _KIND_RANK:
            raise LeakError(f"unknown leak kind {self.kind!r}")
        if self.kind != VERTEX and self.a == self.b:
            raise LeakError(f"{self.kind} leak with identical endpoints {self.a}")
        if self.kind == EDGE and self.a > self.b:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)

    @classmethod
    def vertex(cls, v: int) -> Leak:
        return cls(VERTEX, v)

    @classmethod
    def edge(cls, u: int, v: int) -> Leak:
        return cls(EDGE, u, v)

    @classmethod
    def arc(cls, tail: int, head: int) -> Leak:
        return cls(ARC, tail, head)

    @property
    def sort_key(self) -> tuple[int, int, int]:
        return (_KIND_RANK[self.kind], self.a, self.b)

    @property
    def endpoints(self) -> tuple[int, ...]:
        return (self.a,) if self.kind == VERTEX else (self.a, self.b)

    def __str__(self) -> str:
        if self.kind == VERTEX:
            return f"v:{self.a}"
        if self.kind == EDGE:
            return f"e:{self.a}-{self.b}"
        return f"a:{self.a}>{self.b}"


class LeakSet(frozenset):
    """Finite set of :class:`Leak` with views by kind."""

    def __new__(cls, leaks: Iterable[Leak] = ()):
        return super().__new__(cls, leaks)

    @property
    def vertex_leaks(self) -> list[Leak]:
        return sorted((x for x in self if x.kind == VERTEX), key=_key)

    @property
    def edge_leaks(self) -> list[Leak]:
        return sorted((x for x in self if x.kind == EDGE), key=_key)

    @property
    def arcs(self) -> list[Leak]:
        return sorted((x for x in self if x.kind == ARC), key=_key)

    def sorted(self) -> list[Leak]:
        return sorted(self, key=_key)

    def strings(self) -> list[str]:
        return [str(x) for x in self.sorted()]

    def __str__(self) -> str:
        return ",".join(self.strings())

    def __repr__(self) -> str:
        return f"LeakSet({{{str(self)}}})"


def _key(leak: Leak) -> tuple[int, int, int]:
    return leak.sort_key


def as_leakset(leaks: Iterable[Leak] | None) -> LeakSet:
    if leaks is None:
        return LeakSet()
    return leaks if isinstance(leaks, LeakSet) else LeakSet(leaks)


def leak_contribution(leak: Leak, full: int) -> tuple[tuple[int, int], ...]:
    """(vertex, blocked-head mask) pairs the leak adds to the disabled table."""
    if leak.kind == VERTEX:
        return ((leak.a, full),)
    if leak.kind == EDGE:
        return ((leak.a, 1 << leak.b), (leak.b, 1 << leak.a))
    return ((leak.a, 1 << leak.b),)


def disabled_table(g: Graph, leaks: Iterable[Leak] | None) -> list[int]:
    """Per-vertex mask of heads that vertex is forbidden to force."""
    dis = [0] * g.n
    for leak in leaks or ():
        for v in leak.endpoints:
            if not 0 <= v < g.n:
                raise GraphError(f"leak {leak} references vertex {v} outside 0..{g.n - 1}")
        for v, m in leak_contribution(leak, g.full):
            dis[v] |= m
    return dis


def disables(leaks: Iterable[Leak], tail: int, head: int) -> bool:
    for leak in leaks:
        if leak.kind == VERTEX:
            if leak.a == tail:
                return True
        elif leak.kind == EDGE:
            if {leak.a, leak.b} == {tail, head}:
                return True
        elif leak.a == tail and leak.b == head:
            return True
    return False


# ----------------------------------------------------------------------------
# budgets and enumeration


@dataclass(frozen=True)
class LeakBudget:
    kind: str
    ell: int

    def __post_init__(self):
        if self.kind not in KINDS:
            raise LeakError(f"unknown budget kind {self.kind!r}; choose from {KINDS}")
        if self.ell < 0:
            raise LeakError(f"leak budget must be nonnegative, got {self.ell}")


def leak_universe(g: Graph, kind: str) -> list[Leak]:
    """All candidate leaks of a flavour, in enumeration order."""
    verts = [Leak.vertex(v) for v in range(g.n)]
    edges = [Leak.edge(u, v) for u, v in g.edges()]
    arcs = [Leak.arc(u, v) for u, v in g.arcs()]
    if kind == "vertex":
        return verts
    if kind == "edge":
        return edges
    if kind == "specified":
        return arcs
    if kind == "mixed":
        return verts + edges + arcs
    raise LeakError(f"unknown budget kind {kind!r}")


def enumerate_leak_sets(g: Graph, budget: LeakBudget) -> Iterator[LeakSet]:
    """Every leak set of the budget's flavour with at most ``ell`` members,
    size-ascending then lexicographic in universe order."""
    universe = leak_universe(g, budget.kind)
    for j in range(min(budget.ell, len(universe)) + 1):
        for combo in combinations(universe, j):
            yield LeakSet(combo)


def touch_mask(leak: Leak) -> int:
    """Vertices whose blueness touches the leak: its endpoints for edges, else ``a``."""
    if leak.kind == EDGE:
        return 1 << leak.a | 1 << leak.b
    return 1 << leak.a


def split_by_touch(leaks: Iterable[Leak], s: Iterable[int]) -> tuple[LeakSet, LeakSet]:
    """Split into (untouched, touched) relative to the vertex set ``s``.

    A vertex leak is touched when it lies in ``s``, an edge leak when either
    endpoint does, an arc when its tail does (the head is irrelevant).
    """
    smask = 0
    for v in s:
        smask |= 1 << v
    untouched, touched = [], []
    for leak in leaks:
        (touched if touch_mask(leak) & smask else untouched).append(leak)
    return LeakSet(untouched), LeakSet(touched)


# ----------------------------------------------------------------------------
# arcs: tails, heads, independence


def _arc_pairs(arcs: Iterable) -> list[tuple[Hashable, Hashable]]:
    out = []
    for x in arcs:
        if isinstance(x, Leak):
            if x.kind != ARC:
                raise LeakError(f"expected arcs only, got {x}")
            out.append((x.a, x.b))
        else:
            t, h = x
            out.append((t, h))
    return out


def tails_heads(arcs: Iterable) -> tuple[frozenset, frozenset]:
    pairs = _arc_pairs(arcs)
    return frozenset(t for t, _ in pairs), frozenset(h for _, h in pairs)


def is_independent(arcs: Iterable) -> bool:
    pairs = _arc_pairs(arcs)
    tails, heads = tails_heads(pairs)
    return len(tails) == len(set(pairs)) and not tails & heads


def independence_number(arcs: Iterable) -> int:
    """Size of the largest independent sub-collection (exhaustive, largest first)."""
    pairs = sorted(set(_arc_pairs(arcs)), key=repr)
    if len(pairs) > 24:
        raise LeakError(f"independence_number is exhaustive; {len(pairs)} arcs is too many")
    for k in range(len(pairs), 0, -1):
        if any(is_independent(sub) for sub in combinations(pairs, k)):
            return k
    return 0


def active_leaks(g: Graph, s: Iterable[int], arcs: Iterable[Leak]) -> LeakSet:
    """Arcs whose tail is in ``s`` and whose head is the tail's unique neighbour outside ``s``."""
    smask = g.mask(s)
    out = []
    for leak in arcs:
        if leak.kind != ARC:
            raise LeakError(f"active_leaks takes arcs only, got {leak}")
        if smask >> leak.a & 1 and g.nbr[leak.a] & ~smask == 1 << leak.b:
            out.append(leak)
    return LeakSet(out)


# ----------------------------------------------------------------------------
# patterns


@dataclass(frozen=True)
class LeakPattern:
    """A small abstract digraph; nodes are arbitrary hashable labels."""

    arcs: frozenset

    def __init__(self, arcs: Iterable[tuple[Hashable, Hashable]]):
        arcs = frozenset((t, h) for t, h in arcs)
        for t, h in arcs:
            if t == h:
                raise LeakError(f"pattern contains self-arc at {t!r}")
        object.__setattr__(self, "arcs", arcs)

    @property
    def nodes(self) -> frozenset:
        return frozenset(x for arc in self.arcs for x in arc)

    def sorted_arcs(self) -> list[tuple[Hashable, Hashable]]:
        return sorted(self.arcs, key=repr)

    def __len__(self) -> int:
        return len(self.arcs)


PATTERN_LIBRARY: dict[str, LeakPattern] = {
    "single_arc": LeakPattern([("a", "b")]),
    "two_disjoint_arcs": LeakPattern([("a", "b"), ("c", "d")]),
    "three_disjoint_arcs": LeakPattern([("a", "b"), ("c", "d"), ("e", "f")]),
    "in_star": LeakPattern([("a", "c"), ("b", "c")]),
    "out_star": LeakPattern([("a", "b"), ("a", "c")]),
    "directed_path": LeakPattern([("a", "b"), ("b", "c")]),
    "two_cycle": LeakPattern([("a", "b"), ("b", "a")]),
}


def _injections(g: Graph, nodes: list, arcs: list[tuple]) -> Iterator[dict]:
    """Injective node maps into V(g) placing every arc on an edge of g."""
    assign: dict = {}
    used = 0
    # arcs that become fully assigned once node i is placed
    closing = [[] for _ in nodes]
    pos = {x: i for i, x in enumerate(nodes)}
    for t, h in arcs:
        closing[max(pos[t], pos[h])].append((t, h))

    def rec(i: int):
        nonlocal used
        if i == len(nodes):
            yield assign
            return
        node = nodes[i]
        for v in range(g.n):
            if used >> v & 1:
                continue
            assign[node] = v
            if all(g.nbr[assign[t]] >> assign[h] & 1 for t, h in closing[i]):
                used |= 1 << v
                yield from rec(i + 1)
                used &= ~(1 << v)
            del assign[node]

    yield from rec(0)


def enumerate_placements(g: Graph, pattern: LeakPattern) -> Iterator[LeakSet]:
    """Every arc set isomorphic to a sub-pattern and lying on edges of ``g``.

    Yields by sub-pattern size, and within a size in sorted arc order; each
    distinct arc set once. The empty placement comes first.
    """
    arcs = pattern.sorted_arcs()
    for k in range(len(arcs) + 1):
        found = set()
        for sub in combinations(arcs, k):
            nodes = sorted({x for arc in sub for x in arc}, key=repr)
            if len(nodes) > g.n:
                continue
            for phi in _injections(g, nodes, list(sub)):
                found.add(tuple(sorted((phi[t], phi[h]) for t, h in sub)))
        for image in sorted(found):
            yield LeakSet(Leak.arc(t, h) for t, h in image)


# ----------------------------------------------------------------------------
# leak strings

_ITEM = re.compile(r"(?:v:(\d+)|e:(\d+)-(\d+)|a:(\d+)>(\d+))\Z")


def parse_leak_string(text: str, g: Graph | None = None) -> LeakSet:
    """Parse ``v:<id>``, ``e:<u>-<v>``, ``a:<u>><v>`` items separated by commas.

    With ``g`` given, vertices are range-checked and edge/arc endpoints must be
    adjacent.
    """
    text = text.strip()
    if not text:
        return LeakSet()
    leaks = []
    col = 1
    for item in text.split(","):
        m = _ITEM.match(item.strip())
        if not m:
            raise LeakParseError(f"cannot parse leak item {item!r}", col)
        try:
            if m.group(1) is not None:
                leak = Leak.vertex(int(m.group(1)))
            elif m.group(2) is not None:
                leak = Leak.edge(int(m.group(2)), int(m.group(3)))
            else:
                leak = Leak.arc(int(m.group(4)), int(m.group(5)))
        except LeakError as exc:
            raise LeakParseError(str(exc), col) from None
        if g is not None:
            for v in leak.endpoints:
                if v >= g.n:
                    raise LeakParseError(f"vertex {v} out of range 0..{g.n - 1}", col)
            if leak.kind != VERTEX and not g.has_edge(leak.a, leak.b):
                raise LeakError(f"column {col}: {leak} is not on an edge of the graph")
        leaks.append(leak)
        col += len(item) + 1
    return LeakSet(leaks)


def parse_pattern_string(text: str) -> LeakPattern:
    """Pattern arcs in the leak grammar, arcs only (``a:0>1,a:2>3``)."""
    leaks = parse_leak_string(text)
    if any(x.kind != ARC for x in leaks):
        raise LeakParseError("patterns accept arc items only", 1)
    return LeakPattern((x.a, x.b) for x in leaks)
