"""The leak-aware colour-change rule: closures, forcing processes, and the set
of forces realisable in some complete process."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, NamedTuple, Sequence

from .graph import Graph, iter_bits
from .leaks import Leak, disabled_table


class ContractError(ValueError):
    """A documented precondition was violated."""


class MalformedProcessError(ValueError):
    pass


class Force(NamedTuple):
    tail: int
    head: int

    def __str__(self) -> str:
        return f"{self.tail}>{self.head}"

    @classmethod
    def parse(cls, text: str) -> Force:
        t, h = text.split(">")
        return cls(int(t), int(h))


ForcingProcess = Sequence[Force]


@dataclass(frozen=True)
class ClosureResult:
    final: frozenset[int]
    process: tuple[Force, ...]
    rounds: tuple[frozenset[int], ...]


# ----------------------------------------------------------------------------
# bitmask kernels


def close_mask(nbr: Sequence[int], blue: int, dis: Sequence[int] | None = None) -> int:
    """Fixed point of the rule on bitmasks. ``dis[u]`` masks heads u may not force."""
    while True:
        new = blue
        m = blue
        while m:
            low = m & -m
            u = low.bit_length() - 1
            m ^= low
            w = nbr[u] & ~new
            if w and not w & (w - 1) and not (dis and w & dis[u]):
                new |= w
        if new == blue:
            return blue
        blue = new


def _round_forces(nbr: Sequence[int], blue: int, dis: Sequence[int]) -> list[Force]:
    out = []
    for u in iter_bits(blue):
        w = nbr[u] & ~blue
        if w and not w & (w - 1) and not w & dis[u]:
            out.append(Force(u, w.bit_length() - 1))
    return out


# ----------------------------------------------------------------------------
# public operations


def valid_forces(g: Graph, s: Iterable[int], leaks: Iterable[Leak] | None = None) -> frozenset[Force]:
    return frozenset(_round_forces(g.nbr, g.mask(s), disabled_table(g, leaks)))


def closure(g: Graph, b: Iterable[int], leaks: Iterable[Leak] | None = None) -> ClosureResult:
    """Exhaustively apply the rule from ``b`` under ``leaks``.

    Rounds are synchronous; the witnessing process lists forces round by round
    in (tail, head) order, keeping only the first force into each head.
    """
    dis = disabled_table(g, leaks)
    blue = g.mask(b)
    process: list[Force] = []
    rounds: list[frozenset[int]] = []
    while True:
        heads = 0
        for f in _round_forces(g.nbr, blue, dis):
            if not heads >> f.head & 1:
                heads |= 1 << f.head
                process.append(f)
        if not heads:
            break
        blue |= heads
        rounds.append(g.members(blue))
    return ClosureResult(g.members(blue), tuple(process), tuple(rounds))


def is_zero_forcing_set(g: Graph, b: Iterable[int]) -> bool:
    return close_mask(g.nbr, g.mask(b)) == g.full


def _check_structure(g: Graph, forces: Iterable[Force]) -> list[Force]:
    forces = [Force(*f) for f in forces]
    seen = set()
    for f in forces:
        if f.tail == f.head or not g.has_edge(f.tail, f.head):
            raise MalformedProcessError(f"force {f} is not along an edge of the graph")
        if f.head in seen:
            raise MalformedProcessError(f"vertex {f.head} is forced more than once")
        seen.add(f.head)
    return forces


def _greedy(g: Graph, blue: int, dis: Sequence[int], pending: list[Force]) -> int | None:
    """Apply any currently valid pending force until none remain; None on stall."""
    while pending:
        for i, f in enumerate(pending):
            if (
                blue >> f.tail & 1
                and g.nbr[f.tail] & ~blue == 1 << f.head
                and not dis[f.tail] >> f.head & 1
            ):
                blue |= 1 << f.head
                del pending[i]
                break
        else:
            return None
    return blue


def validate_process(
    g: Graph, b: Iterable[int], leaks: Iterable[Leak] | None, forces: ForcingProcess
) -> bool:
    """True iff some ordering of ``forces`` is valid step by step from ``b``.

    Greedy selection is complete here: heads are distinct and blue sets only
    grow, so applying one force never invalidates another pending force.
    """
    forces = _check_structure(g, forces)
    bmask = g.mask(b)
    if any(bmask >> f.head & 1 for f in forces):
        return False
    return _greedy(g, bmask, disabled_table(g, leaks), forces) is not None


def is_forcing_process(
    g: Graph, b: Iterable[int], leaks: Iterable[Leak] | None, forces: ForcingProcess
) -> bool:
    """Valid and colours the whole graph."""
    forces = _check_structure(g, forces)
    cover = g.mask(b) | g.mask(f.head for f in forces)
    return cover == g.full and validate_process(g, b, leaks, forces)


def restrict_process(forces: ForcingProcess, s: Iterable[int]) -> tuple[list[Force], list[Force]]:
    """Split into (forces with head outside ``s``, forces with head inside ``s``)."""
    s = frozenset(s)
    outside = [f for f in forces if f.head not in s]
    inside = [f for f in forces if f.head in s]
    return outside, inside


def obtainable(
    g: Graph,
    b: Iterable[int],
    forces: ForcingProcess,
    b_prime: Iterable[int],
    leaks: Iterable[Leak] | None = None,
) -> bool:
    b, b_prime = frozenset(b), frozenset(b_prime)
    if not b <= b_prime:
        raise ContractError("obtainable: B must be a subset of B'")
    _, used = restrict_process(forces, b_prime - b)
    if frozenset(f.head for f in used) != b_prime - b:
        return False
    return validate_process(g, b, leaks, used)


def splice_processes(
    g: Graph,
    b: Iterable[int],
    forces: ForcingProcess,
    forces_prime: ForcingProcess,
    b_prime: Iterable[int],
    leaks: Iterable[Leak] | None = None,
) -> list[Force]:
    """Follow ``forces`` up to ``b_prime``, then switch to ``forces_prime``.

    Returns the forces of ``forces`` with head in ``b_prime`` followed by the
    forces of ``forces_prime`` with head outside it.
    """
    b, b_prime = frozenset(b), frozenset(b_prime)
    if not validate_process(g, b, leaks, forces):
        raise ContractError("splice_processes: F does not validate from B")
    if not validate_process(g, b, leaks, forces_prime):
        raise ContractError("splice_processes: F_prime does not validate from B")
    if not b <= b_prime or not obtainable(g, b, forces, b_prime, leaks):
        raise ContractError("splice_processes: B_prime is not obtainable from B using F")
    _, kept = restrict_process(forces, b_prime)
    switched, _ = restrict_process(forces_prime, b_prime)
    result = list(kept) + list(switched)
    if not validate_process(g, b, leaks, result):
        raise AssertionError("spliced process failed validation")
    return result


def random_process(
    g: Graph, b: Iterable[int], leaks: Iterable[Leak] | None, rng: random.Random
) -> list[Force]:
    """Run the rule choosing uniformly among currently valid forces each step."""
    dis = disabled_table(g, leaks)
    blue = g.mask(b)
    out = []
    while True:
        cands = _round_forces(g.nbr, blue, dis)
        if not cands:
            return out
        f = rng.choice(cands)
        blue |= 1 << f.head
        out.append(f)


def _blocked_closures(g: Graph, bmask: int, dis: list[int]) -> dict[int, int]:
    """For each white v, the closure with every force into v forbidden."""
    out = {}
    for v in iter_bits(g.full & ~bmask):
        bit = 1 << v
        blocked = list(dis)
        for w in iter_bits(g.nbr[v]):
            blocked[w] |= bit
        out[v] = close_mask(g.nbr, bmask, blocked)
    return out


def possible_forces(
    g: Graph, b: Iterable[int], leaks: Iterable[Leak] | None = None, complete: bool = True
) -> frozenset[Force]:
    """Forces u->v that occur in some forcing process of ``b`` avoiding ``leaks``.

    While v is white its neighbours can force nothing but v, so the states
    reachable with v white are exactly the subsets of the closure in which
    every force into v is forbidden. u->v is possible iff u and all of its
    other neighbours lie in that closure and the force is not disabled.

    With ``complete`` (the default) the process must colour the whole graph;
    if ``b`` cannot do so under ``leaks`` the result is empty. Otherwise every
    reachable state completes, so the two modes coincide.
    """
    dis = disabled_table(g, leaks)
    bmask = g.mask(b)
    if complete and close_mask(g.nbr, bmask, dis) != g.full:
        return frozenset()
    out = set()
    for v, cv in _blocked_closures(g, bmask, dis).items():
        for u in iter_bits(g.nbr[v] & cv):
            if g.nbr[u] & ~cv == 1 << v and not dis[u] >> v & 1:
                out.add(Force(u, v))
    return frozenset(out)
