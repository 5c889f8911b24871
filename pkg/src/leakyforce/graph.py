"""Simple undirected graphs on dense integer vertices, graph6 / edge-list I/O,
and the named families used as fixtures.

Vertex sets are plain ``frozenset[int]`` at the API boundary; internally each
graph keeps one neighbour bitmask per vertex so that closures can run on ints.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator

VertexSet = frozenset

GRAPH6_HEADER = ">>graph6<<"
GRAPH6_MAX_N = 62


class GraphError(ValueError):
    """Invalid graph construction (self-loop, vertex out of range, bad size)."""


class Graph6Error(ValueError):
    """Malformed graph6 input."""


class EdgeListError(ValueError):
    """Malformed edge-list input."""


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def popcount(mask: int) -> int:
    return bin(mask).count("1")


class Graph:
    """Immutable simple graph with vertices ``0..n-1``."""

    __slots__ = ("n", "nbr", "full")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]] = ()):
        if n < 0:
            raise GraphError(f"vertex count must be nonnegative, got {n}")
        nbr = [0] * n
        for u, v in edges:
            if u == v:
                raise GraphError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError(f"edge {u}-{v} out of range for n={n}")
            nbr[u] |= 1 << v
            nbr[v] |= 1 << u
        self.n = n
        self.nbr: tuple[int, ...] = tuple(nbr)
        self.full = (1 << n) - 1

    def neighbors(self, v: int) -> frozenset[int]:
        return frozenset(iter_bits(self.nbr[v]))

    def degree(self, v: int) -> int:
        return popcount(self.nbr[v])

    def has_edge(self, u: int, v: int) -> bool:
        return 0 <= u < self.n and 0 <= v < self.n and bool(self.nbr[u] >> v & 1)

    def edges(self) -> list[tuple[int, int]]:
        """Each edge once as ``(u, v)`` with ``u < v``, in lexicographic order."""
        return [(u, v) for u in range(self.n) for v in iter_bits(self.nbr[u]) if u < v]

    def arcs(self) -> list[tuple[int, int]]:
        """Both orientations of every edge, sorted by (tail, head)."""
        return [(u, v) for u in range(self.n) for v in iter_bits(self.nbr[u])]

    @property
    def vertices(self) -> frozenset[int]:
        return frozenset(range(self.n))

    def mask(self, vertices: Iterable[int]) -> int:
        m = 0
        for v in vertices:
            if not 0 <= v < self.n:
                raise GraphError(f"vertex {v} out of range for n={self.n}")
            m |= 1 << v
        return m

    def members(self, mask: int) -> frozenset[int]:
        return frozenset(iter_bits(mask))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Graph) and self.n == other.n and self.nbr == other.nbr

    def __hash__(self) -> int:
        return hash((self.n, self.nbr))

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, edges={self.edges()})"

    def __reduce__(self):
        return (Graph, (self.n, self.edges()))


# ----------------------------------------------------------------------------
# graph6


def parse_graph6(text: str) -> Graph:
    word = text.strip()
    offset = 0
    if word.startswith(GRAPH6_HEADER):
        word = word[len(GRAPH6_HEADER):]
        offset = len(GRAPH6_HEADER)
    if not word:
        raise Graph6Error("empty graph6 word")
    data = []
    for i, ch in enumerate(word):
        b = ord(ch)
        if not 63 <= b <= 126:
            raise Graph6Error(f"byte {b!r} at offset {i + offset} outside 63..126")
        data.append(b - 63)
    n = data[0]
    if n > GRAPH6_MAX_N:
        raise Graph6Error(f"multi-byte size header at offset {offset} unsupported (n > {GRAPH6_MAX_N})")
    nbits = n * (n - 1) // 2
    nbytes = (nbits + 5) // 6
    if len(data) - 1 != nbytes:
        raise Graph6Error(
            f"length mismatch at offset {offset + min(len(data), nbytes + 1)}: "
            f"n={n} needs {nbytes} data bytes, got {len(data) - 1}"
        )
    edges = []
    k = 0
    for j in range(1, n):
        for i in range(j):
            if data[1 + k // 6] >> (5 - k % 6) & 1:
                edges.append((i, j))
            k += 1
    if nbytes and data[nbytes] & ((1 << (6 * nbytes - nbits)) - 1):
        raise Graph6Error(f"nonzero padding bits in byte at offset {offset + nbytes}")
    return Graph(n, edges)


def emit_graph6(g: Graph) -> str:
    if g.n > GRAPH6_MAX_N:
        raise Graph6Error(f"graph6 output supports n <= {GRAPH6_MAX_N}, got n={g.n}")
    bits = [g.nbr[i] >> j & 1 for j in range(1, g.n) for i in range(j)]
    bits += [0] * (-len(bits) % 6)
    out = [chr(63 + g.n)]
    for k in range(0, len(bits), 6):
        val = 0
        for bit in bits[k:k + 6]:
            val = val << 1 | bit
        out.append(chr(63 + val))
    return "".join(out)


def read_corpus(text: str) -> list[Graph]:
    """One graph6 word per line; blank lines and ``#`` comments skipped."""
    graphs = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            graphs.append(parse_graph6(line))
    return graphs


# ----------------------------------------------------------------------------
# edge lists


def parse_edge_list(text: str) -> Graph:
    n = None
    edges = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if n is None:
            if len(parts) != 2 or parts[0] != "n":
                raise EdgeListError(f"line {lineno}: expected header 'n <count>'")
            try:
                n = int(parts[1])
            except ValueError:
                raise EdgeListError(f"line {lineno}: bad vertex count {parts[1]!r}") from None
            if n < 0:
                raise EdgeListError(f"line {lineno}: negative vertex count")
            continue
        if len(parts) != 2:
            raise EdgeListError(f"line {lineno}: expected 'u v'")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise EdgeListError(f"line {lineno}: non-integer endpoint") from None
        if u == v:
            raise EdgeListError(f"line {lineno}: self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise EdgeListError(f"line {lineno}: vertex out of range 0..{n - 1}")
        edges.add((min(u, v), max(u, v)))
    if n is None:
        raise EdgeListError("missing header 'n <count>'")
    return Graph(n, sorted(edges))


def emit_edge_list(g: Graph) -> str:
    return "\n".join([f"n {g.n}"] + [f"{u} {v}" for u, v in g.edges()]) + "\n"


def load_graph(text: str, fmt: str | None = None) -> Graph:
    """Parse ``text`` as graph6 or edge list; ``fmt=None`` auto-detects."""
    if fmt is None:
        first = next(
            (ln.split("#", 1)[0].strip() for ln in text.splitlines() if ln.split("#", 1)[0].strip()),
            "",
        )
        fmt = "edges" if first.split()[:1] == ["n"] else "graph6"
    if fmt == "edges":
        return parse_edge_list(text)
    if fmt == "graph6":
        words = read_corpus(text)
        if len(words) != 1:
            raise Graph6Error(f"expected exactly one graph6 word, got {len(words)}")
        return words[0]
    raise ValueError(f"unknown graph format {fmt!r}")


# ----------------------------------------------------------------------------
# named families


def path(k: int) -> Graph:
    return Graph(k, [(i, i + 1) for i in range(k - 1)])


def cycle(k: int) -> Graph:
    if k < 3:
        raise GraphError(f"cycle needs at least 3 vertices, got {k}")
    return Graph(k, [(i, (i + 1) % k) for i in range(k)])


def complete(k: int) -> Graph:
    return Graph(k, combinations(range(k), 2))


def star(k: int) -> Graph:
    """K_{1,k}: centre 0, leaves 1..k."""
    return Graph(k + 1, [(0, i) for i in range(1, k + 1)])


def paw() -> Graph:
    """Triangle 0,1,2 with pendant 3 attached to 0."""
    return Graph(4, [(0, 1), (0, 2), (1, 2), (0, 3)])


def complete_prism(k: int) -> Graph:
    """K_k box K_2: x-clique 0..k-1, y-clique k..2k-1, matching i -- i+k."""
    edges = list(combinations(range(k), 2))
    edges += [(k + i, k + j) for i, j in combinations(range(k), 2)]
    edges += [(i, i + k) for i in range(k)]
    return Graph(2 * k, edges)


_FAMILIES = {
    "path": (path, 1),
    "cycle": (cycle, 1),
    "complete": (complete, 1),
    "star": (star, 1),
    "paw": (paw, 0),
    "cartesian_product": (complete_prism, 1),
}


def generate_family(family: str, *params: int) -> Graph:
    """Build a named graph. ``cartesian_product`` takes k and yields K_k box K_2."""
    try:
        build, arity = _FAMILIES[family]
    except KeyError:
        raise GraphError(f"unknown family {family!r}; choose from {sorted(_FAMILIES)}") from None
    if len(params) != arity:
        raise GraphError(f"{family} takes {arity} parameter(s), got {len(params)}")
    for p in params:
        if p <= 0:
            raise GraphError(f"{family}: size must be positive, got {p}")
    return build(*params)
