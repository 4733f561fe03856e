"""Simple undirected graphs on vertices ``0..n-1``.

Each vertex keeps its neighbourhood as an integer bitset, which makes the
common-neighbourhood intersections in clique enumeration cheap. The sorted
edge tuple gives every edge a stable index for the packing LPs.
"""
from __future__ import annotations

from itertools import combinations
from typing import Iterable, Iterator

from .errors import ParameterError, ParseError

Edge = tuple[int, int]
Clique = tuple[int, ...]


def canon(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Graph:
    __slots__ = ("n", "edges", "adj", "_index")

    def __init__(self, n: int, edges: Iterable[Edge] = ()):
        if n < 0:
            raise ParameterError("vertex count must be nonnegative")
        adj = [0] * n
        seen = set()
        for a, b in edges:
            if a == b:
                raise ParameterError(f"self-loop at vertex {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise ParameterError(f"edge ({a}, {b}) has an endpoint outside 0..{n - 1}")
            e = canon(a, b)
            if e in seen:
                raise ParameterError(f"duplicate edge {e}")
            seen.add(e)
            adj[a] |= 1 << b
            adj[b] |= 1 << a
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        object.__setattr__(self, "adj", tuple(adj))
        object.__setattr__(self, "_index", None)

    def __setattr__(self, name, value):
        raise AttributeError("Graph is immutable")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return self.n == other.n and self.edges == other.edges

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={len(self.edges)})"

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return u != v and 0 <= u < self.n and 0 <= v < self.n and bool(self.adj[u] >> v & 1)

    def edge_index(self) -> dict[Edge, int]:
        if self._index is None:
            object.__setattr__(self, "_index", {e: i for i, e in enumerate(self.edges)})
        return self._index

    def neighbors(self, v: int) -> list[int]:
        return list(_bits(self.adj[v]))

    def degree(self, v: int) -> int:
        return bin(self.adj[v]).count("1")

    def degrees(self) -> list[int]:
        return [bin(a).count("1") for a in self.adj]

    def is_clique(self, vertices: Iterable[int]) -> bool:
        vs = list(vertices)
        return all(self.has_edge(a, b) for a, b in combinations(vs, 2))

    def induced_edges(self, vertices: Iterable[int]) -> list[Edge]:
        vs = sorted(vertices)
        return [(a, b) for a, b in combinations(vs, 2) if self.adj[a] >> b & 1]


def min_degree(g: Graph) -> int:
    if g.n < 1:
        raise ParameterError("min_degree needs at least one vertex")
    return min(g.degrees())


def max_degree(g: Graph) -> int:
    return max(g.degrees(), default=0)


def complete_graph(n: int) -> Graph:
    return Graph(n, combinations(range(n), 2))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ParameterError("a cycle needs at least 3 vertices")
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def remove_edges(g: Graph, removed: Iterable[Edge]) -> Graph:
    drop = set()
    for a, b in removed:
        e = canon(a, b)
        if not g.has_edge(*e):
            raise ParameterError(f"{e} is not an edge of the graph")
        drop.add(e)
    return Graph(g.n, [e for e in g.edges if e not in drop])


def add_edges(g: Graph, added: Iterable[Edge]) -> Graph:
    return Graph(g.n, list(g.edges) + [canon(a, b) for a, b in added])


def _extend(g: Graph, prefix: list[int], cand: int, depth: int, out: list[Clique]):
    if depth == 0:
        out.append(tuple(prefix))
        return
    while cand:
        low = cand & -cand
        v = low.bit_length() - 1
        cand ^= low
        # cand now holds only vertices above v
        prefix.append(v)
        _extend(g, prefix, cand & g.adj[v], depth - 1, out)
        prefix.pop()


def enumerate_cliques(g: Graph, k: int) -> list[Clique]:
    """All k-cliques of ``g`` as sorted tuples, in lexicographic order."""
    if not 2 <= k <= g.n:
        raise ParameterError(f"clique order k={k} outside 2..n (n={g.n})")
    out: list[Clique] = []
    _extend(g, [], (1 << g.n) - 1, k, out)
    return out


def cliques_containing_edge(g: Graph, e: Edge, k: int) -> list[Clique]:
    u, v = canon(*e)
    if not g.has_edge(u, v):
        raise ParameterError(f"{(u, v)} is not an edge of the graph")
    if k < 2:
        raise ParameterError("clique order must be at least 2")
    rest: list[Clique] = []
    _extend(g, [], g.adj[u] & g.adj[v], k - 2, rest)
    return [tuple(sorted(c + (u, v))) for c in rest]


def clique_edges(clique: Iterable[int]) -> list[Edge]:
    return list(combinations(sorted(clique), 2))


def parse_graph(text: str) -> Graph:
    """Read the ``p edge n m`` / ``e u v`` format (1-indexed, u < v)."""
    n = m = None
    edges: list[Edge] = []
    seen: set[Edge] = set()
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line == "c" or line.startswith("c "):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ParseError("second header line", lineno)
            if len(parts) != 4 or parts[1] != "edge":
                raise ParseError(f"malformed header {line!r}", lineno)
            try:
                n, m = int(parts[2]), int(parts[3])
            except ValueError:
                raise ParseError(f"malformed header {line!r}", lineno) from None
            if n < 0 or m < 0:
                raise ParseError("negative count in header", lineno)
        elif parts[0] == "e":
            if n is None:
                raise ParseError("edge line before header", lineno)
            if len(parts) != 3:
                raise ParseError(f"malformed edge line {line!r}", lineno)
            try:
                a, b = int(parts[1]), int(parts[2])
            except ValueError:
                raise ParseError(f"malformed edge line {line!r}", lineno) from None
            if a == b:
                raise ParseError(f"self-loop at vertex {a}", lineno)
            if not (1 <= a <= n and 1 <= b <= n):
                raise ParseError(f"vertex index out of range 1..{n}", lineno)
            e = canon(a - 1, b - 1)
            if e in seen:
                raise ParseError(f"duplicate edge {a} {b}", lineno)
            seen.add(e)
            edges.append(e)
        else:
            raise ParseError(f"unrecognised line {line!r}", lineno)
    if n is None:
        raise ParseError("missing 'p edge <n> <m>' header")
    if len(edges) != m:
        raise ParseError(f"header announces {m} edges, found {len(edges)}")
    return Graph(n, edges)


def serialize_graph(g: Graph) -> str:
    lines = [f"p edge {g.n} {g.m}"]
    lines += [f"e {a + 1} {b + 1}" for a, b in g.edges]
    return "\n".join(lines) + "\n"


def read_graph(path) -> Graph:
    with open(path, encoding="utf-8") as fh:
        return parse_graph(fh.read())


def write_graph(g: Graph, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(serialize_graph(g))
