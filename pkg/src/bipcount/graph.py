"""Bipartite multigraphs given as a union of perfect matchings.

A graph with ``n`` vertices per side is stored as ``delta`` permutations of
``range(n)``; matching ``i`` joins left vertex ``j`` to right vertex
``matchings[i][j]``.  Multiple edges are kept (every vertex has degree exactly
``delta``), but the square graph G^2 only records which pairs lie at distance
1 or 2.

Vertex sets are exposed as frozensets of :class:`Vertex`.  Internally every
vertex also has an integer id (left ``j`` -> ``j``, right ``j`` -> ``n + j``)
and hot loops work on Python ``int`` bitmasks over those ids.
"""

from __future__ import annotations

import hashlib
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .errors import MalformedInputError, PreconditionError

L = "L"
R = "R"
INFINITY = float("inf")


class Vertex(NamedTuple):
    side: str
    index: int

    def __repr__(self) -> str:
        return f"{self.side.lower()}{self.index}"


def left(j: int) -> Vertex:
    return Vertex(L, j)


def right(j: int) -> Vertex:
    return Vertex(R, j)


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True, eq=False)
class BipartiteGraph:
    n: int
    delta: int
    matchings: tuple[tuple[int, ...], ...]
    # derived, indexed by vertex id
    adjacency: tuple[tuple[int, ...], ...] = field(init=False, repr=False)
    nbr_mask: tuple[int, ...] = field(init=False, repr=False)
    sq_mask: tuple[int, ...] = field(init=False, repr=False)

    def __post_init__(self):
        n = self.n
        adj: list[list[int]] = [[] for _ in range(2 * n)]
        for perm in self.matchings:
            for j, k in enumerate(perm):
                adj[j].append(n + k)
                adj[n + k].append(j)
        nbr = [0] * (2 * n)
        for v, row in enumerate(adj):
            for u in row:
                nbr[v] |= 1 << u
        sq = []
        for v in range(2 * n):
            m = nbr[v]
            for u in iter_bits(nbr[v]):
                m |= nbr[u]
            sq.append(m & ~(1 << v))
        object.__setattr__(self, "adjacency", tuple(tuple(sorted(r)) for r in adj))
        object.__setattr__(self, "nbr_mask", tuple(nbr))
        object.__setattr__(self, "sq_mask", tuple(sq))

    def __eq__(self, other):
        if not isinstance(other, BipartiteGraph):
            return NotImplemented
        return (self.n, self.delta, self.matchings) == (other.n, other.delta, other.matchings)

    def __hash__(self):
        return hash((self.n, self.delta, self.matchings))

    # -- id / mask conversions -------------------------------------------
    def vid(self, v: Vertex) -> int:
        side, j = v
        if not 0 <= j < self.n or side not in (L, R):
            raise PreconditionError(f"vertex {v!r} not in graph with n={self.n}")
        return j if side == L else self.n + j

    def vertex(self, i: int) -> Vertex:
        return Vertex(L, i) if i < self.n else Vertex(R, i - self.n)

    def mask(self, vertices: Iterable[Vertex]) -> int:
        m = 0
        for v in vertices:
            m |= 1 << self.vid(v)
        return m

    def vertices(self, mask: int) -> frozenset[Vertex]:
        return frozenset(self.vertex(i) for i in iter_bits(mask))

    @property
    def left_mask(self) -> int:
        return (1 << self.n) - 1

    @property
    def right_mask(self) -> int:
        return ((1 << self.n) - 1) << self.n

    @property
    def all_mask(self) -> int:
        return (1 << (2 * self.n)) - 1

    def side_mask(self, side: str) -> int:
        return self.left_mask if side == L else self.right_mask

    def nbr_of_mask(self, mask: int) -> int:
        """Union of G-neighbours of the vertices in ``mask`` (may intersect it)."""
        out = 0
        for i in iter_bits(mask):
            out |= self.nbr_mask[i]
        return out

    def sq_closure(self, mask: int) -> int:
        """``mask`` together with all its G^2-neighbours."""
        out = mask
        for i in iter_bits(mask):
            out |= self.sq_mask[i]
        return out

    # -- vertex-level views ----------------------------------------------
    def neighbors(self, v: Vertex) -> tuple[Vertex, ...]:
        """Neighbours with multiplicity."""
        return tuple(self.vertex(u) for u in self.adjacency[self.vid(v)])

    def degree(self, v: Vertex) -> int:
        return len(self.adjacency[self.vid(v)])

    def square_adjacency(self, v: Vertex) -> frozenset[Vertex]:
        return self.vertices(self.sq_mask[self.vid(v)])

    def edges(self) -> list[tuple[Vertex, Vertex]]:
        """Edge list with multiplicity, one entry per matching edge."""
        return [(left(j), right(k)) for perm in self.matchings for j, k in enumerate(perm)]

    def fingerprint(self) -> str:
        return hashlib.sha256(to_json(self).encode()).hexdigest()[:16]


def build_graph(n: int, delta: int, matchings: Sequence[Sequence[int]]) -> BipartiteGraph:
    if n < 1 or delta < 1:
        raise MalformedInputError(f"need n >= 1 and delta >= 1, got n={n}, delta={delta}")
    if len(matchings) != delta:
        raise MalformedInputError(f"expected {delta} matchings, got {len(matchings)}")
    perms = []
    for i, perm in enumerate(matchings):
        perm = tuple(int(x) for x in perm)
        if sorted(perm) != list(range(n)):
            raise MalformedInputError(f"matching {i} is not a permutation of 0..{n - 1}")
        perms.append(perm)
    return BipartiteGraph(n, delta, tuple(perms))


def _nonempty_mask(G: BipartiteGraph, U: Iterable[Vertex]) -> int:
    m = G.mask(U)
    if not m:
        raise PreconditionError("vertex set must be nonempty")
    return m


def neighborhood(G: BipartiteGraph, U: Iterable[Vertex]) -> frozenset[Vertex]:
    """N_G(U): vertices outside U adjacent to some vertex of U."""
    m = _nonempty_mask(G, U)
    return G.vertices(G.nbr_of_mask(m) & ~m)


def square_components(G: BipartiteGraph, U: Iterable[Vertex]) -> list[frozenset[Vertex]]:
    """Connected components of G^2 induced on U, ordered by smallest vertex id."""
    return [G.vertices(c) for c in square_components_mask(G, G.mask(U))]


def square_components_mask(G: BipartiteGraph, mask: int) -> list[int]:
    comps = []
    rest = mask
    while rest:
        seed = rest & -rest
        comp = seed
        frontier = seed
        while frontier:
            grow = 0
            for i in iter_bits(frontier):
                grow |= G.sq_mask[i]
            frontier = grow & rest & ~comp
            comp |= frontier
        comps.append(comp)
        rest &= ~comp
    return comps


def distance(G: BipartiteGraph, u: Vertex, v: Vertex) -> float:
    """Shortest-path length in G, ``INFINITY`` when disconnected."""
    s, t = G.vid(u), G.vid(v)
    if s == t:
        return 0
    dist = {s: 0}
    queue = deque([s])
    while queue:
        x = queue.popleft()
        for y in iter_bits(G.nbr_mask[x]):
            if y not in dist:
                dist[y] = dist[x] + 1
                if y == t:
                    return dist[y]
                queue.append(y)
    return INFINITY


# -- serialisation -----------------------------------------------------------

def to_json(G: BipartiteGraph) -> str:
    return json.dumps({"n": G.n, "delta": G.delta, "matchings": [list(p) for p in G.matchings]})


def to_text(G: BipartiteGraph) -> str:
    rows = [f"{G.n} {G.delta}"] + [" ".join(map(str, p)) for p in G.matchings]
    return "\n".join(rows) + "\n"


def parse_graph(text: str) -> BipartiteGraph:
    """Parse either the JSON form or the plain-text form.

    Text form: first line ``n delta``, then ``delta`` lines each holding a
    permutation of ``0..n-1``.  Blank lines and ``#`` comments are ignored.
    """
    if text.lstrip().startswith("{"):
        try:
            obj = json.loads(text)
            return build_graph(int(obj["n"]), int(obj["delta"]), obj["matchings"])
        except json.JSONDecodeError as exc:
            raise MalformedInputError(exc.msg, exc.lineno) from None
        except (KeyError, TypeError) as exc:
            raise MalformedInputError(f"bad graph JSON: {exc}", 1) from None

    rows: list[tuple[int, list[int]]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            rows.append((lineno, [int(tok) for tok in line.split()]))
        except ValueError:
            raise MalformedInputError(f"non-integer token in {raw!r}", lineno) from None
    if not rows:
        raise MalformedInputError("empty graph file", 1)
    head_line, head = rows[0]
    if len(head) != 2:
        raise MalformedInputError("header must be 'n delta'", head_line)
    n, delta = head
    if n < 1 or delta < 1:
        raise MalformedInputError("need n >= 1 and delta >= 1", head_line)
    body = rows[1:]
    if len(body) != delta:
        last = body[-1][0] if body else head_line
        raise MalformedInputError(f"expected {delta} matching rows, found {len(body)}", last)
    for lineno, perm in body:
        if sorted(perm) != list(range(n)):
            raise MalformedInputError(f"row is not a permutation of 0..{n - 1}", lineno)
    return build_graph(n, delta, [perm for _, perm in body])


def read_graph(path) -> BipartiteGraph:
    with open(path) as fh:
        return parse_graph(fh.read())


def write_graph(G: BipartiteGraph, path, fmt: str = "json") -> None:
    with open(path, "w") as fh:
        fh.write(to_json(G) + "\n" if fmt == "json" else to_text(G))


def complete_bipartite_22() -> BipartiteGraph:
    """K_{2,2} (the 4-cycle) as the union of the identity and the swap."""
    return build_graph(2, 2, [[0, 1], [1, 0]])
