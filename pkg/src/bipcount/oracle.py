"""Brute-force ground truth.

Nothing here touches polymers: independent sets are summed one side at a
time, colorings by enumerating assignments.  All results are exact.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping

import numpy as np

from .errors import PreconditionError, ResourceBudgetError
from .graph import BipartiteGraph, L, Vertex, iter_bits


@dataclass(frozen=True)
class OracleBudget:
    max_enumeration: int = 2**26

    def __post_init__(self):
        if self.max_enumeration <= 0:
            raise PreconditionError("budget must be positive")

    def check(self, work: int, what: str) -> None:
        if work > self.max_enumeration:
            raise ResourceBudgetError(f"{what} needs {work} steps, budget is {self.max_enumeration}")


DEFAULT = OracleBudget()


# -- independent sets -----------------------------------------------------------

@lru_cache(maxsize=64)
def _side_histogram(G: BipartiteGraph, side: str) -> np.ndarray:
    """h[s, k] = number of S within ``side`` with |S| = s and |N(S)| = k."""
    n = G.n
    offset = 0 if side == L else n
    masks = np.zeros(1, dtype=np.uint64)
    sizes = np.zeros(1, dtype=np.int64)
    for j in range(n):
        nb = G.nbr_mask[offset + j]
        nb = nb >> n if side == L else nb  # neighbours as bits 0..n-1 of the other side
        masks = np.concatenate([masks, masks | np.uint64(nb)])
        sizes = np.concatenate([sizes, sizes + 1])
    nsize = np.bitwise_count(masks).astype(np.int64)
    hist = np.zeros((n + 1, n + 1), dtype=np.int64)
    np.add.at(hist, (sizes, nsize), 1)
    return hist


def _cells(hist: np.ndarray):
    """Nonzero histogram cells as plain ints (numpy scalars break Fraction powers)."""
    for s, k in zip(*np.nonzero(hist)):
        yield int(s), int(k), int(hist[s, k])


def _check_is(G: BipartiteGraph, budget: OracleBudget):
    if G.n > 62:
        raise ResourceBudgetError("one-side enumeration limited to n <= 62")
    budget.check(2**G.n, "independent-set enumeration")


def count_is(G: BipartiteGraph, lam, budget: OracleBudget = DEFAULT) -> Fraction:
    """Z(G, lam) = sum over S within L of lam^|S| (1 + lam)^(n - |N(S)|)."""
    _check_is(G, budget)
    lam = Fraction(lam)
    hist = _side_histogram(G, L)
    n = G.n
    return sum(
        (count * lam**s * (1 + lam) ** (n - k) for s, k, count in _cells(hist)),
        Fraction(0),
    )


def count_is_cluster(G: BipartiteGraph, side: str, alpha_n: int, lam,
                     budget: OracleBudget = DEFAULT) -> Fraction:
    """Weighted count of independent sets I with |I cap side| < alpha_n."""
    _check_is(G, budget)
    lam = Fraction(lam)
    hist = _side_histogram(G, side)
    n = G.n
    return sum(
        (count * lam**s * (1 + lam) ** (n - k) for s, k, count in _cells(hist) if s < alpha_n),
        Fraction(0),
    )


def _partial_binomial_sum(free: int, cap: int, lam: Fraction) -> Fraction:
    """sum_{j < cap} C(free, j) lam^j  (subsets of ``free`` vertices smaller than cap)."""
    return sum((math.comb(free, j) * lam**j for j in range(min(cap, free + 1))), Fraction(0))


def count_is_union(G: BipartiteGraph, alpha_n: int, lam, budget: OracleBudget = DEFAULT) -> Fraction:
    """Weighted count of I with |I cap L| < alpha_n or |I cap R| < alpha_n."""
    _check_is(G, budget)
    lam = Fraction(lam)
    hist = _side_histogram(G, L)
    n = G.n
    total = Fraction(0)
    for s, k, count in _cells(hist):
        free = n - k
        right = (1 + lam) ** free if s < alpha_n else _partial_binomial_sum(free, alpha_n, lam)
        total += count * lam**s * right
    return total


def count_is_intersection(G: BipartiteGraph, alpha_n: int, lam,
                          budget: OracleBudget = DEFAULT) -> Fraction:
    """Weighted count of I with both |I cap L| < alpha_n and |I cap R| < alpha_n."""
    _check_is(G, budget)
    lam = Fraction(lam)
    hist = _side_histogram(G, L)
    n = G.n
    return sum(
        (count * lam**s * _partial_binomial_sum(n - k, alpha_n, lam)
         for s, k, count in _cells(hist) if s < alpha_n),
        Fraction(0),
    )


def independent_sets(G: BipartiteGraph, budget: OracleBudget = DEFAULT) -> Iterable[frozenset[Vertex]]:
    """Every independent set, by testing all 2^(2n) vertex subsets."""
    budget.check(4**G.n, "naive independent-set enumeration")
    for mask in range(1 << (2 * G.n)):
        if not any(G.nbr_mask[i] & mask for i in iter_bits(mask & G.left_mask)):
            yield G.vertices(mask)


def count_is_naive(G: BipartiteGraph, lam, budget: OracleBudget = DEFAULT) -> Fraction:
    lam = Fraction(lam)
    return sum((lam ** len(I) for I in independent_sets(G, budget)), Fraction(0))


# -- colorings ----------------------------------------------------------------

def _right_neighbour_lists(G: BipartiteGraph) -> list[list[int]]:
    """For each right vertex, the distinct left indices adjacent to it."""
    return [sorted(iter_bits(G.nbr_mask[G.n + j])) for j in range(G.n)]


def count_colorings(G: BipartiteGraph, q: int, budget: OracleBudget = DEFAULT) -> int:
    """sum over left colorings of prod over right v of (q - #distinct colours on N(v))."""
    if q < 1:
        return 0
    n = G.n
    budget.check(q**n, "left-coloring enumeration")
    nbrs = _right_neighbour_lists(G)
    total = 0
    chunk = max(1, 2**18 // max(n, 1))
    all_left = np.arange(q**n, dtype=np.int64)
    for start in range(0, q**n, chunk):
        codes = all_left[start:start + chunk]
        digits = np.empty((len(codes), n), dtype=np.int64)
        rest = codes.copy()
        for j in range(n):
            digits[:, j] = rest % q
            rest //= q
        prod = np.ones(len(codes), dtype=object)
        for nb in nbrs:
            used = np.zeros(len(codes), dtype=np.int64)
            for u in nb:
                used |= np.left_shift(1, digits[:, u])
            prod = prod * (q - np.bitwise_count(used).astype(np.int64)).astype(object)
        total += int(prod.sum())
    return total


@lru_cache(maxsize=32)
def _proper_colorings(G: BipartiteGraph, q: int) -> np.ndarray:
    """All proper colorings as rows of 2n colours in 1..q (left block then right block)."""
    n = G.n
    total = q ** (2 * n)
    rows = np.arange(total, dtype=np.int64)
    cols = np.empty((total, 2 * n), dtype=np.int8)
    for i in range(2 * n):
        cols[:, i] = rows % q + 1
        rows //= q
    ok = np.ones(total, dtype=bool)
    for j, perm in enumerate(G.matchings):
        for a, b in enumerate(perm):
            ok &= cols[:, a] != cols[:, n + b]
    out = cols[ok]
    out.setflags(write=False)
    return out


def proper_colorings(G: BipartiteGraph, q: int, budget: OracleBudget = DEFAULT) -> np.ndarray:
    budget.check(q ** (2 * G.n), "two-side coloring enumeration")
    return _proper_colorings(G, q)


def count_colorings_naive(G: BipartiteGraph, q: int, budget: OracleBudget = DEFAULT) -> int:
    return int(len(proper_colorings(G, q, budget)))


def deviations(G: BipartiteGraph, q: int, X: Iterable[int], budget: OracleBudget = DEFAULT) -> np.ndarray:
    """d_X(sigma) for every proper coloring, aligned with :func:`proper_colorings`."""
    cols = proper_colorings(G, q, budget)
    inx = np.isin(cols, sorted(X))
    n = G.n
    return (~inx[:, :n]).sum(axis=1) + inx[:, n:].sum(axis=1)


def count_colorings_cluster(G: BipartiteGraph, X: Iterable[int], alpha_n: int, q: int,
                            budget: OracleBudget = DEFAULT) -> int:
    """Number of proper colorings with d_X(sigma) < alpha_n."""
    return int((deviations(G, q, X, budget) < alpha_n).sum())


def count_colorings_matching(G: BipartiteGraph, q: int, X: Iterable[int], alpha_n: int,
                             fixed: Mapping[Vertex, int], budget: OracleBudget = DEFAULT) -> int:
    """|C_Gamma|: colorings in the cluster that agree with ``fixed`` on its
    vertices and use ground colours (X on the left, the rest on the right)
    everywhere else."""
    X = sorted(X)
    cols = proper_colorings(G, q, budget)
    n = G.n
    keep = deviations(G, q, X, budget) < alpha_n
    inx = np.isin(cols, X)
    ground = np.concatenate([inx[:, :n], ~inx[:, n:]], axis=1)
    pinned = np.zeros(2 * n, dtype=bool)
    for v, c in fixed.items():
        i = G.vid(v)
        pinned[i] = True
        keep &= cols[:, i] == c
    keep &= ground[:, ~pinned].all(axis=1)
    return int(keep.sum())


def coloring_rows(G: BipartiteGraph, q: int, budget: OracleBudget = DEFAULT):
    """Proper colorings as ``{Vertex: colour}`` dicts (small graphs only)."""
    for row in proper_colorings(G, q, budget):
        yield {G.vertex(i): int(c) for i, c in enumerate(row)}


def all_colorings(G: BipartiteGraph, q: int):
    """Every map V -> [q], proper or not, as dicts."""
    verts = [G.vertex(i) for i in range(2 * G.n)]
    for combo in product(range(1, q + 1), repeat=len(verts)):
        yield dict(zip(verts, combo))


__all__ = [
    "OracleBudget", "count_is", "count_is_cluster", "count_is_union", "count_is_intersection",
    "count_is_naive", "independent_sets", "count_colorings", "count_colorings_naive",
    "count_colorings_cluster", "count_colorings_matching", "proper_colorings", "deviations",
    "coloring_rows", "all_colorings",
]
