"""Generic polymer machinery on the square graph G^2.

A polymer is a G^2-connected support together with a label per support
vertex.  Two polymers are compatible when their supports are at G^2-distance
greater than one, i.e. the support of one avoids the closed G^2-neighbourhood
of the other.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Callable, Iterable, Iterator, Optional, Sequence

from .errors import PreconditionError, ResourceBudgetError
from .graph import BipartiteGraph, Vertex, iter_bits

DEFAULT_BUDGET = 5_000_000


@dataclass(frozen=True, eq=False)
class Polymer:
    graph: BipartiteGraph = field(repr=False)
    support: int  # vertex-id bitmask
    labels: tuple[int, ...]  # one label per support vertex, increasing id order
    weight: Fraction  # a_gamma, so that w(gamma, z) = weight * z**size
    size: int = field(init=False)
    neighbourhood_mask: int = field(init=False, repr=False)
    closure: int = field(init=False, repr=False)

    def __post_init__(self):
        G = self.graph
        object.__setattr__(self, "size", self.support.bit_count())
        object.__setattr__(self, "neighbourhood_mask", G.nbr_of_mask(self.support) & ~self.support)
        object.__setattr__(self, "closure", G.sq_closure(self.support))

    def _key(self):
        return (self.support, self.labels)

    def __eq__(self, other):
        return isinstance(other, Polymer) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    @property
    def min_vertex(self) -> int:
        return (self.support & -self.support).bit_length() - 1

    @property
    def vertices(self) -> frozenset[Vertex]:
        return self.graph.vertices(self.support)

    @property
    def label_map(self) -> dict[Vertex, int]:
        return {self.graph.vertex(i): c for i, c in zip(iter_bits(self.support), self.labels)}

    @property
    def neighbourhood(self) -> frozenset[Vertex]:
        return self.graph.vertices(self.neighbourhood_mask)

    def w(self, z) -> Fraction:
        return self.weight * Fraction(z) ** self.size

    def __repr__(self) -> str:
        body = ", ".join(f"{v!r}:{c}" for v, c in sorted(self.label_map.items(), key=lambda t: self.graph.vid(t[0])))
        return f"Polymer({{{body}}}, w={self.weight})"


WeightFn = Callable[[int, tuple[int, ...]], Fraction]


@dataclass(eq=False)
class PolymerModel:
    """Everything the exact oracle and the cluster expansion need.

    ``size_cap`` is a strict bound: admissible polymers have
    ``size < size_cap`` (``None`` means unbounded).  ``labelings`` yields the
    candidate label tuples for a support; the default is the full product of
    ``label_domain`` over the support.
    """

    graph: BipartiteGraph
    universe: int
    label_domain: Callable[[int], Sequence[int]]
    weight_base: WeightFn
    size_cap: Optional[int] = None
    validity: Callable[[Polymer], bool] = lambda p: True
    labelings: Optional[Callable[[int], Iterable[tuple[int, ...]]]] = None
    structural_degree: int = 0
    name: str = "polymer"
    _cache: dict = field(default_factory=dict, repr=False)

    @property
    def max_polymer_size(self) -> int:
        top = self.universe.bit_count()
        return top if self.size_cap is None else min(top, self.size_cap - 1)

    def candidate_labelings(self, support: int) -> Iterable[tuple[int, ...]]:
        if self.labelings is not None:
            return self.labelings(support)
        return product(*(self.label_domain(i) for i in iter_bits(support)))

    def polymers(self, max_size: Optional[int] = None) -> list[Polymer]:
        limit = self.max_polymer_size if max_size is None else min(max_size, self.max_polymer_size)
        if limit not in self._cache:
            self._cache[limit] = _build_polymers(self, limit)
        return self._cache[limit]


def compatible(g1: Polymer, g2: Polymer) -> bool:
    if g1.graph is not g2.graph and g1.graph != g2.graph:
        raise PreconditionError("polymers live on different graphs")
    return not (g1.support & g2.closure)


# -- connected supports -------------------------------------------------------

def support_masks(G: BipartiteGraph, universe: int, root: int, max_size: int,
                  min_root: bool = False) -> Iterator[int]:
    """Every G^2-connected subset of ``universe`` containing ``root``.

    Branches on the lowest frontier vertex (take it or forbid it), so each
    subset is produced exactly once without a seen-set.  With ``min_root``
    only subsets whose smallest id is ``root`` are produced.
    """
    if not (universe >> root) & 1 or max_size < 1:
        return
    allowed = universe & ~((1 << root) - 1) if min_root else universe
    sq = G.sq_mask
    start = 1 << root
    stack = [(start, 1, sq[root] & allowed & ~start, ~allowed | start)]
    while stack:
        S, size, frontier, blocked = stack.pop()
        if not frontier or size == max_size:
            yield S
            continue
        u = frontier & -frontier
        ui = u.bit_length() - 1
        # forbid u
        stack.append((S, size, frontier & ~u, blocked | u))
        # take u
        S2 = S | u
        stack.append((S2, size + 1, (frontier | sq[ui]) & ~S2 & ~blocked, blocked))


def enumerate_supports(G: BipartiteGraph, universe: Iterable[Vertex], root: Vertex,
                       max_size: int) -> list[frozenset[Vertex]]:
    umask = G.mask(universe)
    r = G.vid(root)
    if not (umask >> r) & 1:
        raise PreconditionError(f"root {root!r} not in universe")
    masks = sorted(support_masks(G, umask, r, max_size), key=lambda m: (m.bit_count(), m))
    return [G.vertices(m) for m in masks]


def _build_polymers(model: PolymerModel, limit: int) -> list[Polymer]:
    G = model.graph
    out = []
    for root in iter_bits(model.universe):
        for supp in support_masks(G, model.universe, root, limit, min_root=True):
            for labels in model.candidate_labelings(supp):
                labels = tuple(labels)
                weight = model.weight_base(supp, labels)
                if weight == 0:
                    continue
                poly = Polymer(G, supp, labels, Fraction(weight))
                if model.validity(poly):
                    out.append(poly)
    out.sort(key=lambda p: (p.min_vertex, p.size, p.support, p.labels))
    return out


def enumerate_polymers(model: PolymerModel, max_size: Optional[int] = None) -> list[Polymer]:
    """All admissible polymers of size at most ``max_size`` in canonical order."""
    if max_size is not None and max_size <= 0:
        return []
    return list(model.polymers(max_size))


# -- exact partition function ---------------------------------------------------

def xi_exact(model: PolymerModel, z=1, size_cap: Optional[int] = None,
             budget: int = DEFAULT_BUDGET) -> Fraction:
    """Sum over compatible sets with total size ``< size_cap`` of prod w(gamma, z).

    Plain depth-first enumeration of compatible sets with a pairwise
    compatibility test against every chosen polymer.
    """
    z = Fraction(z)
    limit = None if size_cap is None else size_cap - 1
    if limit is not None and limit < 0:
        return Fraction(0)
    polys = model.polymers(limit)
    terms = [p.w(z) for p in polys]
    total = Fraction(0)
    visited = 0
    chosen: list[Polymer] = []

    def extend(start: int, size: int, value: Fraction):
        nonlocal total, visited
        visited += 1
        if visited > budget:
            raise ResourceBudgetError(f"compatible-set enumeration exceeded budget {budget}")
        total += value
        for j in range(start, len(polys)):
            p = polys[j]
            if limit is not None and size + p.size > limit:
                continue
            if all(compatible(p, c) for c in chosen):
                chosen.append(p)
                extend(j + 1, size + p.size, value * terms[j])
                chosen.pop()

    extend(0, 0, Fraction(1))
    return total


# -- Kotecky-Preiss ------------------------------------------------------------

def kp_parameter() -> float:
    """The exponent coefficient t = (sqrt(1 + 8e) - 1) / (4e) used for high fugacity."""
    return (-1 + math.sqrt(1 + 8 * math.e)) / (4 * math.e)


@dataclass(frozen=True)
class KPReport:
    max_ratio: float
    argmax: Optional[Polymer]
    a_coeff: float
    radius: float
    polymer_count: int

    @property
    def holds(self) -> bool:
        return self.max_ratio <= 1

    def to_dict(self) -> dict:
        return {
            "max_ratio": self.max_ratio,
            "holds": self.holds,
            "argmax": None if self.argmax is None else repr(self.argmax),
            "a_coeff": self.a_coeff,
            "radius": self.radius,
            "polymer_count": self.polymer_count,
        }


def kp_check(model: PolymerModel, a_coeff: float, radius: float) -> KPReport:
    """Worst ratio  sum_{gamma incompatible with g*} e^{a|gamma|} |w(gamma, R)|  /  (a |g*|).

    A maximum of at most 1 certifies that the model's partition function has
    no zero in the disc ``|z| < radius`` on this graph.
    """
    if a_coeff <= 0 or radius <= 0:
        raise PreconditionError("a_coeff and radius must be positive")
    polys = model.polymers()
    if not polys:
        return KPReport(0.0, None, a_coeff, radius, 0)
    scaled = [math.exp(a_coeff * p.size) * abs(float(p.weight)) * radius**p.size for p in polys]
    best, arg = -1.0, None
    for star in polys:
        cl = star.closure
        s = sum(val for p, val in zip(polys, scaled) if p.support & cl)
        ratio = s / (a_coeff * star.size)
        if ratio > best:
            best, arg = ratio, star
    return KPReport(best, arg, a_coeff, radius, len(polys))
