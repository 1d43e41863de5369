"""Proper q-colorings around the split ground states.

For a colour class X, the ground states colour L from X and R from the
complement.  Vertices that break this pattern are deviations; their
G^2-components, with their colours as labels, are the polymers.  A polymer's
weight counts the ways to finish colouring its boundary with ground colours,
normalised by the ground count on the same vertices.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Optional, Sequence

import mpmath

from .driver import AlgorithmConfig, brute_estimate, combine, side_eps, structural_slack, use_brute_force
from .errors import ModelError, PreconditionError
from .expansion import Estimate, estimate_log_xi
from .graph import BipartiteGraph, L, R, Vertex, iter_bits, square_components_mask
from .numbers import as_fraction, strict_size_cap
from .oracle import count_colorings
from .polymer import DEFAULT_BUDGET, Polymer, PolymerModel, xi_exact
from .properties import Regime, regime_parameters

RADIUS = 2.0


@dataclass(frozen=True)
class ColorClass:
    q: int
    x: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "x", frozenset(self.x))
        if self.q < 2:
            raise PreconditionError("need at least two colours")
        if not self.x or not self.x < frozenset(range(1, self.q + 1)):
            raise PreconditionError(f"X must be a nonempty proper subset of 1..{self.q}, got {sorted(self.x)}")

    @classmethod
    def first(cls, q: int, k: int) -> "ColorClass":
        return cls(q, frozenset(range(1, k + 1)))

    @property
    def complement(self) -> frozenset[int]:
        return frozenset(range(1, self.q + 1)) - self.x

    @property
    def x_bits(self) -> int:
        return sum(1 << c for c in self.x)

    @property
    def co_bits(self) -> int:
        return sum(1 << c for c in self.complement)

    def ground_domain(self, side: str) -> frozenset[int]:
        return self.x if side == L else self.complement

    def deviating_domain(self, side: str) -> frozenset[int]:
        return self.complement if side == L else self.x


def _as_class(x, q: Optional[int] = None) -> ColorClass:
    if isinstance(x, ColorClass):
        return x
    if q is None:
        raise PreconditionError("q is required when X is given as a plain set")
    return ColorClass(q, frozenset(x))


def deviation_distance(G: BipartiteGraph, sigma: Mapping[Vertex, int], x, q: Optional[int] = None) -> int:
    """Left vertices coloured outside X plus right vertices coloured inside X."""
    X = _as_class(x, q)
    if len(sigma) != 2 * G.n:
        raise PreconditionError("sigma must colour every vertex")
    return sum((c in X.x) != (v.side == L) for v, c in sigma.items())


def maj(omega, s, n: int, q: Optional[int] = None) -> frozenset[int]:
    """Colours used at least s*n times by ``omega`` (a mapping or sequence of colours)."""
    colours = list(omega.values()) if isinstance(omega, Mapping) else list(omega)
    threshold = as_fraction(s) * n
    counts = Counter(colours)
    palette = range(1, (q if q is not None else max(colours, default=0)) + 1)
    return frozenset(c for c in set(palette) | set(counts) if counts.get(c, 0) >= threshold)


# -- weights --------------------------------------------------------------------

def _weight(G: BipartiteGraph, X: ColorClass, supp: int, labels: Sequence[int]) -> Fraction:
    n = G.n
    colour_of = dict(zip(iter_bits(supp), labels))
    boundary = G.nbr_of_mask(supp) & ~supp
    num = 1
    for v in iter_bits(boundary):
        avail = X.x_bits if v < n else X.co_bits
        for u in iter_bits(G.nbr_mask[v] & supp):
            avail &= ~(1 << colour_of[u])
        num *= avail.bit_count()
        if not num:
            return Fraction(0)
    closure = supp | boundary
    on_left = (closure & G.left_mask).bit_count()
    on_right = (closure & G.right_mask).bit_count()
    return Fraction(num, len(X.x) ** on_left * (X.q - len(X.x)) ** on_right)


def _check_labels(G: BipartiteGraph, X: ColorClass, supp: int, labels: Sequence[int]) -> None:
    for i, c in zip(iter_bits(supp), labels):
        dom = X.deviating_domain(L if i < G.n else R)
        if c not in dom:
            raise ModelError(f"label {c} on {G.vertex(i)!r} is outside {sorted(dom)}")


def coloring_weight(G: BipartiteGraph, gamma, x, q: Optional[int] = None) -> Fraction:
    """Weight of a coloured polymer; ``gamma`` is a Polymer or a ``{Vertex: colour}`` map."""
    X = _as_class(x, q)
    if isinstance(gamma, Polymer):
        supp, labels = gamma.support, gamma.labels
    else:
        items = sorted(((G.vid(v), c) for v, c in gamma.items()))
        supp = sum(1 << i for i, _ in items)
        labels = tuple(c for _, c in items)
    if not supp:
        raise ModelError("empty support")
    _check_labels(G, X, supp, labels)
    return _weight(G, X, supp, labels)


def pruned_labelings(G: BipartiteGraph, X: ColorClass, supp: int) -> Iterator[tuple[int, ...]]:
    """Label tuples for ``supp`` whose boundary vertices all keep a free ground colour.

    Colours are assigned in vertex-id order; a branch dies as soon as some
    boundary vertex has every ground colour taken by already-labelled
    support neighbours.
    """
    n = G.n
    order = list(iter_bits(supp))
    boundary = G.nbr_of_mask(supp) & ~supp
    avail = {v: (X.x_bits if v < n else X.co_bits) for v in iter_bits(boundary)}
    domains = [sorted(X.deviating_domain(L if u < n else R)) for u in order]
    touched = [[v for v in iter_bits(G.nbr_mask[u] & boundary)] for u in order]
    labels: list[int] = []

    def rec(k: int):
        if k == len(order):
            yield tuple(labels)
            return
        for c in domains[k]:
            bit = 1 << c
            saved = [(v, avail[v]) for v in touched[k]]
            ok = True
            for v in touched[k]:
                avail[v] &= ~bit
                if not avail[v]:
                    ok = False
            if ok:
                labels.append(c)
                yield from rec(k + 1)
                labels.pop()
            for v, a in saved:
                avail[v] = a

    yield from rec(0)


def build_coloring_model(G: BipartiteGraph, x, q: Optional[int] = None,
                         alpha_n: Optional[int] = None) -> PolymerModel:
    X = _as_class(x, q)
    return PolymerModel(
        graph=G,
        universe=G.all_mask,
        label_domain=lambda i: sorted(X.deviating_domain(L if i < G.n else R)),
        weight_base=lambda supp, labels: _weight(G, X, supp, labels),
        size_cap=alpha_n,
        labelings=lambda supp: pruned_labelings(G, X, supp),
        structural_degree=2 * G.n,
        name=f"coloring[q={X.q}, X={sorted(X.x)}, cap={alpha_n}]",
    )


def ground_count(G: BipartiteGraph, X: ColorClass) -> int:
    k = len(X.x)
    return k**G.n * (X.q - k) ** G.n


def colorings_cluster_via_polymers(G: BipartiteGraph, x, q: Optional[int] = None, alpha_n: int = 1,
                                   budget: int = DEFAULT_BUDGET) -> Fraction:
    """|X|^n (q-|X|)^n * Xi restricted to total size < alpha_n."""
    X = _as_class(x, q)
    if alpha_n < 1:
        raise PreconditionError("alpha_n must be at least 1")
    model = build_coloring_model(G, X, alpha_n=alpha_n)
    return ground_count(G, X) * xi_exact(model, 1, alpha_n, budget)


def polymers_of_coloring(G: BipartiteGraph, sigma: Mapping[Vertex, int], x,
                         q: Optional[int] = None) -> list[Polymer]:
    """Deviating vertices of ``sigma`` split into G^2-components, labelled by their colours."""
    X = _as_class(x, q)
    dev = G.mask(v for v, c in sigma.items() if (c in X.x) != (v.side == L))
    out = []
    for comp in square_components_mask(G, dev):
        labels = tuple(sigma[G.vertex(i)] for i in iter_bits(comp))
        out.append(Polymer(G, comp, labels, _weight(G, X, comp, labels)))
    return out


def algorithm2(G: BipartiteGraph, q: int, eps: float, cfg: AlgorithmConfig = AlgorithmConfig()) -> Estimate:
    """eps-relative estimate of the number of proper q-colorings.

    Polymer branch: one colour class [q_low] when q is even, the two classes
    [q_low] and [q_high] when q is odd; the binomial factor accounts for the
    choice of which colours play the role of X.
    """
    if q < 1:
        raise PreconditionError("q must be positive")
    n = G.n
    if use_brute_force(cfg, n, eps):
        return brute_estimate(Fraction(count_colorings(G, q)), {"n": n, "q": q})

    regime = regime_parameters(Regime.COLORING, G.delta, q=q, force=cfg.force)
    radius = cfg.radius if cfg.radius is not None else RADIUS
    alpha = cfg.alpha if cfg.alpha is not None else regime.alpha
    alpha_n = cfg.alpha_n if cfg.alpha_n is not None else strict_size_cap(alpha, n)
    if alpha_n < 1:
        raise PreconditionError("alpha_n must be at least 1")
    eps_prime = side_eps(cfg, n, eps)
    lo, hi = q // 2, (q + 1) // 2
    classes = [ColorClass.first(q, lo)] if q % 2 == 0 else [ColorClass.first(q, lo), ColorClass.first(q, hi)]
    parts = [estimate_log_xi(build_coloring_model(G, X, alpha_n=alpha_n), eps_prime, radius,
                             cfg.m_override, cfg.budget) for X in classes]
    exact_pref = math.comb(q, lo) * (lo * hi) ** n
    with mpmath.workdps(50):
        log_pref = mpmath.log(math.comb(q, lo)) + n * mpmath.log(lo * hi)
    return combine(log_pref, Fraction(exact_pref), parts, structural_slack(cfg, n), {
        "n": n, "q": q, "classes": [sorted(X.x) for X in classes], "forced": cfg.force,
        "alpha_n": alpha_n, "radius": radius, "eps_prime": eps_prime,
    })


def colorings_from(G: BipartiteGraph, rows: Iterable[Sequence[int]]) -> Iterator[dict[Vertex, int]]:
    for row in rows:
        yield {G.vertex(i): int(c) for i, c in enumerate(row)}


__all__ = [
    "ColorClass", "deviation_distance", "maj", "coloring_weight", "pruned_labelings",
    "build_coloring_model", "ground_count", "colorings_cluster_via_polymers",
    "polymers_of_coloring", "algorithm2", "colorings_from", "RADIUS",
]
