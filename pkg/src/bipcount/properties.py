"""Structural graph properties and the regime parameter formulas.

The exact checkers are exponential and exist to validate small instances;
the algorithms themselves never call them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import combinations
from typing import Optional

import mpmath
import numpy as np

from .errors import DomainError, PreconditionError, RegimeError, ResourceBudgetError
from .graph import BipartiteGraph, Vertex
from .numbers import as_fraction, floor_product, strict_size_cap

DEFAULT_EXACT_BUDGET = 2**24
DEFAULT_SAMPLES = 1000


class Regime(str, Enum):
    IS_HIGH = "is-high"
    IS_LOW = "is-low"
    COLORING = "coloring"


@dataclass(frozen=True)
class RegimeParams:
    mode: Regime
    delta: float
    alpha: float | Fraction
    beta: float | Fraction
    zeta: Optional[Fraction] = None
    lambda_l: Optional[float] = None
    q: Optional[int] = None
    s: Optional[Fraction] = None
    forced: bool = False

    @property
    def q_low(self) -> int:
        return self.q // 2

    @property
    def q_high(self) -> int:
        return (self.q + 1) // 2

    def size_cap(self, n: int) -> int:
        """Strict bound on polymer size: sizes ``k`` with ``k < alpha*n``."""
        return strict_size_cap(self.alpha, n)


@dataclass(frozen=True)
class PropertyVerdict:
    holds: bool
    method: str  # "EXACT" or "SAMPLED"
    witness: Optional[frozenset[Vertex]] = None
    checked: int = 0
    detail: dict = field(default_factory=dict)

    @property
    def is_proof(self) -> bool:
        return self.method == "EXACT"

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "method": self.method,
            "proof": self.is_proof,
            "witness": None if self.witness is None else sorted(repr(v) for v in self.witness),
            "checked": self.checked,
            **self.detail,
        }


# -- entropy and the expander threshold -------------------------------------

def binary_entropy(x) -> float:
    if not 0 <= x <= 1:
        raise DomainError(f"binary entropy needs x in [0, 1], got {x}")
    if x == 0 or x == 1:
        return 0.0
    return -x * math.log2(x) - (1 - x) * math.log2(1 - x)


def _entropy_mp(x: mpmath.mpf) -> mpmath.mpf:
    if x == 0 or x == 1:
        return mpmath.mpf(0)
    return -(x * mpmath.log(x, 2) + (1 - x) * mpmath.log(1 - x, 2))


def expander_threshold_margin(delta, alpha, beta) -> float:
    """``Delta - (H(a) + H(ab)) / (H(a) - ab H(1/b))``.

    Positive exactly when the degree condition for almost-sure
    ``(alpha, beta)``-expansion holds at these parameters.
    """
    if not 0 < alpha < 1 / beta < 1:
        raise DomainError(f"need 0 < alpha < 1/beta < 1, got alpha={alpha}, beta={beta}")
    a, b = float(alpha), float(beta)
    den = binary_entropy(a) - a * b * binary_entropy(1 / b)
    if den <= 0:
        raise DomainError("H(alpha) - alpha*beta*H(1/beta) must be positive")
    f = float(delta) - (binary_entropy(a) + binary_entropy(a * b)) / den
    if abs(f) < 0.5:
        # the interesting margins are ~0.1; redo them with 128-bit mantissas
        with mpmath.workprec(128):
            am = mpmath.mpf(as_fraction(alpha).numerator) / as_fraction(alpha).denominator
            bm = mpmath.mpf(as_fraction(beta).numerator) / as_fraction(beta).denominator
            dm = mpmath.mpf(as_fraction(delta).numerator) / as_fraction(delta).denominator
            den = _entropy_mp(am) - am * bm * _entropy_mp(1 / bm)
            f = float(dm - (_entropy_mp(am) + _entropy_mp(am * bm)) / den)
    return f


# -- regimes ------------------------------------------------------------------

def _sqrt_exact(delta) -> float | Fraction:
    if isinstance(delta, int) and math.isqrt(delta) ** 2 == delta:
        return Fraction(math.isqrt(delta))
    return math.sqrt(delta)


def regime_parameters(mode, delta, q: Optional[int] = None, force: bool = False) -> RegimeParams:
    mode = Regime(mode)
    if delta < 1:
        raise PreconditionError("delta must be positive")
    if mode is Regime.IS_HIGH:
        if delta < 53 and not force:
            raise RegimeError(f"high-fugacity regime needs Delta >= 53, got {delta}")
        zeta = Fraction(32, 25)
        d = as_fraction(delta) if isinstance(delta, int) else delta
        alpha = Fraction(29, 10) / d if isinstance(d, Fraction) else 2.9 / d
        beta = d / (Fraction(29, 10) * zeta) if isinstance(d, Fraction) else d / (2.9 * 1.28)
        return RegimeParams(mode, delta, alpha, beta, zeta=zeta, forced=force)
    if mode is Regime.IS_LOW:
        ln = math.log(delta)
        alpha = ln**2 / delta
        lambda_l = ln**4 / delta
        if lambda_l >= 1 and not force:
            raise RegimeError(
                f"low-fugacity regime is empty at Delta={delta}: lambda_l={lambda_l:.3g} >= 1"
            )
        return RegimeParams(mode, delta, alpha, 1 / (3 * alpha), lambda_l=lambda_l, forced=force)
    if q is None:
        raise PreconditionError("coloring regime needs q")
    if q < 2 or (q < 3 and not force):
        raise RegimeError(f"coloring regime needs q >= 3, got {q}")
    qh = (q + 1) // 2
    if delta < 100 * qh**10 and not force:
        raise RegimeError(f"coloring regime needs Delta >= 100*ceil(q/2)^10 = {100 * qh**10}")
    root = _sqrt_exact(delta)
    return RegimeParams(
        mode, delta, 1 / root, root / 3, q=q, s=Fraction(1, 18 * qh**5), forced=force
    )


# -- subset scans -------------------------------------------------------------

def _parse_mode(mode):
    """``"exact"``, ``"sampled"``, ``("sampled", k)`` or ``"auto"``."""
    if isinstance(mode, tuple):
        return mode[0].lower(), int(mode[1])
    mode = str(mode).lower()
    if mode.startswith("sampled(") and mode.endswith(")"):
        return "sampled", int(mode[8:-1])
    return mode, DEFAULT_SAMPLES


def _count_subsets(ground: int, sizes) -> int:
    return sum(math.comb(ground, k) for k in sizes)


def _resolve(mode, work: int, budget: int) -> tuple[str, int]:
    kind, k = _parse_mode(mode)
    if kind == "auto":
        kind = "exact" if work <= budget else "sampled"
    if kind == "exact" and work > budget:
        raise ResourceBudgetError(f"exact scan needs {work} subsets, budget is {budget}")
    if kind not in ("exact", "sampled"):
        raise PreconditionError(f"unknown mode {mode!r}")
    return kind, k


def _scan(G, groups, sizes, violates, kind, k, seed):
    """Look for a subset violating the predicate.

    ``groups`` is a list of vertex-id lists to draw subsets from.  Exact scans
    go size by size, group by group, combinations in lexicographic order, so
    the reported witness is the first violation in that order.
    """
    checked = 0
    rng = np.random.default_rng(seed)
    for size in sizes:
        for ids in groups:
            if size > len(ids):
                continue
            if kind == "exact":
                it = combinations(ids, size)
            else:
                arr = np.asarray(ids)
                it = (tuple(sorted(rng.choice(arr, size, replace=False).tolist())) for _ in range(k))
            for combo in it:
                checked += 1
                m = 0
                for i in combo:
                    m |= 1 << i
                if violates(m, size):
                    return G.vertices(m), checked
    return None, checked


def _verdict(G, groups, sizes, violates, mode, budget, seed, detail):
    work = sum(_count_subsets(len(ids), sizes) for ids in groups)
    kind, k = _resolve(mode, work, budget)
    witness, checked = _scan(G, groups, sizes, violates, kind, k, seed)
    detail = dict(detail)
    if kind == "sampled":
        detail["samples_per_size"] = k
    return PropertyVerdict(witness is None, kind.upper(), witness, checked, detail)


def _sides(G):
    return [list(range(G.n)), list(range(G.n, 2 * G.n))]


def _side_adjacency(G: BipartiteGraph) -> list[np.ndarray]:
    """0/1 matrices, row j = neighbours of vertex j of that side, as indices on the other side."""
    n = G.n
    mats = []
    for offset in (0, n):
        A = np.zeros((n, n), dtype=np.int32)
        for j in range(n):
            for u in G.adjacency[offset + j]:
                A[j, u - (n - offset)] = 1
        mats.append(A)
    return mats


def _sampled_expander(G: BipartiteGraph, beta: Fraction, sizes, k: int, seed: int) -> PropertyVerdict:
    """k uniform subsets per size and side, neighbourhoods via one matrix product per batch."""
    rng = np.random.default_rng(seed)
    n = G.n
    checked = 0
    for size in sizes:
        for side, A in enumerate(_side_adjacency(G)):
            picks = np.argsort(rng.random((k, n)), axis=1)[:, :size]
            ind = np.zeros((k, n), dtype=np.int32)
            np.put_along_axis(ind, picks, 1, axis=1)
            nsize = ((ind @ A) > 0).sum(axis=1)
            checked += k
            bad = np.nonzero(nsize * beta.denominator < beta.numerator * size)[0]
            if len(bad):
                ids = sorted(int(i) + side * n for i in picks[bad[0]])
                return PropertyVerdict(False, "SAMPLED", G.vertices(sum(1 << i for i in ids)), checked,
                                       {"property": "expander", "samples_per_size": k})
    return PropertyVerdict(True, "SAMPLED", None, checked, {"property": "expander", "samples_per_size": k})


def is_expander(G: BipartiteGraph, alpha, beta, mode="exact", budget: int = DEFAULT_EXACT_BUDGET,
                seed: int = 0) -> PropertyVerdict:
    """One-side subsets with ``|U| <= alpha*n`` must have ``|N(U)| >= beta*|U|``."""
    beta = as_fraction(beta)
    sizes = range(1, floor_product(alpha, G.n) + 1)
    kind, k = _parse_mode(mode)
    if kind == "sampled" or (kind == "auto" and
                             sum(_count_subsets(G.n, sizes) for _ in range(2)) > budget):
        verdict = _sampled_expander(G, beta, sizes, k, seed)
        verdict.detail.update(alpha=str(alpha), beta=str(beta))
        return verdict

    def violates(m, size):
        return G.nbr_of_mask(m).bit_count() < beta * size

    return _verdict(G, _sides(G), sizes, violates, mode, budget, seed,
                    {"property": "expander", "alpha": str(alpha), "beta": str(beta)})


def has_cover_property(G: BipartiteGraph, a, b, mode="exact", budget: int = DEFAULT_EXACT_BUDGET,
                       seed: int = 0) -> PropertyVerdict:
    """One-side subsets with ``|U| >= a*n`` must have ``|N(U)| > (1-b)*n``.

    N is monotone under inclusion, so only the smallest admissible size is
    scanned.
    """
    if as_fraction(a) <= 0:
        raise DomainError("cover property needs a > 0")
    size = strict_size_cap(a, G.n)  # ceil(a n)
    bound = (1 - as_fraction(b)) * G.n
    sizes = [size] if size <= G.n else []

    def violates(m, _size):
        return not G.nbr_of_mask(m).bit_count() > bound

    return _verdict(G, _sides(G), sizes, violates, mode, budget, seed,
                    {"property": "cover", "a": str(a), "b": str(b)})


def beta_minus_one_expansion_holds(G: BipartiteGraph, alpha, beta, mode="exact",
                                   budget: int = DEFAULT_EXACT_BUDGET, seed: int = 0) -> PropertyVerdict:
    """Mixed-side subsets with ``|U| <= alpha*n`` satisfy ``|N(U)| >= (beta-1)|U|``."""
    factor = as_fraction(beta) - 1
    sizes = range(1, floor_product(alpha, G.n) + 1)

    def violates(m, size):
        return (G.nbr_of_mask(m) & ~m).bit_count() < factor * size

    return _verdict(G, [list(range(2 * G.n))], sizes, violates, mode, budget, seed,
                    {"property": "beta-minus-one", "alpha": str(alpha), "beta": str(beta)})

