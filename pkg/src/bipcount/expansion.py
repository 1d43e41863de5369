"""Truncated cluster expansion of a polymer partition function.

Pipeline: coefficients c_0..c_m of Xi(z), the formal logarithm
p_1..p_m, a truncation order from the zero-free-disc tail bound, and the
log-space estimate sum_k p_k of ln Xi(1).
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .errors import DomainError, MalformedInputError, ResourceBudgetError
from .numbers import frac_str, log_fraction
from .polymer import DEFAULT_BUDGET, PolymerModel

# log series beyond this order switch from Fractions to mpmath floats
EXACT_LOG_ORDER = 64
LOG_DPS = 50

BRUTE_FORCE = "BRUTE_FORCE"
POLYMER_PIPELINE = "POLYMER_PIPELINE"


@dataclass(frozen=True)
class Series:
    coefficients: tuple

    @property
    def order(self) -> int:
        return len(self.coefficients) - 1

    def __getitem__(self, k):
        return self.coefficients[k]

    def __len__(self):
        return len(self.coefficients)

    def evaluate(self, z=1):
        total = 0
        for c in reversed(self.coefficients):
            total = total * z + c
        return total


@dataclass
class Estimate:
    log_value: mpmath.mpf
    relative_error_bound: float
    method: str
    certified: bool = True
    exact_value: Optional[Fraction] = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.relative_error_bound < 0:
            raise ValueError("error bound must be non-negative")
        if self.method == BRUTE_FORCE and self.relative_error_bound != 0:
            raise ValueError("brute-force estimates carry no error")

    @property
    def value(self) -> mpmath.mpf:
        return mpmath.exp(self.log_value)

    def to_dict(self) -> dict:
        return {
            "log_value": mpmath.nstr(self.log_value, 15),
            "relative_error_bound": float(self.relative_error_bound),
            "method": self.method,
            "certified": self.certified,
            "exact_value": None if self.exact_value is None else frac_str(self.exact_value),
            "diagnostics": self.diagnostics,
        }


# -- coefficients ------------------------------------------------------------

def xi_coefficients(model: PolymerModel, m: int, budget: int = DEFAULT_BUDGET) -> Series:
    """Exact c_0..c_m, c_k = sum over compatible sets of total size k.

    Recursion on the allowed-vertex set U with v = min(U): either no chosen
    polymer covers v, or exactly one does and its smallest vertex is v; in
    the latter case its closed G^2-neighbourhood leaves U.  States are
    memoised on U.
    """
    if m < 0:
        raise DomainError("order must be non-negative")
    polys = model.polymers(m) if m > 0 else []
    by_min: dict[int, list[tuple[int, int, int, Fraction]]] = {}
    for p in polys:
        by_min.setdefault(p.min_vertex, []).append((p.support, p.closure, p.size, p.weight))

    memo: dict[int, list[Fraction]] = {0: [Fraction(1)] + [Fraction(0)] * m}
    work = 0

    def solve(U: int) -> list[Fraction]:
        nonlocal work
        hit = memo.get(U)
        if hit is not None:
            return hit
        low = U & -U
        v = low.bit_length() - 1
        res = list(solve(U & ~low))
        for supp, clos, size, weight in by_min.get(v, ()):
            if supp & ~U:
                continue
            work += 1
            if work > budget:
                raise ResourceBudgetError(f"coefficient extraction exceeded budget {budget}")
            sub = solve(U & ~clos)
            for k in range(m - size + 1):
                if sub[k]:
                    res[k + size] += weight * sub[k]
        memo[U] = res
        return res

    # only vertices that start some polymer matter; the others just fall away
    U = model.universe
    coeffs = solve(U) if polys else memo[0]
    return Series(tuple(coeffs))


# -- formal log / exp ----------------------------------------------------------

def log_series(xi: Series | Sequence, exact: bool = True) -> Series:
    """Coefficients (0, p_1, ..., p_m) of ln(sum_k c_k z^k), requiring c_0 = 1.

    k p_k = k c_k - sum_{j=1}^{k-1} j p_j c_{k-j}.
    """
    c = list(xi.coefficients if isinstance(xi, Series) else xi)
    if not c or c[0] != 1:
        raise MalformedInputError("log series needs constant coefficient 1")
    if not exact:
        c = [mpmath.mpf(x.numerator) / x.denominator if isinstance(x, Fraction) else mpmath.mpf(x)
             for x in c]
    m = len(c) - 1
    # indices j with c_j != 0, so long sparse tails stay cheap
    support = [j for j in range(1, m + 1) if c[j]]
    p = [0] * (m + 1)
    for k in range(1, m + 1):
        acc = k * c[k]
        for j in support:
            if j >= k:
                break
            acc -= (k - j) * p[k - j] * c[j]
        p[k] = acc / k if not exact else Fraction(acc) / k
    p[0] = Fraction(0) if exact else mpmath.mpf(0)
    return Series(tuple(p))


def exp_series(log: Series | Sequence) -> Series:
    """Inverse of :func:`log_series`: k c_k = sum_{j=1}^{k} j p_j c_{k-j}."""
    p = list(log.coefficients if isinstance(log, Series) else log)
    if p and p[0] != 0:
        raise MalformedInputError("log series must have zero constant term")
    m = len(p) - 1
    c = [Fraction(1)] + [Fraction(0)] * m
    for k in range(1, m + 1):
        acc = sum(j * p[j] * c[k - j] for j in range(1, k + 1))
        c[k] = Fraction(acc) / k
    return Series(tuple(c))


# -- truncation ---------------------------------------------------------------

def tail_bound(degree: int, radius: float, m: int) -> float:
    """Bound on |sum_{k>m} p_k| when Xi has at most ``degree`` roots, all with |z| >= radius."""
    if degree == 0:
        return 0.0
    if radius <= 1:
        raise DomainError("radius must exceed 1")
    # computed in logs; R^-(m+1) underflows long before m stops mattering
    log_t = math.log(degree) - (m + 1) * math.log(radius) - math.log(m + 1) - math.log1p(-1 / radius)
    return math.exp(log_t)


def truncation_order(degree: int, radius: float, eps: float) -> int:
    if radius <= 1:
        raise DomainError("radius must exceed 1")
    if eps <= 0:
        raise DomainError("eps must be positive")
    if degree == 0:
        return 0
    m = 0
    while tail_bound(degree, radius, m) > eps:
        m += 1
    return m


# -- estimate -----------------------------------------------------------------

def estimate_log_xi(model: PolymerModel, eps: float, radius: float,
                    m_override: Optional[int] = None, budget: int = DEFAULT_BUDGET) -> Estimate:
    """ln Xi(1) from the order-m truncated cluster expansion.

    When the coefficients up to the structural degree have all been computed
    (``m >= degree``) the exact value of Xi(1) is attached as well.
    """
    t0 = time.perf_counter()
    degree = model.structural_degree
    m = truncation_order(degree, radius, eps) if m_override is None else int(m_override)
    known = min(m, degree)
    xi = xi_coefficients(model, known, budget)
    n_polys = len(model.polymers(known)) if known > 0 else 0
    t1 = time.perf_counter()
    diagnostics = {
        "model": model.name,
        "truncation_order": m,
        "radius": radius,
        "degree": degree,
        "polymer_count": n_polys,
        "xi_coefficients": [frac_str(c) for c in xi.coefficients],
    }
    exact_value = sum(xi.coefficients, Fraction(0)) if m >= degree else None
    if n_polys == 0 and (m >= degree or known >= model.max_polymer_size):
        # no polymers at all: Xi is identically 1
        diagnostics["timings"] = {"coefficients_s": t1 - t0, "log_series_s": 0.0}
        return Estimate(mpmath.mpf(0), 0.0, POLYMER_PIPELINE, m_override is None, Fraction(1), diagnostics)
    full = list(xi.coefficients) + [Fraction(0)] * (m - known)
    with mpmath.workdps(LOG_DPS):
        logs = log_series(full, exact=m <= EXACT_LOG_ORDER)
        log_value = mpmath.fsum(
            mpmath.mpf(c.numerator) / c.denominator if isinstance(c, Fraction) else c
            for c in logs.coefficients
        )
    diagnostics["timings"] = {"coefficients_s": t1 - t0, "log_series_s": time.perf_counter() - t1}
    if exact_value is not None:
        diagnostics["log_exact"] = mpmath.nstr(log_fraction(exact_value), 15)
    return Estimate(log_value, tail_bound(degree, radius, m), POLYMER_PIPELINE,
                    certified=m_override is None, exact_value=exact_value, diagnostics=diagnostics)
