"""Shared plumbing for the two counting algorithms: the brute-force guard
and the log-space combination of per-cluster estimates."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import mpmath

from .errors import DomainError, PreconditionError
from .expansion import BRUTE_FORCE, POLYMER_PIPELINE, Estimate
from .numbers import log_fraction
from .polymer import DEFAULT_BUDGET

BRANCHES = ("auto", "brute", "polymer")


@dataclass(frozen=True)
class AlgorithmConfig:
    """Knobs for Algorithms 1 and 2.

    ``n_threshold`` and ``c_constant`` stand in for constants that are only
    shown to exist; the defaults are heuristics.  ``alpha`` / ``alpha_n``
    override the regime's polymer-size cap, ``radius`` the zero-free radius
    and ``m_override`` the certified truncation order.
    """

    n_threshold: int = 24
    c_constant: float = 1.01
    alpha: Optional[float | Fraction] = None
    alpha_n: Optional[int] = None
    m_override: Optional[int] = None
    radius: Optional[float] = None
    branch: str = "auto"
    force: bool = False
    budget: int = DEFAULT_BUDGET

    def __post_init__(self):
        if self.branch not in BRANCHES:
            raise PreconditionError(f"branch must be one of {BRANCHES}, got {self.branch!r}")
        if self.c_constant <= 1:
            raise PreconditionError("c_constant must exceed 1")
        if self.alpha_n is not None and self.alpha_n < 0:
            raise PreconditionError("alpha_n must be non-negative")


def structural_slack(cfg: AlgorithmConfig, n: int) -> float:
    """C^-n, the share of eps reserved for the cluster approximation."""
    return math.exp(-n * math.log(cfg.c_constant))


def use_brute_force(cfg: AlgorithmConfig, n: int, eps: float) -> bool:
    if eps <= 0:
        raise DomainError("eps must be positive")
    if cfg.branch != "auto":
        return cfg.branch == "brute"
    return n <= cfg.n_threshold or eps <= 2 * structural_slack(cfg, n)


def side_eps(cfg: AlgorithmConfig, n: int, eps: float) -> float:
    eps_prime = eps - structural_slack(cfg, n)
    if eps_prime <= 0:
        if cfg.m_override is None:
            raise DomainError(
                f"eps={eps} leaves nothing after the structural slack {structural_slack(cfg, n):.3g}; "
                "pass m_override or raise eps"
            )
        # truncation order is fixed by the override; eps' is only recorded
        return eps
    return eps_prime


def brute_estimate(value: Fraction, extra: dict) -> Estimate:
    return Estimate(log_fraction(value), 0.0, BRUTE_FORCE, True, Fraction(value),
                    {"branch": "brute", **extra})


def combine(log_prefactor: mpmath.mpf, exact_prefactor: Optional[Fraction],
            parts: Sequence[Estimate], slack: float, extra: dict) -> Estimate:
    """prefactor * (Xi_1 + ... + Xi_k) in log space.

    Error bounds add: each part is within its own bound of the true log, and
    log-sum-exp is 1-Lipschitz in every argument, so the sum is a valid
    (if loose) bound.  The structural slack C^-n is added on top.
    """
    with mpmath.workdps(50):
        log_value = log_prefactor + mpmath.log(mpmath.fsum(mpmath.exp(p.log_value) for p in parts))
    err = sum(p.relative_error_bound for p in parts) + slack
    exact = None
    if exact_prefactor is not None and all(p.exact_value is not None for p in parts):
        exact = exact_prefactor * sum((p.exact_value for p in parts), Fraction(0))
    diagnostics = {
        "branch": "polymer",
        "structural_slack": slack,
        "error_bound_heuristic_part": slack,
        "parts": [p.to_dict() for p in parts],
        **extra,
    }
    return Estimate(log_value, err, POLYMER_PIPELINE, all(p.certified for p in parts), exact, diagnostics)
