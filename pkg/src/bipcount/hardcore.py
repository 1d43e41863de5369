"""Hardcore model: ground clusters of one-sided independent sets.

Around the side X, an independent set is read as its trace on X, split into
G^2-components.  Each component is a polymer of weight
lam^|S| (lam+1)^-|N(S)|, and the cluster sum over |I cap X| < alpha_n equals
(lam+1)^n times the truncated polymer partition function.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import mpmath

from .driver import AlgorithmConfig, brute_estimate, combine, side_eps, structural_slack, use_brute_force
from .errors import ModelError, PreconditionError, RegimeError
from .expansion import Estimate, estimate_log_xi
from .graph import BipartiteGraph, L, R, Vertex, square_components_mask
from .numbers import strict_size_cap
from .oracle import count_is
from .polymer import DEFAULT_BUDGET, Polymer, PolymerModel, xi_exact
from .properties import Regime, regime_parameters

HIGH_RADIUS = 1.001
LOW_RADIUS = 2.0


def _support_mask(G: BipartiteGraph, gamma) -> int:
    if isinstance(gamma, Polymer):
        return gamma.support
    if isinstance(gamma, int):
        return gamma
    return G.mask(gamma)


def _weight(G: BipartiteGraph, supp: int, lam: Fraction) -> Fraction:
    nb = G.nbr_of_mask(supp) & ~supp
    return lam ** supp.bit_count() / (1 + lam) ** nb.bit_count()


def hardcore_weight(G: BipartiteGraph, gamma, lam, side: str | None = None) -> Fraction:
    """a_gamma = lam^|gamma| (lam+1)^-|N(gamma)| for a one-sided support."""
    supp = _support_mask(G, gamma)
    if not supp:
        raise ModelError("empty support")
    on_left, on_right = bool(supp & G.left_mask), bool(supp & G.right_mask)
    if on_left and on_right:
        raise ModelError("hardcore polymer support must lie on one side")
    if side is not None and not supp & G.side_mask(side) == supp:
        raise ModelError(f"support is off side {side}")
    return _weight(G, supp, Fraction(lam))


@dataclass(frozen=True)
class HardcoreParams:
    lambda_: Fraction
    side: str
    alpha_n: int

    def __post_init__(self):
        object.__setattr__(self, "lambda_", Fraction(self.lambda_))
        if self.lambda_ < 0:
            raise PreconditionError("fugacity must be non-negative")
        if self.side not in (L, R):
            raise PreconditionError(f"side must be L or R, got {self.side!r}")
        if self.alpha_n < 0:
            raise PreconditionError("alpha_n must be non-negative")


def build_hardcore_model(G: BipartiteGraph, params: HardcoreParams) -> PolymerModel:
    lam = params.lambda_
    return PolymerModel(
        graph=G,
        universe=G.side_mask(params.side),
        label_domain=lambda i: (1,),
        weight_base=lambda supp, labels: _weight(G, supp, lam),
        size_cap=params.alpha_n,
        labelings=lambda supp: ((1,) * supp.bit_count(),),
        structural_degree=G.n,
        name=f"hardcore[{params.side}, lam={lam}, cap={params.alpha_n}]",
    )


def z_cluster_via_polymers(G: BipartiteGraph, params: HardcoreParams, lam=None,
                           budget: int = DEFAULT_BUDGET) -> Fraction:
    """(lam+1)^n * Xi restricted to total size < alpha_n."""
    if lam is not None and Fraction(lam) != params.lambda_:
        params = HardcoreParams(Fraction(lam), params.side, params.alpha_n)
    model = build_hardcore_model(G, params)
    return (1 + params.lambda_) ** G.n * xi_exact(model, 1, params.alpha_n, budget)


def polymers_of_independent_set(G: BipartiteGraph, I: Iterable[Vertex], side: str, lam) -> list[Polymer]:
    """The G^2-components of I restricted to ``side``, as weighted polymers."""
    lam = Fraction(lam)
    trace = G.mask(I) & G.side_mask(side)
    return [Polymer(G, comp, (1,) * comp.bit_count(), _weight(G, comp, lam))
            for comp in square_components_mask(G, trace)]


def _regime_for(G: BipartiteGraph, lam: Fraction, force: bool):
    """High fugacity for lam >= 1, low fugacity below; returns (params, radius)."""
    if lam >= 1:
        return regime_parameters(Regime.IS_HIGH, G.delta, force=force), HIGH_RADIUS
    params = regime_parameters(Regime.IS_LOW, G.delta, force=force)
    if lam <= params.lambda_l and not force:
        raise RegimeError(f"low-fugacity regime needs lam > lambda_l = {params.lambda_l:.4g}, got {lam}")
    return params, LOW_RADIUS


def algorithm1(G: BipartiteGraph, lam, eps: float, cfg: AlgorithmConfig = AlgorithmConfig()) -> Estimate:
    """eps-relative estimate of Z(G, lam).

    Small instances (or tiny eps) go to the exact one-side sum.  Otherwise
    each side's cluster is estimated through its polymer expansion and the
    two are added: Z ~ (lam+1)^n (Xi_L + Xi_R).
    """
    lam = Fraction(lam)
    if lam < 0:
        raise PreconditionError("fugacity must be non-negative")
    n = G.n
    if use_brute_force(cfg, n, eps):
        return brute_estimate(count_is(G, lam), {"n": n, "lambda": str(lam)})

    regime, radius = _regime_for(G, lam, cfg.force)
    radius = cfg.radius if cfg.radius is not None else radius
    alpha = cfg.alpha if cfg.alpha is not None else regime.alpha
    alpha_n = cfg.alpha_n if cfg.alpha_n is not None else strict_size_cap(alpha, n)
    eps_prime = side_eps(cfg, n, eps)
    parts = [
        estimate_log_xi(build_hardcore_model(G, HardcoreParams(lam, side, alpha_n)),
                        eps_prime, radius, cfg.m_override, cfg.budget)
        for side in (L, R)
    ]
    with mpmath.workdps(50):
        log_pref = n * mpmath.log(mpmath.mpf(lam.numerator) / lam.denominator + 1)
    return combine(log_pref, (1 + lam) ** n, parts, structural_slack(cfg, n), {
        "n": n, "lambda": str(lam), "regime": regime.mode.value, "forced": cfg.force,
        "alpha_n": alpha_n, "radius": radius, "eps_prime": eps_prime,
    })


__all__ = [
    "HardcoreParams", "hardcore_weight", "build_hardcore_model", "z_cluster_via_polymers",
    "polymers_of_independent_set", "algorithm1", "HIGH_RADIUS", "LOW_RADIUS",
]
