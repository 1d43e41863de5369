from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from bipcount.driver import AlgorithmConfig
from bipcount.errors import DomainError, ModelError, PreconditionError, RegimeError
from bipcount.generate import SampleConfig, sample_graph
from bipcount.graph import L, R, left, right
from bipcount.hardcore import (HardcoreParams, algorithm1, build_hardcore_model, hardcore_weight,
                               polymers_of_independent_set, z_cluster_via_polymers)
from bipcount.numbers import leq_rational_power, strict_size_cap
from bipcount.oracle import count_is, count_is_cluster, independent_sets
from bipcount.polymer import compatible
from bipcount.properties import is_expander

from conftest import small_graphs


def test_weight_examples(k22):
    assert hardcore_weight(k22, [left(0)], 1) == Fraction(1, 4)
    assert hardcore_weight(k22, [left(0)], 2) == Fraction(2, 9)
    assert hardcore_weight(k22, [left(0), left(1)], 1) == Fraction(1, 4)
    with pytest.raises(ModelError):
        hardcore_weight(k22, [left(0), right(0)], 1)
    with pytest.raises(ModelError):
        hardcore_weight(k22, [right(0)], 1, side=L)


def test_model_examples(k22):
    supports = lambda cap: [p.vertices for p in build_hardcore_model(k22, HardcoreParams(1, L, cap)).polymers()]
    assert supports(2) == [{left(0)}, {left(1)}]
    assert supports(3) == [{left(0)}, {left(0), left(1)}, {left(1)}]
    assert supports(0) == []


def test_cluster_examples(k22):
    assert z_cluster_via_polymers(k22, HardcoreParams(1, L, 2)) == 6 == count_is_cluster(k22, L, 2, 1)
    assert z_cluster_via_polymers(k22, HardcoreParams(1, L, 3)) == 7 == count_is(k22, 1)
    assert z_cluster_via_polymers(k22, HardcoreParams(0, L, 2)) == 1


def test_params_validation():
    with pytest.raises(PreconditionError):
        HardcoreParams(-1, L, 2)
    with pytest.raises(PreconditionError):
        HardcoreParams(1, "X", 2)


def test_algorithm1_brute(k22):
    est = algorithm1(k22, 1, 0.1, AlgorithmConfig(n_threshold=10))
    assert est.exact_value == 7 and est.relative_error_bound == 0 and est.diagnostics["branch"] == "brute"


def test_algorithm1_forced_polymer(k22):
    cfg = AlgorithmConfig(branch="polymer", force=True, alpha_n=3, m_override=2)
    est = algorithm1(k22, 1, 0.1, cfg)
    assert est.exact_value == 14 and est.diagnostics["branch"] == "polymer"
    zero = algorithm1(k22, 0, 0.1, AlgorithmConfig(branch="polymer", force=True, m_override=2))
    assert zero.exact_value == 2 and algorithm1(k22, 0, 0.1).exact_value == 1


def test_algorithm1_regime_checks(k22):
    with pytest.raises(RegimeError):
        algorithm1(k22, 1, 0.1, AlgorithmConfig(branch="polymer"))
    with pytest.raises(RegimeError):
        algorithm1(k22, Fraction(1, 10), 0.1, AlgorithmConfig(branch="polymer"))
    with pytest.raises(DomainError):
        algorithm1(k22, 1, 0.1, AlgorithmConfig(branch="polymer", force=True))
    with pytest.raises(DomainError):
        algorithm1(k22, 1, 0)


def test_algorithm1_branch_rule():
    G = sample_graph(SampleConfig(20, 3, 0))
    cfg = AlgorithmConfig(n_threshold=10, c_constant=2, force=True, m_override=3, alpha_n=2)
    # 2 * 2^-20 ~ 1.9e-6: eps below that is sent to brute force, above it is not
    assert algorithm1(G, 1, 1e-7, cfg).method == "BRUTE_FORCE"
    est = algorithm1(G, 1, 0.5, cfg)
    assert est.method == "POLYMER_PIPELINE" and not est.certified
    assert est.diagnostics["structural_slack"] == pytest.approx(2.0**-20)


def test_polymer_branch_matches_log_of_exact_value():
    G = sample_graph(SampleConfig(4, 2, 3))
    est = algorithm1(G, 2, 0.1, AlgorithmConfig(branch="polymer", force=True, alpha_n=5, m_override=40))
    with mpmath.workdps(30):
        exact = mpmath.log(mpmath.mpf(est.exact_value.numerator) / est.exact_value.denominator)
    assert abs(est.log_value - exact) < 1e-6


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 4), st.integers(1, 3), st.integers(0, 2**32), st.sampled_from([L, R]),
       st.sampled_from([Fraction(1, 2), 1, 2]))
def test_independent_sets_map_to_compatible_polymers(n, delta, seed, side, lam):
    G = sample_graph(SampleConfig(n, delta, seed))
    for I in independent_sets(G):
        polys = polymers_of_independent_set(G, I, side, lam)
        assert sum(p.size for p in polys) == len([v for v in I if v.side == side])
        for a in polys:
            for b in polys:
                assert a is b or compatible(a, b)


def test_set_identity_union_intersection():
    from bipcount.oracle import count_is_intersection, count_is_union
    for G in small_graphs(4, 3, 2):
        for lam in (Fraction(1, 2), 1, 2):
            for cap in range(0, G.n + 2):
                lhs = count_is_cluster(G, L, cap, lam) + count_is_cluster(G, R, cap, lam)
                assert lhs == count_is_union(G, cap, lam) + count_is_intersection(G, cap, lam)


def test_decay_high_fugacity():
    alpha, beta = Fraction(1, 3), Fraction(2)
    seen = 0
    for G in small_graphs(6, 3, 3):
        if G.n < 3 or not is_expander(G, alpha, beta).holds:
            continue
        for lam in (1, 2, 5):
            for side in (L, R):
                model = build_hardcore_model(G, HardcoreParams(lam, side, strict_size_cap(alpha, G.n)))
                for p in model.polymers():
                    seen += 1
                    assert leq_rational_power(p.weight, Fraction(1, 2), beta * p.size)
    assert seen > 0
