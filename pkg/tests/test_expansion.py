import math
import random
from fractions import Fraction

import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from bipcount.coloring import ColorClass, build_coloring_model
from bipcount.errors import DomainError, MalformedInputError
from bipcount.expansion import (BRUTE_FORCE, Estimate, Series, estimate_log_xi, exp_series, log_series,
                                tail_bound, truncation_order, xi_coefficients)
from bipcount.generate import SampleConfig, sample_graph
from bipcount.graph import L
from bipcount.hardcore import HardcoreParams, build_hardcore_model
from bipcount.polymer import kp_check, xi_exact


def _hard(G, lam=1, cap=None):
    return build_hardcore_model(G, HardcoreParams(lam, L, G.n + 1 if cap is None else cap))


def test_coefficient_examples(k22):
    assert xi_coefficients(_hard(k22), 2).coefficients == (1, Fraction(1, 2), Fraction(1, 4))
    assert xi_coefficients(_hard(k22), 0).coefficients == (1,)
    col = build_coloring_model(k22, ColorClass(3, {1}))
    assert xi_coefficients(col, 1).coefficients == (1, 1)


def test_log_series_examples():
    assert log_series((1, Fraction(1, 2), Fraction(1, 4))).coefficients[1:] == (Fraction(1, 2), Fraction(1, 8))
    assert log_series((1,)).coefficients[1:] == ()
    assert log_series((1, Fraction(3, 7))).coefficients[1:] == (Fraction(3, 7),)
    with pytest.raises(MalformedInputError):
        log_series((2, 1))


def test_truncation_examples():
    assert truncation_order(4, 2, 0.01) == 6
    assert math.isclose(tail_bound(4, 2, 6), 8 / (128 * 7))
    assert tail_bound(4, 2, 5) > 0.02
    assert truncation_order(0, 2, 0.01) == 0
    assert truncation_order(1, 2, 10) == 0
    with pytest.raises(DomainError):
        truncation_order(4, 1, 0.01)


def test_estimate_examples(k22):
    model = _hard(k22)
    est = estimate_log_xi(model, 0.01, 2, m_override=2)
    assert float(est.log_value) == 0.625 and est.exact_value == Fraction(7, 4) and not est.certified
    est = estimate_log_xi(model, 0.01, 2, m_override=60)
    assert abs(est.log_value - mpmath.log(mpmath.mpf(7) / 4)) < 1e-9
    empty = estimate_log_xi(_hard(k22, cap=1), 0.01, 2)
    assert empty.log_value == 0 and empty.relative_error_bound == 0
    assert estimate_log_xi(model, 0.01, 2).diagnostics["truncation_order"] == 6


def test_high_order_uses_floats_and_stays_close(k22):
    est = estimate_log_xi(_hard(k22), 1e-30, 2, m_override=120)
    with mpmath.workdps(50):
        assert abs(est.log_value - mpmath.log(mpmath.mpf(7) / 4)) < 1e-25


def test_estimate_invariants():
    with pytest.raises(ValueError):
        Estimate(mpmath.mpf(0), -1.0, "POLYMER_PIPELINE")
    with pytest.raises(ValueError):
        Estimate(mpmath.mpf(0), 0.5, BRUTE_FORCE)


fractions = st.fractions(min_value=-5, max_value=5, max_denominator=20)


@settings(max_examples=200, deadline=None)
@given(st.lists(fractions, min_size=0, max_size=12))
def test_exp_log_round_trip(tail):
    c = Series((Fraction(1), *tail))
    assert exp_series(log_series(c)).coefficients == c.coefficients


def _brute_coefficients(model, m):
    polys = model.polymers(m)
    coeffs = [Fraction(0)] * (m + 1)

    def go(start, chosen, size, value):
        coeffs[size] += value
        for j in range(start, len(polys)):
            p = polys[j]
            if size + p.size <= m and all(not (p.support & c.closure) for c in chosen):
                go(j + 1, chosen + [p], size + p.size, value * p.weight)

    go(0, [], 0, Fraction(1))
    return tuple(coeffs)


graphs = st.builds(lambda n, d, s: sample_graph(SampleConfig(n, d, s)),
                   st.integers(1, 5), st.integers(1, 3), st.integers(0, 2**32))


@settings(max_examples=40, deadline=None)
@given(graphs, st.sampled_from([Fraction(1, 2), 1, 3]), st.integers(0, 6))
def test_coefficients_match_brute_force(G, lam, m):
    model = _hard(G, lam)
    assert xi_coefficients(model, m).coefficients == _brute_coefficients(model, m)


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32), st.sampled_from([3, 4]))
def test_coloring_coefficients_match_brute_force_and_vanish(n, delta, seed, q):
    G = sample_graph(SampleConfig(n, delta, seed))
    model = build_coloring_model(G, ColorClass.first(q, q // 2))
    full = xi_coefficients(model, 2 * n + 2).coefficients
    assert full[2 * n + 1:] == (0, 0)
    assert full[:4] == _brute_coefficients(model, min(3, 2 * n + 2))[:4]
    assert sum(full) == xi_exact(model)


@settings(max_examples=30, deadline=None)
@given(graphs)
def test_hardcore_coefficients_vanish_past_n(G):
    c = xi_coefficients(_hard(G), G.n + 3).coefficients
    assert c[G.n + 1:] == (0, 0, 0)


def test_tail_bound_sound_on_kp_certified_models():
    rng = random.Random(5)
    checked = 0
    for _ in range(60):
        G = sample_graph(SampleConfig(rng.randint(2, 5), rng.randint(1, 3), rng.randrange(2**32)))
        model = _hard(G, Fraction(1, rng.choice([8, 16, 32])))
        for radius in (1.5, 2.0):
            if not kp_check(model, 1.0, radius).holds:
                continue
            checked += 1
            target = mpmath.log(mpmath.mpf(xi_exact(model).numerator) / xi_exact(model).denominator)
            for m in range(1, 13):
                est = estimate_log_xi(model, 1, radius, m_override=m)
                assert abs(est.log_value - target) <= tail_bound(G.n, radius, m)
    assert checked > 0
