import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bipcount.coloring import ColorClass, build_coloring_model
from bipcount.errors import ResourceBudgetError
from bipcount.generate import SampleConfig, sample_graph
from bipcount.graph import L, left, right
from bipcount.hardcore import HardcoreParams, build_hardcore_model
from bipcount.polymer import (Polymer, compatible, enumerate_polymers, enumerate_supports, kp_check,
                              kp_parameter, support_masks, xi_exact)


def _poly(G, vertices):
    m = G.mask(vertices)
    return Polymer(G, m, (1,) * m.bit_count(), Fraction(1))


def test_compatibility_examples(k22, two_edges):
    assert not compatible(_poly(k22, [left(0)]), _poly(k22, [left(1)]))
    assert compatible(_poly(two_edges, [left(0)]), _poly(two_edges, [left(1)]))
    p = _poly(k22, [left(0)])
    assert not compatible(p, p)


def test_enumerate_supports_examples(k22):
    full = {left(0), left(1), right(0), right(1)}
    got = enumerate_supports(k22, full, left(0), 2)
    assert got == [{left(0)}, {left(0), left(1)}, {left(0), right(0)}, {left(0), right(1)}]
    assert enumerate_supports(k22, {left(0), left(1)}, left(0), 2) == [{left(0)}, {left(0), left(1)}]
    assert enumerate_supports(k22, full, left(0), 1) == [{left(0)}]


def test_enumerate_polymers_examples(k22):
    hard = build_hardcore_model(k22, HardcoreParams(1, L, 3))
    assert [p.vertices for p in enumerate_polymers(hard, 2)] == [{left(0)}, {left(0), left(1)}, {left(1)}]
    col = build_coloring_model(k22, ColorClass(3, {1}))
    polys = enumerate_polymers(col, 1)
    assert [(p.vertices, p.labels) for p in polys] == [
        ({left(0)}, (2,)), ({left(0)}, (3,)), ({left(1)}, (2,)), ({left(1)}, (3,))]
    assert enumerate_polymers(hard, 0) == []


def test_xi_exact_examples(k22):
    model = build_hardcore_model(k22, HardcoreParams(1, L, 10))
    assert xi_exact(model) == Fraction(7, 4)
    assert xi_exact(model, size_cap=2) == Fraction(3, 2)
    assert xi_exact(model, z=0) == 1
    assert xi_exact(model, size_cap=0) == 0


def test_xi_exact_budget():
    G = sample_graph(SampleConfig(6, 1, 0))
    model = build_hardcore_model(G, HardcoreParams(1, L, 7))
    with pytest.raises(ResourceBudgetError):
        xi_exact(model, budget=10)


def test_kp_examples(k22, k11):
    t = kp_parameter()
    assert 0.345 < t < 0.347
    rep = kp_check(build_hardcore_model(k22, HardcoreParams(1, L, 10)), t, 1)
    assert abs(rep.max_ratio - 3.49) <= 0.01 and rep.argmax.vertices == {left(0)}
    expected = (2 * math.exp(t) + math.exp(2 * t)) / 4 / t
    assert math.isclose(rep.max_ratio, expected, rel_tol=1e-12) and not rep.holds
    rep = kp_check(build_hardcore_model(k11, HardcoreParams(Fraction(1, 10), L, 10)), 0.346, 1)
    assert math.isclose(rep.max_ratio, math.exp(0.346) * (1 / 11) / 0.346, rel_tol=1e-12)
    assert abs(rep.max_ratio - 0.371) < 1e-3 and rep.holds
    empty = build_hardcore_model(k22, HardcoreParams(1, L, 1))
    assert kp_check(empty, t, 1).max_ratio == 0


graphs = st.builds(lambda n, d, s: sample_graph(SampleConfig(n, d, s)),
                   st.integers(1, 6), st.integers(1, 3), st.integers(0, 2**32))


def _connected_in_square(G, mask):
    from bipcount.graph import square_components_mask
    return len(square_components_mask(G, mask)) == 1


@settings(max_examples=40, deadline=None)
@given(graphs, st.integers(1, 4))
def test_supports_unique_connected_and_bounded(G, k):
    for root in range(2 * G.n):
        masks = list(support_masks(G, G.all_mask, root, k))
        assert len(masks) == len(set(masks))
        for m in masks:
            assert (m >> root) & 1 and m.bit_count() <= k and _connected_in_square(G, m)
        brute = [m for m in range(1 << (2 * G.n))
                 if (m >> root) & 1 and m.bit_count() <= k and _connected_in_square(G, m)]
        assert sorted(masks) == sorted(brute)
        for size in range(2, k + 1):
            count = sum(m.bit_count() == size for m in masks)
            assert count <= (math.e * G.delta**2) ** (size - 1)


@settings(max_examples=40, deadline=None)
@given(graphs)
def test_compatibility_symmetric_never_reflexive(G):
    polys = build_hardcore_model(G, HardcoreParams(1, L, 4)).polymers()
    for a in polys:
        assert not compatible(a, a)
        for b in polys:
            assert compatible(a, b) == compatible(b, a)


@settings(max_examples=25, deadline=None)
@given(graphs, st.sampled_from([Fraction(1, 20), Fraction(1, 10), Fraction(1, 4)]))
def test_kp_pass_excludes_real_roots(G, lam):
    model = build_hardcore_model(G, HardcoreParams(lam, L, G.n + 1))
    radius = 1.5
    if not kp_check(model, 1.0, radius).holds:
        return
    from bipcount.expansion import xi_coefficients
    c = [float(x) for x in xi_coefficients(model, G.n).coefficients]
    roots = np.roots(c[::-1]) if len(c) > 1 and any(c[1:]) else []
    for r in roots:
        assert abs(r) >= radius * (1 - 1e-9)
    grid = np.linspace(-radius * 0.999, radius * 0.999, 301)
    values = [float(xi_exact(model, Fraction(x))) for x in grid]
    assert all(v > 0 for v in values)
