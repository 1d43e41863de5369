import math

import pytest
from hypothesis import given, settings, strategies as st

from bipcount.errors import MalformedInputError, PreconditionError
from bipcount.generate import SampleConfig, sample_graph
from bipcount.graph import (INFINITY, build_graph, distance, left, neighborhood, parse_graph, right,
                            square_components, to_json, to_text)


def test_k22_is_four_cycle(k22):
    for j in range(2):
        assert set(k22.neighbors(left(j))) == {right(0), right(1)}
        assert k22.degree(left(j)) == 2 == k22.degree(right(j))


def test_single_edge():
    G = build_graph(1, 1, [[0]])
    assert G.neighbors(left(0)) == (right(0),)
    assert G.edges() == [(left(0), right(0))]


def test_double_edges_keep_degree():
    G = build_graph(2, 2, [[0, 1], [0, 1]])
    assert G.neighbors(left(0)) == (right(0), right(0))
    assert all(G.degree(v) == 2 for v in map(left, range(2)))
    assert G.square_adjacency(left(0)) == {right(0)}


@pytest.mark.parametrize("matchings", [[[0, 0]], [[0, 1], [1]], [[0, 2]]])
def test_non_bijection_rejected(matchings):
    with pytest.raises(MalformedInputError):
        build_graph(2, len(matchings), matchings)


def test_wrong_number_of_matchings():
    with pytest.raises(MalformedInputError):
        build_graph(2, 2, [[0, 1]])


def test_neighborhood_examples(k22):
    assert neighborhood(k22, {left(0)}) == {right(0), right(1)}
    assert neighborhood(k22, {left(0), right(0)}) == {left(1), right(1)}
    everything = {left(0), left(1), right(0), right(1)}
    assert neighborhood(k22, everything) == frozenset()
    with pytest.raises(PreconditionError):
        neighborhood(k22, set())


def test_square_components(k22, two_edges):
    assert square_components(k22, {left(0), left(1)}) == [frozenset({left(0), left(1)})]
    comps = square_components(two_edges, {left(0), left(1)})
    assert sorted(map(sorted, comps)) == [[left(0)], [left(1)]]
    assert square_components(k22, set()) == []


def test_distance(k22, two_edges):
    assert distance(k22, left(0), left(1)) == 2
    assert distance(k22, right(1), right(1)) == 0
    assert distance(two_edges, left(0), right(1)) == INFINITY


def test_parse_errors_carry_line_numbers():
    with pytest.raises(MalformedInputError, match="line 3"):
        parse_graph("2 2\n0 1\n1 1\n")
    with pytest.raises(MalformedInputError, match="line 2"):
        parse_graph("2 1\n0 x\n")
    with pytest.raises(MalformedInputError, match="line 1"):
        parse_graph("2\n")
    with pytest.raises(MalformedInputError):
        parse_graph('{"n": 2,')


def test_text_comments():
    G = parse_graph("# header\n2 1  # n delta\n\n1 0\n")
    assert G.matchings == ((1, 0),)


graphs = st.builds(
    lambda n, d, s: sample_graph(SampleConfig(n, d, s)),
    st.integers(1, 7), st.integers(1, 4), st.integers(0, 2**32),
)


@settings(max_examples=60, deadline=None)
@given(graphs)
def test_round_trip(G):
    assert parse_graph(to_json(G)) == G
    assert parse_graph(to_text(G)) == G
    assert parse_graph(to_json(G)).fingerprint() == G.fingerprint()


@settings(max_examples=60, deadline=None)
@given(graphs)
def test_square_adjacency_is_distance_at_most_two(G):
    verts = [left(j) for j in range(G.n)] + [right(j) for j in range(G.n)]
    for u in verts:
        sq = G.square_adjacency(u)
        assert len(sq) <= G.delta**2
        for v in verts:
            assert (v in sq) == (u != v and distance(G, u, v) <= 2)


@settings(max_examples=60, deadline=None)
@given(graphs, st.data())
def test_neighbourhood_and_components(G, data):
    verts = [left(j) for j in range(G.n)] + [right(j) for j in range(G.n)]
    U = set(data.draw(st.lists(st.sampled_from(verts), min_size=1, unique=True)))
    assert not neighborhood(G, U) & U
    comps = square_components(G, U)
    assert set().union(*comps) == U
    for a in comps:
        for b in comps:
            if a is not b:
                assert all(distance(G, u, v) > 2 for u in a for v in b)
    assert math.isfinite(len(comps))
