import pytest

from bipcount.generate import SampleConfig, sample_graph
from bipcount.graph import build_graph, complete_bipartite_22


@pytest.fixture
def k22():
    return complete_bipartite_22()


@pytest.fixture
def two_edges():
    """n=2, Delta=1, identity matching: l0-r0 and l1-r1, nothing else."""
    return build_graph(2, 1, [[0, 1]])


@pytest.fixture
def k11():
    return build_graph(1, 1, [[0]])


def small_graphs(max_n, max_delta, per_shape, seed0=0):
    """A deterministic spread of sampled graphs over every (n, delta) shape."""
    out = []
    for n in range(1, max_n + 1):
        for delta in range(1, max_delta + 1):
            for s in range(per_shape):
                out.append(sample_graph(SampleConfig(n, delta, seed0 + 1000 * n + 100 * delta + s)))
    return out


def pytest_terminal_summary(terminalreporter):
    import test_acceptance

    if test_acceptance.RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in test_acceptance.RESULTS:
            terminalreporter.write_line(line)
