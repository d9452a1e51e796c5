"""
Shared fixtures and hypothesis strategies
"""
import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from medcon import create_app
from medcon.models.graph import Graph
from medcon.models.partition import Partition

settings.register_profile('fast', max_examples=50, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile('thorough', max_examples=500, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get('HYPOTHESIS_PROFILE', 'fast'))


@pytest.fixture
def app():
    app = create_app('testing')
    yield app


@pytest.fixture
def client(app):
    return app.test_client()


@pytest.fixture
def runner(app):
    return app.test_cli_runner()


@pytest.fixture
def path_graph():
    """0 - 1 - 2 - 3"""
    return Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def small_ensemble():
    return [Partition([0, 0, 1, 1]), Partition([0, 0, 0, 1])]


def labels_of_size(n, max_label=6):
    return st.lists(st.integers(0, max_label), min_size=n, max_size=n)


@st.composite
def partition_pairs(draw, max_n=50):
    n = draw(st.integers(1, max_n))
    return Partition(draw(labels_of_size(n))), Partition(draw(labels_of_size(n)))


@st.composite
def partition_triples(draw, max_n=40):
    n = draw(st.integers(1, max_n))
    return tuple(Partition(draw(labels_of_size(n))) for _ in range(3))


@st.composite
def ensembles(draw, max_n=30, max_k=6):
    """(candidate, ensemble) on a common vertex count"""
    n = draw(st.integers(1, max_n))
    k = draw(st.integers(1, max_k))
    ensemble = [Partition(draw(labels_of_size(n, 4))) for _ in range(k)]
    return Partition(draw(labels_of_size(n, 4))), ensemble


@st.composite
def graph_instances(draw, max_n=25, max_k=5):
    """(graph, ensemble, assignment) with a random simple graph"""
    n = draw(st.integers(2, max_n))
    k = draw(st.integers(1, max_k))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), max_size=3 * n, unique=True))
    graph = Graph.from_edges(n, np.asarray(chosen, dtype=np.int64).reshape(-1, 2))
    ensemble = [Partition(draw(labels_of_size(n, 3))) for _ in range(k)]
    assignment = draw(st.lists(st.integers(0, n - 1), min_size=n, max_size=n))
    return graph, ensemble, assignment
