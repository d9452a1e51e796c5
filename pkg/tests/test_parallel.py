import numpy as np
import pytest

from medcon.consensus import delta_d, init_singletons
from medcon.errors import SizeError
from medcon.models.consensus import ConsensusState
from medcon.models.graph import Graph
from medcon.models.partition import Partition, build_membership_matrix
from medcon.parallel import (ProposalEvaluator, cluster_label_counts, lookup_counts, propose_range,
                             range_label_counts, split_balanced)
from medcon.synth import generate_planted, make_ensemble

from tests.factories import PlantedPartitionSpecFactory


def test_label_counts():
    entries = np.array([[0, 0], [0, 0], [1, 0], [1, 1]])
    assignment = np.array([0, 0, 0, 3])
    keys, counts = cluster_label_counts(assignment, entries)
    n, k = entries.shape

    def count(c, j, label):
        return int(lookup_counts(keys, counts, np.array([(c * k + j) * n + label]))[0])

    assert count(0, 0, 0) == 2
    assert count(0, 0, 1) == 1
    assert count(0, 1, 0) == 3
    assert count(3, 1, 1) == 1
    assert count(1, 0, 0) == 0
    assert keys.shape[0] <= n * k


def test_count_key_overflow_is_refused():
    class Shaped:
        # n = 2**28, k = 64: n * n * k reaches 2**62
        shape = (2 ** 28, 64)

    with pytest.raises(SizeError):
        cluster_label_counts(None, Shaped())


def test_split_balanced_covers_all_vertices():
    graph = Graph.from_edges(6, [(0, 1), (0, 2), (0, 3), (0, 4), (0, 5)])
    ranges = split_balanced(graph.indptr, 3, 3)
    assert ranges[0][0] == 0
    assert ranges[-1][1] == 6
    for (_, hi), (lo, _) in zip(ranges, ranges[1:]):
        assert hi == lo
    assert split_balanced(np.zeros(1, dtype=np.int64), 3, 4) == []


def test_propose_range_deltas_match_delta_d():
    spec = PlantedPartitionSpecFactory(q=3, s=15, p_in=0.4, p_out=0.05, seed=3)
    graph, truth = generate_planted(spec)
    ensemble = make_ensemble(truth, 5, 0.3, seed=3)
    mm = build_membership_matrix(ensemble)
    state = ConsensusState(np.arange(graph.n) // 4)

    vertex, source, target, delta = propose_range(
        0, graph.n, state.snapshot(), graph.indptr, graph.indices, mm.entries, chunk_edges=16)
    assert np.all(np.diff(vertex) > 0)
    assert np.all(delta < 0)
    for v, a, b, d in zip(vertex.tolist(), source.tolist(), target.tolist(), delta.tolist()):
        assert a == state.cluster_of(v)
        assert delta_d(state, mm, v, b) == d


def test_range_table_keeps_only_touched_clusters():
    spec = PlantedPartitionSpecFactory(q=3, s=40, p_in=0.3, p_out=0.01, seed=4)
    graph, truth = generate_planted(spec)
    mm = build_membership_matrix(make_ensemble(truth, 5, 0.3, seed=4))
    n, k = mm.entries.shape
    assignment = np.arange(graph.n, dtype=np.int64) // 3
    full = cluster_label_counts(assignment, mm.entries)

    lo, hi = 10, 14
    keys, counts = range_label_counts(lo, hi, assignment, graph.indptr, graph.indices, mm.entries)
    neighbors = graph.indices[graph.indptr[lo]:graph.indptr[hi]]
    touched = set(assignment[lo:hi].tolist()) | set(assignment[neighbors].tolist())
    assert set((keys // (k * n)).tolist()) == touched
    assert lookup_counts(*full, keys).tolist() == counts.tolist()
    assert keys.shape[0] < full[0].shape[0]

    restricted = propose_range(lo, hi, assignment, graph.indptr, graph.indices, mm.entries, chunk_edges=8)
    whole = propose_range(lo, hi, assignment, graph.indptr, graph.indices, mm.entries, chunk_edges=8, table=full)
    for ours, theirs in zip(restricted, whole):
        assert ours.tolist() == theirs.tolist()

    everything = range_label_counts(0, graph.n, assignment, graph.indptr, graph.indices, mm.entries)
    assert everything[0].tolist() == full[0].tolist()


def test_evaluator_pool_matches_in_process():
    spec = PlantedPartitionSpecFactory(q=4, s=20, p_in=0.3, p_out=0.05, seed=8)
    graph, truth = generate_planted(spec)
    mm = build_membership_matrix(make_ensemble(truth, 6, 0.2, seed=8))
    snapshot = init_singletons(graph).snapshot()

    with ProposalEvaluator(graph, mm, workers=1) as serial:
        expected = serial.propose(snapshot)
    with ProposalEvaluator(graph, mm, workers=3, chunk_edges=32) as pooled:
        assert pooled._pool is not None
        got = pooled.propose(snapshot)
        again = pooled.propose(snapshot)

    for left, right, repeat in zip(expected, got, again):
        assert np.array_equal(left, right)
        assert np.array_equal(right, repeat)


def test_evaluator_without_edges():
    graph = Graph.empty(3)
    mm = build_membership_matrix([Partition([0, 0, 1])])
    with ProposalEvaluator(graph, mm, workers=2) as evaluator:
        columns = evaluator.propose(init_singletons(graph).snapshot())
    assert all(column.shape == (0,) for column in columns)
