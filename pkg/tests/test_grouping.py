import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from medcon.errors import DimensionError, RangeError, ValidationError
from medcon.grouping import (DEFAULT_GRID, build_distance_graph, group_ensemble, lambda_sweep, select_lambda,
                             threshold_components)
from medcon.models.grouping import EnsembleGrouping, PartitionDistanceGraph, SweepRecord
from medcon.models.partition import Partition

from tests.conftest import labels_of_size

SIDE = 12


def _moved(labels, vertex, label):
    labels = list(labels)
    labels[vertex] = label
    return Partition(labels)


def two_families():
    """Row blocks and column blocks of a 12 x 12 grid, each with two one-vertex variants"""
    rows = [v // SIDE for v in range(SIDE * SIDE)]
    cols = [v % SIDE for v in range(SIDE * SIDE)]
    last = SIDE * SIDE - 1
    return [
        Partition(rows), _moved(rows, 0, 1), _moved(rows, last, SIDE - 2),
        Partition(cols), _moved(cols, 0, 1), _moved(cols, last, SIDE - 2),
    ]


def test_distance_graph_examples():
    pdg = build_distance_graph([Partition([0, 0, 1, 1]), Partition([0, 0, 0, 1])])
    assert pdg.k == 2
    assert pdg.weights[0, 1] == pytest.approx(0.25)

    same = build_distance_graph([Partition([0, 1, 1]), Partition([5, 7, 7])])
    assert same.weights[0, 1] == 0.0

    single = build_distance_graph([Partition([0, 1])])
    assert single.weights.tolist() == [[0.0]]

    with pytest.raises(DimensionError):
        build_distance_graph([])


def test_distance_graph_validation():
    with pytest.raises(ValidationError):
        PartitionDistanceGraph([[0.0, 0.1], [0.2, 0.0]])
    with pytest.raises(ValidationError):
        PartitionDistanceGraph([[0.5]])


def test_threshold_extremes():
    ensemble = [Partition([0, 0, 1, 1]), Partition([0, 0, 0, 1]), Partition([0, 1, 2, 3])]
    pdg = build_distance_graph(ensemble)
    assert threshold_components(pdg, 1.0).groups == [[0, 1, 2]]
    assert threshold_components(pdg, 0.0).groups == [[0], [1], [2]]
    with pytest.raises(RangeError):
        threshold_components(pdg, 1.5)


def test_two_families_split_into_two_groups():
    ensemble = two_families()
    pdg = build_distance_graph(ensemble)

    within = [pdg.weights[i, j] for i in range(3) for j in range(3)] + \
             [pdg.weights[i, j] for i in range(3, 6) for j in range(3, 6)]
    across = [pdg.weights[i, j] for i in range(3) for j in range(3, 6)]
    assert max(within) <= 0.1
    assert min(across) >= 0.6

    assert threshold_components(pdg, 0.5).groups == [[0, 1, 2], [3, 4, 5]]

    _, sweep, grouping = group_ensemble(ensemble)
    assert grouping.num_groups == 2
    assert grouping.groups == [[0, 1, 2], [3, 4, 5]]
    # cross-family distances lie in (0.90, 0.95]
    assert grouping.lam == pytest.approx(0.90)
    assert len(sweep) == 20


def blocks_by_row_and_column():
    """A 2 x 3 grid of ten-vertex cells cut by rows or by columns, each with a one-vertex variant"""
    cells = [v // 10 for v in range(60)]
    rows = [cell // 3 for cell in cells]
    cols = [cell % 3 for cell in cells]
    return [Partition(rows), _moved(rows, 0, 1), Partition(cols), _moved(cols, 0, 1)]


def test_selected_lambda_sits_just_below_the_family_gap():
    ensemble = blocks_by_row_and_column()
    pdg = build_distance_graph(ensemble)
    across = [pdg.weights[i, j] for i in range(2) for j in range(2, 4)]
    assert sorted(across) == pytest.approx([68 / 120, 68 / 120, 68 / 120, 70 / 120])

    _, sweep, grouping = group_ensemble(ensemble)
    assert grouping.lam == pytest.approx(0.55)
    assert grouping.groups == [[0, 1], [2, 3]]
    assert threshold_components(pdg, 0.60).num_groups == 1


def test_sweep_is_monotone_in_lambda():
    pdg = build_distance_graph(two_families())
    sweep = sorted(lambda_sweep(pdg), key=lambda record: record.lam)
    counts = [record.n_groups for record in sweep]
    assert counts == sorted(counts, reverse=True)


def test_identical_ensemble():
    ensemble = [Partition([0, 0, 1])] * 4
    sweep = lambda_sweep(build_distance_graph(ensemble))
    assert [record.n_groups for record in sweep] == [1] * 20
    assert select_lambda(sweep) == 1.0


def test_all_distant_partitions_select_095():
    sweep = [SweepRecord(1.0, 1, 3)] + [SweepRecord(lam, 3, 1) for lam in DEFAULT_GRID[1:]]
    assert select_lambda(sweep) == pytest.approx(0.95)


def test_default_grid():
    assert len(DEFAULT_GRID) == 20
    assert DEFAULT_GRID[0] == 1.0
    assert DEFAULT_GRID[-1] == pytest.approx(0.05)


def test_empty_grid():
    with pytest.raises(DimensionError):
        lambda_sweep(build_distance_graph([Partition([0, 1])]), [])


def test_largest_group_ties_go_to_lowest_index():
    grouping = EnsembleGrouping(0.5, [[0, 1], [2, 3], [4]])
    assert grouping.largest_group == 0
    assert grouping.group_sizes == [2, 2, 1]
    assert grouping.group_of(3) == 1
    assert grouping.to_dict()['lambda'] == 0.5


def test_pooled_distances_match_serial():
    ensemble = two_families()
    serial = build_distance_graph(ensemble)
    pooled = build_distance_graph(ensemble, workers=2)
    assert np.array_equal(serial.weights, pooled.weights)


@given(st.integers(2, 10).flatmap(lambda n: st.lists(labels_of_size(n, 3), min_size=1, max_size=6)),
       st.sampled_from(DEFAULT_GRID))
def test_groups_cover_and_retained_edges_stay_inside(columns, lam):
    ensemble = [Partition(labels) for labels in columns]
    pdg = build_distance_graph(ensemble)
    grouping = threshold_components(pdg, lam)

    flat = sorted(i for group in grouping.groups for i in group)
    assert flat == list(range(len(ensemble)))
    for i in range(pdg.k):
        for j in range(pdg.k):
            if pdg.weights[i, j] <= lam:
                assert grouping.group_of(i) == grouping.group_of(j)


@given(st.integers(2, 10).flatmap(lambda n: st.lists(labels_of_size(n, 3), min_size=2, max_size=6)),
       st.randoms())
def test_grouping_invariant_under_reordering(columns, rnd):
    ensemble = [Partition(labels) for labels in columns]
    order = list(range(len(ensemble)))
    rnd.shuffle(order)

    base = threshold_components(build_distance_graph(ensemble), 0.3)
    shuffled = threshold_components(build_distance_graph([ensemble[i] for i in order]), 0.3)
    mapped = sorted(sorted(order[i] for i in group) for group in shuffled.groups)
    assert mapped == sorted(base.groups)
