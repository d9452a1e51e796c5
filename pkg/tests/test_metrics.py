import math

import pytest
from hypothesis import given, settings

from medcon.errors import DimensionError, RangeError
from medcon.metrics import (ContingencyTable, compare, entropy, get_metric, mirkin_contingency, mirkin_pairwise,
                            normalized_vi, rand_distance, split_join, total_mirkin, total_mirkin_pairs,
                            total_pair_distance, variation_of_information)
from medcon.models.partition import Partition

from tests.conftest import ensembles, partition_pairs, partition_triples

P = Partition([0, 0, 1, 1])
Q = Partition([0, 0, 0, 1])


def test_contingency_table():
    table = ContingencyTable(P, Q)
    assert table.counts.toarray().tolist() == [[2, 0], [1, 1]]
    assert table.row_sums.tolist() == [2, 2]
    assert table.column_sums.tolist() == [3, 1]
    assert int(table.counts.sum()) == 4


def test_mirkin_examples():
    assert mirkin_pairwise(P, Q) == 3
    assert mirkin_contingency(P, Q) == 3
    assert mirkin_pairwise(P, P) == 0
    assert mirkin_contingency(Partition([0, 1]), Partition([0, 0])) == 1


def test_mirkin_dimension_mismatch():
    with pytest.raises(DimensionError):
        mirkin_contingency(P, Partition([0, 1]))


def test_rand_examples():
    assert rand_distance(P, Q) == pytest.approx(0.5)
    assert rand_distance(P, P) == 0.0
    assert rand_distance(Partition.singletons(5), Partition.single_cluster(5)) == pytest.approx(1.0)
    with pytest.raises(DimensionError):
        rand_distance(Partition([0]), Partition([0]))


def test_split_join_examples():
    assert split_join(P, Q) == 2
    assert split_join(P, Q, normalized=True) == pytest.approx(0.25)
    assert split_join(P, P) == 0
    assert split_join(Partition([0]), Partition([0])) == 0


def test_vi_examples():
    assert variation_of_information(P, P) == pytest.approx(0.0, abs=1e-12)

    # independent evaluation: VI = 2 H(joint) - H(p) - H(q)
    h_joint = -(0.5 * math.log(0.5) + 2 * 0.25 * math.log(0.25))
    h_p = math.log(2)
    h_q = -(0.75 * math.log(0.75) + 0.25 * math.log(0.25))
    expected = 2 * h_joint - h_p - h_q
    assert expected == pytest.approx(0.8240, abs=1e-4)
    assert variation_of_information(P, Q) == pytest.approx(expected, abs=1e-9)

    singletons = Partition.singletons(4)
    one = Partition.single_cluster(4)
    assert variation_of_information(singletons, one) == pytest.approx(math.log(4), abs=1e-9)
    assert entropy(singletons) == pytest.approx(math.log(4))
    assert normalized_vi(singletons, one) == pytest.approx(1.0)


def test_total_mirkin_examples():
    assert total_mirkin(P, [P, P]) == 0
    assert total_mirkin(P, [P, Q]) == 3
    with pytest.raises(DimensionError):
        total_mirkin(P, [])


def test_total_pair_distance():
    # delta values 0, 1, 2, 1, 2, 1
    assert total_pair_distance([P, Q]) == 7


def test_compare_reports_four_metrics():
    values = compare(P, Q)
    assert values['mirkin'] == 3
    assert values['rand'] == pytest.approx(0.5)
    assert values['split_join'] == pytest.approx(0.25)
    assert values['vi'] == pytest.approx(0.8240, abs=1e-4)


def test_get_metric():
    assert get_metric('split_join')(P, Q) == pytest.approx(0.25)
    assert get_metric(mirkin_pairwise) is mirkin_pairwise
    with pytest.raises(RangeError):
        get_metric('nmi')


@settings(max_examples=500)
@given(partition_pairs())
def test_contingency_matches_pair_enumeration(pair):
    p, q = pair
    assert mirkin_contingency(p, q) == mirkin_pairwise(p, q)


@settings(max_examples=200)
@given(ensembles())
def test_pair_form_identity(instance):
    candidate, ensemble = instance
    assert total_mirkin(candidate, ensemble) == total_mirkin_pairs(candidate, ensemble)


@given(partition_pairs(max_n=40))
def test_symmetry_identity_and_ranges(pair):
    p, q = pair
    assert mirkin_contingency(p, q) == mirkin_contingency(q, p)
    assert split_join(p, q) == split_join(q, p)
    assert variation_of_information(p, q) == pytest.approx(variation_of_information(q, p), abs=1e-9)
    assert mirkin_contingency(p, p) == 0
    assert split_join(p, p) == 0
    assert variation_of_information(p, p) == pytest.approx(0.0, abs=1e-9)

    assert 0.0 <= split_join(p, q, normalized=True) <= 1.0
    if p.n >= 2:
        assert 0.0 <= rand_distance(p, q) <= 1.0


@settings(max_examples=1000)
@given(partition_triples())
def test_metric_axioms_on_triples(triple):
    a, b, c = triple
    for distance in (mirkin_contingency, split_join, variation_of_information):
        assert distance(a, b) == pytest.approx(distance(b, a), abs=1e-9)
        assert distance(a, a) == pytest.approx(0, abs=1e-9)
    assert mirkin_contingency(a, c) <= mirkin_contingency(a, b) + mirkin_contingency(b, c)
    assert split_join(a, c) <= split_join(a, b) + split_join(b, c)
    assert variation_of_information(a, c) <= \
        variation_of_information(a, b) + variation_of_information(b, c) + 1e-9
