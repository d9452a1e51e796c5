"""
Homogeneous-group detection over a partition ensemble
"""
import itertools
import logging

import numpy as np
import scipy.sparse as sp
from scipy.sparse.csgraph import connected_components

from medcon.config import Config
from medcon.errors import DimensionError, RangeError
from medcon.metrics import get_metric
from medcon.models.grouping import EnsembleGrouping, PartitionDistanceGraph, SweepRecord
from medcon.models.partition import require_same_n
from medcon.parallel import pool_context

logger = logging.getLogger(__name__)

DEFAULT_GRID = Config.LAMBDA_GRID

_PAIR_STATE = {}


def _init_pair_worker(ensemble, metric):
    _PAIR_STATE['ensemble'] = ensemble
    _PAIR_STATE['metric'] = metric


def _pair_distance(pair):
    i, j = pair
    ensemble = _PAIR_STATE['ensemble']
    return _PAIR_STATE['metric'](ensemble[i], ensemble[j])


def build_distance_graph(ensemble, metric='split_join', workers=1):
    """All C(k, 2) pairwise distances between input partitions"""
    ensemble = list(ensemble)
    if not ensemble:
        raise DimensionError("ensemble is empty", stage='grouping')
    require_same_n(*ensemble)
    distance = get_metric(metric)

    k = len(ensemble)
    pairs = list(itertools.combinations(range(k), 2))
    if workers > 1 and len(pairs) > 1 and isinstance(metric, str):
        with pool_context().Pool(workers, initializer=_init_pair_worker, initargs=(ensemble, distance)) as pool:
            values = pool.map(_pair_distance, pairs)
    else:
        values = [distance(ensemble[i], ensemble[j]) for i, j in pairs]

    weights = np.zeros((k, k), dtype=np.float64)
    for (i, j), value in zip(pairs, values):
        weights[i, j] = weights[j, i] = value
    return PartitionDistanceGraph(weights, metric)


def threshold_components(pdg, lam):
    """Connected components after dropping edges heavier than lambda"""
    if not 0.0 <= lam <= 1.0:
        raise RangeError(f"lambda must lie in [0, 1], got {lam}", stage='grouping')

    retained = sp.csr_matrix(pdg.weights <= lam)
    _, labels = connected_components(retained, directed=False)

    # order groups by smallest member index
    groups = {}
    for index, label in enumerate(labels.tolist()):
        groups.setdefault(label, []).append(index)
    ordered = sorted(groups.values(), key=lambda members: members[0])
    return EnsembleGrouping(lam, ordered)


def lambda_sweep(pdg, grid=DEFAULT_GRID):
    """Group count and largest group size for every threshold in `grid`"""
    grid = list(grid)
    if not grid:
        raise DimensionError("lambda grid is empty", stage='grouping')

    records = []
    for lam in grid:
        grouping = threshold_components(pdg, lam)
        records.append(SweepRecord(lam, grouping.num_groups, max(grouping.group_sizes)))
    return records


def select_lambda(sweep):
    """Largest grid lambda at which more than one group appears; 1.0 if none does"""
    split = [record.lam for record in sweep if record.n_groups > 1]
    selected = max(split) if split else 1.0
    logger.debug("selected lambda %.2f", selected)
    return selected


def group_ensemble(ensemble, lam=None, metric='split_join', grid=DEFAULT_GRID, workers=1):
    """Distance graph, sweep and grouping in one call; lambda=None selects it automatically"""
    pdg = build_distance_graph(ensemble, metric=metric, workers=workers)
    sweep = lambda_sweep(pdg, grid)
    if lam is None:
        lam = select_lambda(sweep)
    grouping = threshold_components(pdg, lam)
    logger.info("lambda %.2f: %d groups, sizes %s", lam, grouping.num_groups, grouping.group_sizes)
    return pdg, sweep, grouping
