"""
Median-partition quality measures for a consensus against its ensemble
"""
import numpy as np

from medcon.errors import DimensionError, RangeError
from medcon.metrics import mirkin_contingency, normalized_split_join, rand_or_zero, variation_of_information
from medcon.models.partition import require_same_n

# Raw (unnormalized where it has a natural unit) distances for evaluation
DISTANCES = {
    'mirkin': mirkin_contingency,
    'rand': rand_or_zero,
    'split_join': normalized_split_join,
    'vi': variation_of_information,
}


def resolve_distance(metric):
    if callable(metric):
        return metric
    try:
        return DISTANCES[metric]
    except KeyError:
        raise RangeError(f"unknown metric {metric!r}; choose from {sorted(DISTANCES)}", stage='evaluate')


def _checked(ensemble):
    ensemble = list(ensemble)
    if not ensemble:
        raise DimensionError("ensemble is empty", stage='evaluate')
    return ensemble


def mean_distance_to_inputs(consensus, ensemble, metric='mirkin'):
    """Average distance from `consensus` to every input partition"""
    ensemble = _checked(ensemble)
    require_same_n(consensus, *ensemble)
    distance = resolve_distance(metric)
    return float(np.mean([distance(consensus, part) for part in ensemble]))


def best_input_mean_distance(ensemble, metric='mirkin'):
    """(index, value) of the input j minimizing mean_i d(P_j, P_i); the mean includes i = j"""
    ensemble = _checked(ensemble)
    require_same_n(*ensemble)
    distance = resolve_distance(metric)

    k = len(ensemble)
    table = np.zeros((k, k), dtype=np.float64)
    for i in range(k):
        for j in range(i + 1, k):
            table[i, j] = table[j, i] = distance(ensemble[i], ensemble[j])
    means = table.mean(axis=1)
    best = int(np.argmin(means))
    return best, float(means[best])


def median_ratio(consensus, ensemble, metric='mirkin'):
    """Consensus mean distance over the best input's mean distance; <= 1 beats every input"""
    ensemble = _checked(ensemble)
    ours = mean_distance_to_inputs(consensus, ensemble, metric)
    _, best = best_input_mean_distance(ensemble, metric)
    if best == 0:
        return 1.0 if ours == 0 else float('inf')
    return ours / best


def accuracy_vs_truth(consensus, truth, ensemble, metric='rand'):
    """Distance of the consensus to the ground truth next to the inputs' mean distance to it"""
    ensemble = _checked(ensemble)
    require_same_n(consensus, truth, *ensemble)
    distance = resolve_distance(metric)
    return {
        'metric': metric if isinstance(metric, str) else getattr(metric, '__name__', 'custom'),
        'consensus': float(distance(consensus, truth)),
        'inputs_mean': float(np.mean([distance(part, truth) for part in ensemble])),
    }
