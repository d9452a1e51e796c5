"""
Partition comparison distances: Mirkin, Rand, split-join, variation of information
"""
import math

import numpy as np
import scipy.sparse as sp

from medcon.errors import DimensionError, RangeError
from medcon.models.partition import require_same_n


def _pairs(x):
    """C(x, 2) elementwise on an integer array"""
    x = np.asarray(x, dtype=np.int64)
    return x * (x - 1) // 2


class ContingencyTable:
    """Overlap counts |A ∩ B| for clusters A of p (rows) and B of q (columns)"""

    def __init__(self, p, q):
        n = require_same_n(p, q)
        # coo_matrix sums repeated (row, col) pairs: a cheap 2-D histogram
        table = sp.coo_matrix(
            (np.ones(n, dtype=np.int64), (p.labels, q.labels)),
            shape=(p.num_clusters, q.num_clusters),
            dtype=np.int64,
        ).tocsr()
        table.sum_duplicates()
        self.counts = table
        self.n = n

    @property
    def row_sums(self):
        """Cluster sizes of p"""
        return np.asarray(self.counts.sum(axis=1)).ravel()

    @property
    def column_sums(self):
        """Cluster sizes of q"""
        return np.asarray(self.counts.sum(axis=0)).ravel()

    @property
    def nonzero(self):
        """Non-zero overlap counts"""
        return self.counts.data

    def row_max(self):
        """max_B |A ∩ B| for every cluster A of p"""
        return np.asarray(self.counts.max(axis=1).toarray()).ravel()

    def column_max(self):
        """max_A |A ∩ B| for every cluster B of q"""
        return np.asarray(self.counts.max(axis=0).toarray()).ravel()

    def to_dict(self):
        """Convert to dictionary for API responses"""
        return {
            'n': self.n,
            'shape': list(self.counts.shape),
            'counts': self.counts.toarray().tolist()
        }

    def __repr__(self):
        return f'<ContingencyTable {self.counts.shape[0]}x{self.counts.shape[1]} n={self.n}>'


def mirkin_pairwise(p, q):
    """Mirkin distance by enumerating all unordered pairs; O(n^2) reference"""
    n = require_same_n(p, q)
    if n < 2:
        return 0
    upper = np.triu_indices(n, k=1)
    same_p = (p.labels[:, None] == p.labels[None, :])[upper]
    same_q = (q.labels[:, None] == q.labels[None, :])[upper]
    return int(np.count_nonzero(same_p != same_q))


def mirkin_contingency(p, q):
    """Mirkin distance (b + c over unordered pairs) from the contingency table"""
    table = ContingencyTable(p, q)
    together_p = int(_pairs(table.row_sums).sum())
    together_q = int(_pairs(table.column_sums).sum())
    together_both = int(_pairs(table.nonzero).sum())
    return together_p + together_q - 2 * together_both


mirkin = mirkin_contingency


def rand_distance(p, q):
    """Mirkin distance divided by C(n, 2)"""
    n = require_same_n(p, q)
    if n < 2:
        raise DimensionError("rand distance is undefined for n < 2", stage='metrics')
    return mirkin_contingency(p, q) / (n * (n - 1) / 2)


def split_join(p, q, normalized=False):
    """Split-join distance; normalized form divides by 2n"""
    n = require_same_n(p, q)
    if n == 0:
        raise DimensionError("split-join distance needs n >= 1", stage='metrics')
    table = ContingencyTable(p, q)
    raw = 2 * n - int(table.row_max().sum()) - int(table.column_max().sum())
    if normalized:
        return raw / (2 * n)
    return raw


def variation_of_information(p, q):
    """H(p) + H(q) - 2 I(p, q) in nats"""
    n = require_same_n(p, q)
    if n == 0:
        raise DimensionError("variation of information needs n >= 1", stage='metrics')
    table = ContingencyTable(p, q)

    coo = table.counts.tocoo()
    r = coo.data / n
    a = table.row_sums[coo.row] / n
    b = table.column_sums[coo.col] / n

    # VI = -sum r (ln(r/a) + ln(r/b)); zero cells never appear in a sparse table
    vi = -float(np.sum(r * (np.log(r / a) + np.log(r / b))))
    return max(vi, 0.0)


def entropy(p):
    """Shannon entropy of the cluster-size distribution, in nats"""
    if p.n == 0:
        return 0.0
    frac = p.cluster_sizes / p.n
    frac = frac[frac > 0]
    return float(-np.sum(frac * np.log(frac)))


def normalized_vi(p, q):
    """VI divided by ln n, which bounds it; 0 when n == 1"""
    n = require_same_n(p, q)
    if n <= 1:
        return 0.0
    return min(variation_of_information(p, q) / math.log(n), 1.0)


def total_mirkin(consensus, ensemble):
    """Sum of Mirkin distances from the consensus to every input partition"""
    ensemble = list(ensemble)
    if not ensemble:
        raise DimensionError("ensemble is empty", stage='metrics')
    require_same_n(consensus, *ensemble)
    return sum(mirkin_contingency(consensus, part) for part in ensemble)


def total_mirkin_pairs(consensus, ensemble):
    """total_mirkin in pair form: sum_{u<v} delta_uv + sum over separated u<v of (k - 2 delta_uv); O(n^2 k)"""
    ensemble = list(ensemble)
    if not ensemble:
        raise DimensionError("ensemble is empty", stage='metrics')
    n = require_same_n(consensus, *ensemble)
    if n < 2:
        return 0
    entries = np.column_stack([part.labels for part in ensemble])
    k = entries.shape[1]
    upper = np.triu_indices(n, k=1)
    delta = np.count_nonzero(entries[:, None, :] != entries[None, :, :], axis=2)[upper]
    separated = (consensus.labels[:, None] != consensus.labels[None, :])[upper]
    return int(delta.sum() + (k - 2 * delta[separated]).sum())


def total_pair_distance(ensemble):
    """Sum over u < v of delta_uv, i.e. pairs separated in each input, summed over inputs"""
    ensemble = list(ensemble)
    if not ensemble:
        raise DimensionError("ensemble is empty", stage='metrics')
    n = require_same_n(*ensemble)
    all_pairs = n * (n - 1) // 2
    return sum(all_pairs - int(_pairs(part.cluster_sizes).sum()) for part in ensemble)


def compare(p, q):
    """All four reported distances between two partitions"""
    n = require_same_n(p, q)
    return {
        'mirkin': mirkin_contingency(p, q),
        'rand': rand_distance(p, q) if n >= 2 else 0.0,
        'split_join': split_join(p, q, normalized=True),
        'vi': variation_of_information(p, q),
    }


def normalized_split_join(p, q):
    return split_join(p, q, normalized=True)


def rand_or_zero(p, q):
    """Rand distance, 0 when there is no pair to compare"""
    return rand_distance(p, q) if p.n >= 2 else 0.0


# Normalized distances usable as partition-distance-graph weights
METRICS = {
    'split_join': normalized_split_join,
    'rand': rand_or_zero,
    'vi': normalized_vi,
}


def get_metric(metric):
    """Resolve a metric name or pass a callable through"""
    if callable(metric):
        return metric
    try:
        return METRICS[metric]
    except KeyError:
        raise RangeError(f"unknown metric {metric!r}; choose from {sorted(METRICS)}", stage='metrics')
