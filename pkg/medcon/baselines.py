"""
Graph-agnostic BOEM baseline and the exhaustive small-instance oracle
"""
import logging

import numpy as np

from medcon.errors import DimensionError, SizeError
from medcon.metrics import total_mirkin
from medcon.models.partition import Partition, build_membership_matrix, require_same_n
from medcon.models.report import ConsensusResult

logger = logging.getLogger(__name__)

SMALL_INSTANCE_CAP = 2000
EXACT_MAX_N = 12


class AgreementMatrix:
    """Dense n x n table N[u][v] = k - 2 delta_uv; quadratic memory, small instances only"""

    def __init__(self, ensemble, cap=SMALL_INSTANCE_CAP):
        ensemble = list(ensemble)
        if not ensemble:
            raise DimensionError("ensemble is empty", stage='boem')
        n = require_same_n(*ensemble)
        if n > cap:
            raise SizeError(f"agreement matrix limited to n <= {cap}, got n={n}", stage='boem')

        entries = build_membership_matrix(ensemble).entries
        self.k = entries.shape[1]
        agree = np.zeros((n, n), dtype=np.int64)
        for j in range(self.k):
            column = entries[:, j]
            agree += column[:, None] == column[None, :]
        # co-clustered in `agree` partitions, separated in k - agree: N = agree - (k - agree)
        self.values = 2 * agree - self.k
        np.fill_diagonal(self.values, 0)

    @property
    def n(self):
        return int(self.values.shape[0])

    def to_dict(self):
        """Convert to dictionary for API responses"""
        return {'n': self.n, 'k': self.k}

    def __repr__(self):
        return f'<AgreementMatrix n={self.n} k={self.k}>'


def boem_run(ensemble, cap=SMALL_INSTANCE_CAP, max_moves=None):
    """Best-one-element-move descent over all (vertex, existing cluster) pairs"""
    ensemble = list(ensemble)
    agreement = AgreementMatrix(ensemble, cap=cap)
    values = agreement.values
    n = agreement.n

    assignment = np.arange(n, dtype=np.int64)
    sizes = np.ones(n, dtype=np.int64)
    # M[x, b] = sum_{y in b, y != x} N[x, y]; singletons make M = N (diagonal already zero)
    gains = values.copy()

    moves = 0
    rows = np.arange(n)
    while max_moves is None or moves < max_moves:
        live = np.flatnonzero(sizes > 0)
        if n == 0 or live.shape[0] < 2:
            break

        # delta(x -> b) = M[x, a] - M[x, b] over live b != a
        candidate = gains[:, live].copy()
        candidate[assignment[:, None] == live[None, :]] = np.iinfo(np.int64).min
        best_col = np.argmax(candidate, axis=1)
        delta = gains[rows, assignment] - candidate[rows, best_col]

        # smallest delta, then smallest vertex (argmin returns the first)
        x = int(np.argmin(delta))
        if delta[x] >= 0:
            break

        source = int(assignment[x])
        target = int(live[best_col[x]])
        gains[:, source] -= values[:, x]
        gains[:, target] += values[:, x]
        sizes[source] -= 1
        sizes[target] += 1
        assignment[x] = target
        moves += 1

    logger.debug("boem: %d moves", moves)
    partition = Partition(assignment)
    return ConsensusResult(
        partition,
        engine='boem',
        converged=True,
        applied_moves=[moves],
        final_total_mirkin=total_mirkin(partition, ensemble) if ensemble else 0,
    )


def enumerate_set_partitions(n, max_n=EXACT_MAX_N):
    """All Bell(n) partitions of n elements as restricted growth strings, each exactly once"""
    if n > max_n:
        raise SizeError(f"set partition enumeration limited to n <= {max_n}, got n={n}", stage='exact')
    if n < 0:
        raise SizeError("n must be non-negative", stage='exact')
    if n == 0:
        yield Partition(np.zeros(0, dtype=np.int64))
        return

    # a[i] <= 1 + max(a[:i]); iterate in lexicographic order
    a = [0] * n
    peak = [0] * n
    while True:
        yield Partition(np.asarray(a, dtype=np.int64))
        i = n - 1
        while i > 0 and a[i] == peak[i - 1] + 1:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        peak[i] = max(peak[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            peak[j] = peak[i]


def exact_consensus(ensemble, max_n=EXACT_MAX_N):
    """Exhaustive minimizer of total Mirkin distance; ties go to the first in enumeration order"""
    ensemble = list(ensemble)
    if not ensemble:
        raise DimensionError("ensemble is empty", stage='exact')
    n = require_same_n(*ensemble)
    if n > max_n:
        raise SizeError(f"exact consensus limited to n <= {max_n}, got n={n}", stage='exact')

    # total_mirkin(C) = base + sum over co-clustered u < v of (2 delta_uv - k)
    agreement = AgreementMatrix(ensemble, cap=max_n)
    weight = -agreement.values
    upper = np.triu(np.ones((n, n), dtype=bool), k=1)
    base = total_mirkin(Partition.singletons(n), ensemble)

    best = None
    best_value = None
    for candidate in enumerate_set_partitions(n, max_n=max_n):
        labels = candidate.labels
        together = (labels[:, None] == labels[None, :]) & upper
        value = base + int(weight[together].sum())
        if best_value is None or value < best_value:
            best, best_value = candidate, value
    return best, best_value
