"""
Partitions, partition ensembles and the membership matrix
"""
import logging
import os

import numpy as np

from medcon.errors import BoundsError, CoverageError, DimensionError, ParseError
from medcon.models.textio import data_lines

logger = logging.getLogger(__name__)


def canonical_labels(labels):
    """Renumber labels 0..b-1 in order of first appearance"""
    labels = np.asarray(labels)
    if labels.ndim != 1:
        raise DimensionError("labels must be one-dimensional", stage='partition')
    if labels.size == 0:
        return np.zeros(0, dtype=np.int64)

    _, first_seen, inverse = np.unique(labels, return_index=True, return_inverse=True)
    rank = np.empty(first_seen.shape[0], dtype=np.int64)
    rank[np.argsort(first_seen, kind='stable')] = np.arange(first_seen.shape[0], dtype=np.int64)
    return rank[inverse.reshape(-1)]


class Partition:
    """Complete, non-overlapping assignment of n vertices to clusters (canonical labels)"""

    def __init__(self, labels):
        canon = canonical_labels(labels)
        canon.setflags(write=False)
        self._labels = canon

    @property
    def labels(self):
        return self._labels

    @property
    def n(self):
        return int(self._labels.shape[0])

    @property
    def num_clusters(self):
        """Number of clusters b"""
        return int(self._labels.max()) + 1 if self.n else 0

    @property
    def cluster_sizes(self):
        """Size of each cluster, indexed by canonical label"""
        return np.bincount(self._labels, minlength=self.num_clusters)

    def same_cluster(self, u, v):
        """Indicator that u and v are co-clustered"""
        return bool(self._labels[u] == self._labels[v])

    def to_dict(self):
        """Convert to dictionary for API responses"""
        return {
            'n': self.n,
            'num_clusters': self.num_clusters,
            'labels': self._labels.tolist()
        }

    def __len__(self):
        return self.n

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return np.array_equal(self._labels, other._labels)

    def __hash__(self):
        return hash(self._labels.tobytes())

    def __repr__(self):
        return f'<Partition n={self.n} clusters={self.num_clusters}>'

    @classmethod
    def singletons(cls, n):
        """Every vertex in its own cluster"""
        return cls(np.arange(n, dtype=np.int64))

    @classmethod
    def single_cluster(cls, n):
        """All vertices in one cluster"""
        return cls(np.zeros(n, dtype=np.int64))


def require_same_n(*parts):
    """Raise DimensionError unless every partition has the same n; return that n"""
    if not parts:
        raise DimensionError("no partitions given", stage='partition')
    sizes = {p.n for p in parts}
    if len(sizes) != 1:
        raise DimensionError(f"partitions disagree on vertex count: {sorted(sizes)}", stage='partition')
    return sizes.pop()


class MembershipMatrix:
    """n x k table of cluster labels; row u lists u's cluster in every input partition"""

    def __init__(self, entries):
        entries = np.ascontiguousarray(entries, dtype=np.int64)
        if entries.ndim != 2 or entries.shape[1] < 1:
            raise DimensionError("membership matrix needs shape (n, k) with k >= 1", stage='partition')
        entries.setflags(write=False)
        self._entries = entries

    @property
    def entries(self):
        return self._entries

    @property
    def n(self):
        return int(self._entries.shape[0])

    @property
    def k(self):
        return int(self._entries.shape[1])

    def row(self, u):
        """Membership vector of vertex u"""
        self._check(u)
        return self._entries[u]

    def column(self, j):
        """Partition j as a Partition"""
        return Partition(self._entries[:, j])

    def partitions(self):
        """All k columns as partitions"""
        return [self.column(j) for j in range(self.k)]

    def coclustering_distance(self, u, v):
        """delta_uv: number of columns where rows u and v disagree"""
        self._check(u)
        self._check(v)
        return int(np.count_nonzero(self._entries[u] != self._entries[v]))

    def distances_to(self, v, others):
        """delta_uv for every u in `others` (vectorized)"""
        self._check(v)
        others = np.asarray(others, dtype=np.int64)
        return np.count_nonzero(self._entries[others] != self._entries[v], axis=1)

    def _check(self, u):
        if not 0 <= u < self.n:
            raise BoundsError(f"vertex {u} out of range for n={self.n}", stage='partition')

    def to_dict(self):
        """Convert to dictionary for API responses"""
        return {'n': self.n, 'k': self.k}

    def __repr__(self):
        return f'<MembershipMatrix n={self.n} k={self.k}>'


def build_membership_matrix(parts):
    """Stack k partitions column-wise into an n x k MembershipMatrix"""
    parts = list(parts)
    if not parts:
        raise DimensionError("cannot build a membership matrix from an empty ensemble", stage='partition')
    require_same_n(*parts)
    return MembershipMatrix(np.column_stack([p.labels for p in parts]))


def coclustering_distance(mm, u, v):
    """delta_uv, the Hamming distance between membership rows u and v"""
    return mm.coclustering_distance(u, v)


def load_partition(source, n):
    """Read a single-column partition file (line index = vertex id)"""
    labels = []
    for line_no, line in data_lines(source):
        try:
            label = int(line)
        except ValueError:
            raise ParseError(f"expected one integer label, got {line!r}", line=line_no, stage='partition')
        if label < 0:
            raise ParseError("labels must be non-negative", line=line_no, stage='partition')
        labels.append(label)

    if n is not None and len(labels) != n:
        raise CoverageError(
            f"Input partitions must cover all n vertices (expected {n}, got {len(labels)})")
    return Partition(np.asarray(labels, dtype=np.int64))


def save_partition(partition, sink):
    """Write one label per line"""
    sink.write(''.join(f"{label}\n" for label in partition.labels.tolist()))


def load_ensemble_tsv(source, n=None):
    """Read an n-row, k-column TSV of labels into a list of k partitions"""
    rows = []
    width = None
    for line_no, line in data_lines(source):
        tokens = line.split('\t') if '\t' in line else line.split()
        try:
            row = [int(t) for t in tokens]
        except ValueError:
            raise ParseError(f"non-integer label in {line!r}", line=line_no, stage='partition')
        if width is None:
            width = len(row)
        elif len(row) != width:
            raise ParseError(f"expected {width} columns, got {len(row)}", line=line_no, stage='partition')
        if any(label < 0 for label in row):
            raise ParseError("labels must be non-negative", line=line_no, stage='partition')
        rows.append(row)

    if not rows:
        raise DimensionError("ensemble file holds no rows", stage='partition')
    if n is not None and len(rows) != n:
        raise CoverageError(
            f"Input partitions must cover all n vertices (expected {n}, got {len(rows)})")

    table = np.asarray(rows, dtype=np.int64)
    return [Partition(table[:, j]) for j in range(table.shape[1])]


def save_ensemble_tsv(parts, sink):
    """Write partitions as an n-row, k-column TSV"""
    mm = build_membership_matrix(parts)
    for row in mm.entries.tolist():
        sink.write('\t'.join(str(label) for label in row) + '\n')


def load_ensemble(path, n=None):
    """Load an ensemble from a k-column TSV file or a directory of single-column files"""
    if os.path.isdir(path):
        names = sorted(
            name for name in os.listdir(path)
            if not name.startswith('.') and os.path.isfile(os.path.join(path, name)))
        if not names:
            raise DimensionError(f"no partition files in {path}", stage='partition')

        parts = []
        for name in names:
            with open(os.path.join(path, name)) as handle:
                parts.append(load_partition(handle, n))
        require_same_n(*parts)
        logger.debug("loaded %d partitions from directory %s", len(parts), path)
        return parts

    with open(path) as handle:
        parts = load_ensemble_tsv(handle, n)
    logger.debug("loaded %d partitions from %s", len(parts), path)
    return parts
