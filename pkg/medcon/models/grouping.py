"""
Partition-distance graph, homogeneous groups and lambda sweep records
"""
import numpy as np

from medcon.errors import ValidationError


class PartitionDistanceGraph:
    """Complete graph over k input partitions, weighted by a normalized distance"""

    def __init__(self, weights, metric='split_join'):
        weights = np.array(weights, dtype=np.float64)
        if weights.ndim != 2 or weights.shape[0] != weights.shape[1]:
            raise ValidationError("distance matrix must be square", stage='grouping')
        if not np.allclose(weights, weights.T):
            raise ValidationError("distance matrix must be symmetric", stage='grouping')
        if np.any(np.diag(weights) != 0):
            raise ValidationError("distance matrix diagonal must be zero", stage='grouping')
        weights.setflags(write=False)
        self.weights = weights
        self.metric = metric if isinstance(metric, str) else getattr(metric, '__name__', 'custom')

    @property
    def k(self):
        return int(self.weights.shape[0])

    def to_dict(self):
        """Convert to dictionary for API responses"""
        return {'k': self.k, 'metric': self.metric, 'weights': self.weights.tolist()}

    def __repr__(self):
        return f'<PartitionDistanceGraph k={self.k} metric={self.metric}>'


class EnsembleGrouping:
    """Disjoint groups of partition indices at one threshold"""

    def __init__(self, lam, groups):
        self.lam = float(lam)
        self.groups = [sorted(int(i) for i in group) for group in groups]

    @property
    def largest_group(self):
        """Index of the group with most members; ties go to the lowest index"""
        sizes = [len(group) for group in self.groups]
        return sizes.index(max(sizes)) if sizes else None

    @property
    def group_sizes(self):
        return [len(group) for group in self.groups]

    @property
    def num_groups(self):
        return len(self.groups)

    def group_of(self, index):
        """Group id containing partition `index`"""
        for group_id, group in enumerate(self.groups):
            if index in group:
                return group_id
        return None

    def to_dict(self):
        """Convert to dictionary for API responses"""
        return {
            'lambda': self.lam,
            'groups': self.groups,
            'largest_group': self.largest_group,
            'group_sizes': self.group_sizes
        }

    def __repr__(self):
        return f'<EnsembleGrouping lambda={self.lam:.2f} groups={self.num_groups}>'


class SweepRecord:
    """Group count and largest group size at one threshold"""
    __slots__ = ('lam', 'n_groups', 'largest_size')

    def __init__(self, lam, n_groups, largest_size):
        self.lam = float(lam)
        self.n_groups = int(n_groups)
        self.largest_size = int(largest_size)

    def as_tuple(self):
        return (self.lam, self.n_groups, self.largest_size)

    def to_dict(self):
        """Convert to dictionary for API responses"""
        return {'lambda': self.lam, 'n_groups': self.n_groups, 'largest_size': self.largest_size}

    def __repr__(self):
        return f'<SweepRecord lambda={self.lam:.2f} groups={self.n_groups} largest={self.largest_size}>'
