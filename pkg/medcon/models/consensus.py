"""
Mutable consensus state and move proposals
"""
import numpy as np

from medcon.errors import BoundsError, ContractError
from medcon.models.partition import Partition


class MoveProposal:
    """Move of one vertex into a neighboring cluster, with its gain at proposal time"""
    __slots__ = ('vertex', 'from_cluster', 'to_cluster', 'delta')

    def __init__(self, vertex, from_cluster, to_cluster, delta):
        self.vertex = int(vertex)
        self.from_cluster = int(from_cluster)
        self.to_cluster = int(to_cluster)
        self.delta = int(delta)

    def as_tuple(self):
        return (self.vertex, self.from_cluster, self.to_cluster, self.delta)

    def to_dict(self):
        """Convert to dictionary for API responses"""
        return {
            'vertex': self.vertex,
            'from_cluster': self.from_cluster,
            'to_cluster': self.to_cluster,
            'delta': self.delta
        }

    def __eq__(self, other):
        if not isinstance(other, MoveProposal):
            return NotImplemented
        return self.as_tuple() == other.as_tuple()

    def __hash__(self):
        return hash(self.as_tuple())

    def __repr__(self):
        return f'<MoveProposal v={self.vertex} {self.from_cluster}->{self.to_cluster} delta={self.delta}>'


class ConsensusState:
    """Cluster assignment with per-cluster member sets, sizes and the live surrogate objective"""

    def __init__(self, assignment, live_objective=0):
        assignment = np.array(assignment, dtype=np.int64)
        n = assignment.shape[0]
        if n and (assignment.min() < 0 or assignment.max() >= n):
            raise BoundsError("cluster ids must lie in 0..n-1", stage='consensus')

        self.assignment = assignment
        self.members = [set() for _ in range(n)]
        for v, c in enumerate(assignment.tolist()):
            self.members[c].add(v)
        self.sizes = np.bincount(assignment, minlength=n).astype(np.int64)
        self.live_objective = int(live_objective)

    @property
    def n(self):
        return int(self.assignment.shape[0])

    @property
    def num_clusters(self):
        """Number of non-empty clusters"""
        return int(np.count_nonzero(self.sizes))

    def cluster_of(self, v):
        if not 0 <= v < self.n:
            raise BoundsError(f"vertex {v} out of range for n={self.n}", stage='consensus')
        return int(self.assignment[v])

    def check_cluster(self, c):
        if not 0 <= c < self.n:
            raise BoundsError(f"cluster {c} out of range for n={self.n}", stage='consensus')

    def move(self, v, target, delta=0):
        """Move v into `target` and shift the live objective by `delta`"""
        source = self.cluster_of(v)
        self.check_cluster(target)
        if source == target:
            raise ContractError(f"vertex {v} is already in cluster {target}", stage='consensus')

        self.members[source].discard(v)
        self.members[target].add(v)
        self.sizes[source] -= 1
        self.sizes[target] += 1
        self.assignment[v] = target
        self.live_objective += int(delta)

    def snapshot(self):
        """Frozen copy of the assignment for the proposal phase"""
        frozen = self.assignment.copy()
        frozen.setflags(write=False)
        return frozen

    def check_consistency(self):
        """Verify assignment, member sets and sizes agree; raise ContractError otherwise"""
        for c, group in enumerate(self.members):
            if len(group) != self.sizes[c]:
                raise ContractError(f"cluster {c}: size {self.sizes[c]} != {len(group)} members", stage='consensus')
            for v in group:
                if self.assignment[v] != c:
                    raise ContractError(f"vertex {v} listed in cluster {c} but assigned elsewhere", stage='consensus')
        if int(self.sizes.sum()) != self.n:
            raise ContractError("cluster sizes do not sum to n", stage='consensus')

    def to_partition(self):
        """Canonical partition; empty clusters disappear in canonicalization"""
        return Partition(self.assignment)

    def to_dict(self):
        """Convert to dictionary for API responses"""
        return {
            'n': self.n,
            'num_clusters': self.num_clusters,
            'live_objective': self.live_objective
        }

    def __repr__(self):
        return f'<ConsensusState n={self.n} clusters={self.num_clusters} objective={self.live_objective}>'

    @classmethod
    def singletons(cls, n):
        """n clusters, cluster id = vertex id; no co-clustered pairs"""
        return cls(np.arange(n, dtype=np.int64), live_objective=0)


class ConsensusOptions:
    """Knobs for one consensus run"""

    def __init__(self, max_iterations=1000, workers=1, chunk_edges=262144, check_objective=False):
        self.max_iterations = int(max_iterations)
        self.workers = int(workers)
        self.chunk_edges = int(chunk_edges)
        self.check_objective = bool(check_objective)
        if self.max_iterations < 1:
            raise ContractError("max_iterations must be >= 1", stage='consensus')
        if self.workers < 1:
            raise ContractError("workers must be >= 1", stage='consensus')

    def to_dict(self):
        """Convert to dictionary for API responses"""
        return {
            'max_iterations': self.max_iterations,
            'workers': self.workers,
            'chunk_edges': self.chunk_edges,
            'check_objective': self.check_objective
        }

    def __repr__(self):
        return f'<ConsensusOptions max_iterations={self.max_iterations} workers={self.workers}>'

    @classmethod
    def from_config(cls, config, **overrides):
        """Build from an application config mapping; explicit overrides win"""
        values = {
            'max_iterations': config.get('CONSENSUS_MAX_ITERATIONS', 1000),
            'workers': config.get('CONSENSUS_WORKERS', 1),
            'chunk_edges': config.get('CONSENSUS_CHUNK_EDGES', 262144),
            'check_objective': config.get('CONSENSUS_CHECK_OBJECTIVE', False),
        }
        values.update({key: value for key, value in overrides.items() if value is not None})
        return cls(**values)
