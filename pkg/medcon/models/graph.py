"""
Immutable undirected graph in compressed adjacency (CSR) form
"""
import logging

import numpy as np
import scipy.sparse as sp

from medcon.errors import BoundsError, ParseError, ValidationError
from medcon.models.textio import data_lines

logger = logging.getLogger(__name__)


class Graph:
    """Undirected simple graph; vertex ids are 0..n-1"""

    def __init__(self, indptr, indices, validate=True):
        indptr = np.ascontiguousarray(indptr, dtype=np.int64)
        indices = np.ascontiguousarray(indices, dtype=np.int64)
        indptr.setflags(write=False)
        indices.setflags(write=False)
        self._indptr = indptr
        self._indices = indices
        if validate:
            self.validate()

    @property
    def n(self):
        """Vertex count"""
        return int(self._indptr.shape[0] - 1)

    @property
    def m(self):
        """Undirected edge count"""
        return int(self._indices.shape[0] // 2)

    @property
    def indptr(self):
        return self._indptr

    @property
    def indices(self):
        return self._indices

    @property
    def degrees(self):
        """Degree of every vertex"""
        return np.diff(self._indptr)

    def neighbors(self, v):
        """Return N(v), strictly ascending (read-only view)"""
        if not 0 <= v < self.n:
            raise BoundsError(f"vertex {v} out of range for n={self.n}")
        return self._indices[self._indptr[v]:self._indptr[v + 1]]

    def degree(self, v):
        """Degree of a single vertex"""
        return len(self.neighbors(v))

    def edges(self):
        """Canonical edge array: one row (u, v) with u < v per edge, ascending"""
        src = np.repeat(np.arange(self.n, dtype=np.int64), self.degrees)
        keep = src < self._indices
        return np.column_stack((src[keep], self._indices[keep]))

    def validate(self):
        """Check the structural invariants; raise ValidationError on the first failure"""
        n = self.n
        if n < 0 or self._indptr[0] != 0 or np.any(np.diff(self._indptr) < 0):
            raise ValidationError("malformed index pointer array", stage='graph')
        if self._indptr[-1] != self._indices.shape[0]:
            raise ValidationError("index pointer does not match neighbor array length", stage='graph')
        if self._indices.shape[0] % 2:
            raise ValidationError("degree sum is odd; adjacency cannot be symmetric", stage='graph')
        if self._indices.size and (self._indices.min() < 0 or self._indices.max() >= n):
            raise ValidationError("neighbor id out of range", stage='graph')

        src = np.repeat(np.arange(n, dtype=np.int64), self.degrees)
        if np.any(src == self._indices):
            raise ValidationError("self-loop in adjacency", stage='graph')

        # Strictly ascending inside each row: consecutive entries of one row must increase
        same_row = src[1:] == src[:-1]
        if np.any(self._indices[1:][same_row] <= self._indices[:-1][same_row]):
            raise ValidationError("neighbor list not strictly ascending", stage='graph')

        # Symmetry: the set of (u, v) keys equals the set of (v, u) keys
        forward = np.sort(src * n + self._indices)
        backward = np.sort(self._indices * n + src)
        if not np.array_equal(forward, backward):
            raise ValidationError("adjacency is not symmetric", stage='graph')

    def to_csr(self):
        """Adjacency as a scipy CSR matrix of ones"""
        data = np.ones(self._indices.shape[0], dtype=np.int8)
        return sp.csr_matrix((data, self._indices, self._indptr), shape=(self.n, self.n))

    def to_dict(self):
        """Convert to dictionary for API responses"""
        return {
            'n': self.n,
            'm': self.m,
            'isolated': int(np.count_nonzero(self.degrees == 0)),
            'max_degree': int(self.degrees.max()) if self.n else 0
        }

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return np.array_equal(self._indptr, other._indptr) and np.array_equal(self._indices, other._indices)

    def __hash__(self):
        return hash((self.n, self.m, self._indices.tobytes()))

    def __repr__(self):
        return f'<Graph n={self.n} m={self.m}>'

    @classmethod
    def from_edges(cls, n, edges):
        """Build from an (E, 2) array of undirected edges; duplicates and both orientations collapse"""
        edges = np.asarray(edges, dtype=np.int64).reshape(-1, 2)
        if n < 0:
            raise ValidationError(f"vertex count must be non-negative, got {n}", stage='graph')
        if edges.size and (edges.min() < 0 or edges.max() >= n):
            raise BoundsError(f"edge endpoint out of range for n={n}", stage='graph')
        if np.any(edges[:, 0] == edges[:, 1]):
            raise ValidationError("self-loops are not allowed", stage='graph')

        lo = np.minimum(edges[:, 0], edges[:, 1])
        hi = np.maximum(edges[:, 0], edges[:, 1])
        src = np.concatenate((lo, hi))
        dst = np.concatenate((hi, lo))

        # coo -> csr sums duplicate entries; data is then irrelevant
        adj = sp.coo_matrix((np.ones(src.shape[0], dtype=np.int32), (src, dst)), shape=(n, n)).tocsr()
        adj.sum_duplicates()
        adj.sort_indices()
        return cls(adj.indptr, adj.indices, validate=False)

    @classmethod
    def empty(cls, n):
        """Edgeless graph on n vertices"""
        return cls(np.zeros(n + 1, dtype=np.int64), np.zeros(0, dtype=np.int64), validate=False)


def load_edge_list(source, n=None):
    """Read a 'u v' per line edge list into a Graph"""
    us = []
    vs = []
    for line_no, line in data_lines(source):
        tokens = line.split()
        if len(tokens) > 2:
            raise ValidationError(
                f"line {line_no}: expected 'u v', got {len(tokens)} columns (weighted input is not supported)",
                stage='graph')
        if len(tokens) < 2:
            raise ParseError("expected two vertex ids", line=line_no, stage='graph')

        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise ParseError(f"non-integer token in {line!r}", line=line_no, stage='graph')

        if u < 0 or v < 0:
            raise ParseError("vertex ids must be non-negative", line=line_no, stage='graph')
        if u == v:
            raise ValidationError(f"line {line_no}: self-loop on vertex {u}", stage='graph')

        us.append(u)
        vs.append(v)

    if not us and n is None:
        raise ValidationError("empty edge list and no vertex count given", stage='graph')

    seen = max(max(us), max(vs)) + 1 if us else 0
    if n is None:
        n = seen
    elif n < seen:
        raise BoundsError(f"edge list mentions vertex {seen - 1} but n={n}", stage='graph')

    graph = Graph.from_edges(n, np.column_stack((us, vs)) if us else np.zeros((0, 2), dtype=np.int64))
    logger.debug("loaded graph n=%d m=%d", graph.n, graph.m)
    return graph


def save_edge_list(graph, sink):
    """Write the canonical edge list (u < v, ascending), one edge per line"""
    for u, v in graph.edges():
        sink.write(f"{u} {v}\n")
