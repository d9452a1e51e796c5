"""
Proposal-phase kernel and its worker pool

The kernel scores every (vertex, neighbor cluster) pair of a vertex range
against a frozen assignment. For a cluster c and vertex v,

    sum_{u in c} delta_uv = k|c| - sum_j count(c, j, mm[v, j])

where count(c, j, l) is the number of members of c carrying label l in
column j. The count table has at most n*k entries.
"""
import logging
import multiprocessing

import numpy as np

from medcon.errors import SizeError

logger = logging.getLogger(__name__)

_EMPTY = np.zeros(0, dtype=np.int64)


def cluster_label_counts(assignment, entries, vertices=None):
    """Sorted (cluster, column, label) keys with their member counts

    With `vertices`, only those vertices are counted; keys keep the full-n radix.
    """
    n, k = entries.shape
    if n == 0:
        return _EMPTY, _EMPTY
    if n * n * k >= 2 ** 62:
        raise SizeError(f"n={n}, k={k} overflows the 64-bit count key", stage='consensus')
    if vertices is not None:
        if vertices.shape[0] == 0:
            return _EMPTY, _EMPTY
        assignment = assignment[vertices]
        entries = entries[vertices]
    columns = np.arange(k, dtype=np.int64)
    keys = (assignment[:, None] * k + columns) * n + entries
    return np.unique(keys.ravel(), return_counts=True)


def lookup_counts(keys, counts, query):
    """count for every key in `query` (0 where absent)"""
    if keys.shape[0] == 0:
        return np.zeros(query.shape, dtype=np.int64)
    pos = np.searchsorted(keys, query)
    np.minimum(pos, keys.shape[0] - 1, out=pos)
    return np.where(keys[pos] == query, counts[pos], 0)


def _agreement(keys, counts, clusters, rows, n, k):
    """sum_j count(cluster, j, row_j) per pair"""
    columns = np.arange(k, dtype=np.int64)
    query = (clusters[:, None] * k + columns) * n + rows
    return lookup_counts(keys, counts, query).sum(axis=1)


def evaluate_span(lo, hi, assignment, sizes, keys, counts, indptr, indices, entries):
    """Best improving move of every vertex in [lo, hi) against the frozen assignment

    Returns four aligned arrays (vertex, from_cluster, to_cluster, delta),
    ascending by vertex; ties in delta go to the smallest cluster id.
    """
    n, k = entries.shape
    start, stop = indptr[lo], indptr[hi]
    if start == stop:
        return _EMPTY, _EMPTY, _EMPTY, _EMPTY

    src = np.repeat(np.arange(lo, hi, dtype=np.int64), np.diff(indptr[lo:hi + 1]))
    tgt = assignment[indices[start:stop]]
    keep = tgt != assignment[src]
    if not keep.any():
        return _EMPTY, _EMPTY, _EMPTY, _EMPTY

    # distinct (vertex, candidate cluster) pairs, sorted by vertex then cluster
    pair = np.unique(src[keep] * n + tgt[keep])
    src = pair // n
    tgt = pair % n
    own = assignment[src]
    rows = entries[src]

    agree_tgt = _agreement(keys, counts, tgt, rows, n, k)
    agree_own = _agreement(keys, counts, own, rows, n, k)

    # target term: k|c'| - 2 S(v,c');  source term (v excluded): k|c| + k - 2 S(v,c)
    delta = (k * sizes[tgt] - 2 * agree_tgt) - (k * sizes[own] + k - 2 * agree_own)

    order = np.lexsort((tgt, delta, src))
    src, tgt, own, delta = src[order], tgt[order], own[order], delta[order]
    first = np.ones(src.shape[0], dtype=bool)
    first[1:] = src[1:] != src[:-1]
    best = first & (delta < 0)
    return src[best], own[best], tgt[best], delta[best]


def split_balanced(indptr, k, parts):
    """Contiguous vertex ranges of roughly equal estimated cost (deg(v) + 1) * k"""
    n = indptr.shape[0] - 1
    if n == 0:
        return []
    cost = np.cumsum((np.diff(indptr) + 1) * k)
    total = cost[-1]
    cuts = np.searchsorted(cost, total * np.arange(1, parts) / parts, side='right')
    bounds = np.unique(np.concatenate(([0], cuts, [n])))
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def _split_by_edges(lo, hi, indptr, chunk_edges):
    """Sub-ranges of [lo, hi) holding at most ~chunk_edges directed edges each"""
    spans = []
    while lo < hi:
        limit = indptr[lo] + chunk_edges
        nxt = int(np.searchsorted(indptr, limit, side='right')) - 1
        nxt = min(max(nxt, lo + 1), hi)
        spans.append((lo, nxt))
        lo = nxt
    return spans


def range_label_counts(lo, hi, assignment, indptr, indices, entries):
    """Count table restricted to the clusters that vertices in [lo, hi) or their neighbors belong to"""
    n = entries.shape[0]
    if lo == 0 and hi == n:
        return cluster_label_counts(assignment, entries)
    touched = np.unique(np.concatenate((assignment[lo:hi], assignment[indices[indptr[lo]:indptr[hi]]])))
    vertices = np.flatnonzero(np.isin(assignment, touched))
    return cluster_label_counts(assignment, entries, vertices=vertices)


def propose_range(lo, hi, assignment, indptr, indices, entries, chunk_edges, table=None):
    """Evaluate [lo, hi) in edge-bounded chunks; concatenated proposal arrays"""
    n = entries.shape[0]
    if table is None:
        table = range_label_counts(lo, hi, assignment, indptr, indices, entries)
    keys, counts = table
    sizes = np.bincount(assignment, minlength=n).astype(np.int64)

    pieces = [
        evaluate_span(a, b, assignment, sizes, keys, counts, indptr, indices, entries)
        for a, b in _split_by_edges(lo, hi, indptr, chunk_edges)
    ]
    if not pieces:
        return _EMPTY, _EMPTY, _EMPTY, _EMPTY
    return tuple(np.concatenate(column) for column in zip(*pieces))


# Per-process read-only state installed by the pool initializer
_WORKER = {}


def _init_worker(indptr, indices, entries, chunk_edges):
    _WORKER['indptr'] = indptr
    _WORKER['indices'] = indices
    _WORKER['entries'] = entries
    _WORKER['chunk_edges'] = chunk_edges


def _propose_task(args):
    assignment, lo, hi = args
    return propose_range(
        lo, hi, assignment,
        _WORKER['indptr'], _WORKER['indices'], _WORKER['entries'], _WORKER['chunk_edges'])


def pool_context():
    methods = multiprocessing.get_all_start_methods()
    return multiprocessing.get_context('fork' if 'fork' in methods else None)


class ProposalEvaluator:
    """Runs the proposal phase on 1..N processes; output is independent of N"""

    def __init__(self, graph, mm, workers=1, chunk_edges=262144):
        self.graph = graph
        self.mm = mm
        self.workers = max(int(workers), 1)
        self.chunk_edges = max(int(chunk_edges), 1)
        self._pool = None
        self._ranges = split_balanced(graph.indptr, mm.k, self.workers)

    def __enter__(self):
        if self.workers > 1 and len(self._ranges) > 1:
            self._pool = pool_context().Pool(
                processes=len(self._ranges),
                initializer=_init_worker,
                initargs=(self.graph.indptr, self.graph.indices, self.mm.entries, self.chunk_edges),
            )
            logger.debug("started %d proposal workers", len(self._ranges))
        return self

    def __exit__(self, exc_type, exc, tb):
        self.close()

    def close(self):
        if self._pool is not None:
            self._pool.close()
            self._pool.join()
            self._pool = None

    def propose(self, assignment):
        """(vertex, from_cluster, to_cluster, delta) arrays for every improving vertex"""
        if self._pool is None:
            return propose_range(
                0, self.graph.n, assignment,
                self.graph.indptr, self.graph.indices, self.mm.entries, self.chunk_edges)

        tasks = [(assignment, lo, hi) for lo, hi in self._ranges]
        pieces = self._pool.map(_propose_task, tasks)
        return tuple(np.concatenate(column) for column in zip(*pieces))

    def __repr__(self):
        return f'<ProposalEvaluator workers={self.workers} ranges={len(self._ranges)}>'
