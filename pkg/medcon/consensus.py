"""
Median consensus optimizer: neighbor-restricted greedy moves with batched, validated apply
"""
import logging

import numpy as np

from medcon.errors import BoundsError, ContractError, DimensionError
from medcon.metrics import total_mirkin, total_pair_distance
from medcon.models.consensus import ConsensusOptions, ConsensusState, MoveProposal
from medcon.models.partition import build_membership_matrix, require_same_n
from medcon.models.report import ConsensusResult
from medcon.parallel import ProposalEvaluator, cluster_label_counts, lookup_counts

logger = logging.getLogger(__name__)


def init_singletons(graph):
    """Every vertex in its own cluster; cluster id = vertex id"""
    return ConsensusState.singletons(graph.n)


def _cluster_gain(state, mm, v, c, exclude_self):
    """sum over u in c (u != v) of (2 delta_uv - k)"""
    members = state.members[c]
    if not members:
        return 0
    others = np.fromiter(members, dtype=np.int64, count=len(members))
    if exclude_self:
        others = others[others != v]
        if others.shape[0] == 0:
            return 0
    distances = mm.distances_to(v, others)
    return int(2 * distances.sum() - mm.k * others.shape[0])


def delta_d(state, mm, v, target):
    """Exact change of the objective if v moves to `target` (self term excluded)"""
    source = state.cluster_of(v)
    state.check_cluster(target)
    if target == source:
        raise ContractError(f"vertex {v} already belongs to cluster {target}", stage='consensus')
    return _cluster_gain(state, mm, v, target, False) - _cluster_gain(state, mm, v, source, True)


def candidate_clusters(state, graph, v):
    """Clusters holding a neighbor of v, excluding v's own; ascending"""
    own = state.cluster_of(v)
    found = np.unique(state.assignment[graph.neighbors(v)])
    return found[found != own]


def best_move(state, mm, graph, v):
    """Best strictly improving neighbor-cluster move for v, or None"""
    best = None
    for c in candidate_clusters(state, graph, v).tolist():
        gain = delta_d(state, mm, v, c)
        if gain < 0 and (best is None or gain < best.delta):
            best = MoveProposal(v, state.cluster_of(v), c, gain)
    return best


def compute_iteration_moves(state, mm, graph, evaluator=None, workers=1, chunk_edges=262144):
    """One proposal per improving vertex, all scored against the start-of-iteration snapshot"""
    snapshot = state.snapshot()
    if evaluator is None:
        with ProposalEvaluator(graph, mm, workers=workers, chunk_edges=chunk_edges) as own:
            columns = own.propose(snapshot)
    else:
        columns = evaluator.propose(snapshot)

    return [MoveProposal(v, a, b, d) for v, a, b, d in zip(*(column.tolist() for column in columns))]


def _replay_table(state, mm, vertices, sources, targets):
    """Live counts for every (cluster, column, label) key the replay can read or write

    Returns the counts and, per proposal, the k positions of its source and
    target keys. Only v itself moves v, so the positions stay valid for the
    whole batch.
    """
    n, k = mm.entries.shape
    columns = np.arange(k, dtype=np.int64)
    rows = mm.entries[vertices]
    source_keys = (sources[:, None] * k + columns) * n + rows
    target_keys = (targets[:, None] * k + columns) * n + rows
    needed = np.unique(np.concatenate((source_keys.ravel(), target_keys.ravel())))

    touched = np.unique(np.concatenate((sources, targets)))
    inside = np.flatnonzero(np.isin(state.assignment, touched))
    keys, counts = cluster_label_counts(state.assignment, mm.entries, vertices=inside)
    live = lookup_counts(keys, counts, needed)
    return live, np.searchsorted(needed, source_keys), np.searchsorted(needed, target_keys)


def validate_and_apply(state, mm, proposals):
    """Replay proposals by ascending vertex against the live state; apply those still improving"""
    if not proposals:
        return 0
    proposals = sorted(proposals, key=lambda p: p.vertex)
    vertices = np.array([p.vertex for p in proposals], dtype=np.int64)
    targets = np.array([p.to_cluster for p in proposals], dtype=np.int64)
    if np.any(vertices[1:] == vertices[:-1]):
        raise ContractError("at most one proposal per vertex", stage='consensus')
    if vertices[0] < 0 or vertices[-1] >= state.n:
        raise BoundsError(f"proposal vertex out of range for n={state.n}", stage='consensus')
    if targets.min() < 0 or targets.max() >= state.n:
        raise BoundsError(f"proposal target out of range for n={state.n}", stage='consensus')

    sources = state.assignment[vertices]
    live, at_source, at_target = _replay_table(state, mm, vertices, sources, targets)
    k = mm.k
    sizes = state.sizes

    applied = 0
    for i, (v, source, target) in enumerate(zip(vertices.tolist(), sources.tolist(), targets.tolist())):
        if source == target:
            continue
        here, there = at_source[i], at_target[i]
        # target term k|c'| - 2 S(v,c');  source term (v excluded) k|c| + k - 2 S(v,c)
        gain = ((k * int(sizes[target]) - 2 * int(live[there].sum()))
                - (k * int(sizes[source]) + k - 2 * int(live[here].sum())))
        if gain < 0:
            live[here] -= 1
            live[there] += 1
            state.move(v, target, gain)
            applied += 1
    return applied


def surrogate_objective(state, mm):
    """sum over co-clustered pairs u < v of (2 delta_uv - k), from per-cluster label counts"""
    k = mm.k
    sizes = state.sizes
    _, counts = cluster_label_counts(state.assignment, mm.entries)
    # intra pairs weighted by k, minus twice the intra pairs that agree, summed over columns
    intra = int((sizes * (sizes - 1) // 2).sum())
    agreeing = int((counts * (counts - 1) // 2).sum())
    return k * intra - 2 * agreeing


def surrogate_objective_pairs(state, mm):
    """Same value as surrogate_objective by walking intra-cluster pairs"""
    k = mm.k
    total = 0
    for group in state.members:
        if len(group) < 2:
            continue
        rows = mm.entries[np.fromiter(sorted(group), dtype=np.int64, count=len(group))]
        for i in range(rows.shape[0] - 1):
            delta = np.count_nonzero(rows[i + 1:] != rows[i], axis=1)
            total += int((2 * delta - k).sum())
    return total


def run(graph, ensemble, options=None, **overrides):
    """Greedy median consensus of `ensemble` on `graph`; returns a ConsensusResult"""
    if options is None:
        options = ConsensusOptions(**overrides)
    ensemble = list(ensemble)
    if not ensemble:
        raise DimensionError("ensemble is empty", stage='consensus')
    n = require_same_n(*ensemble)
    if n != graph.n:
        raise DimensionError(f"partitions cover {n} vertices but the graph has {graph.n}", stage='consensus')

    mm = build_membership_matrix(ensemble)
    state = init_singletons(graph)

    # total_mirkin(C) = sum_{u<v} (k - delta_uv) + surrogate(C)
    baseline = mm.k * (n * (n - 1) // 2) - total_pair_distance(ensemble)
    trace = [baseline + state.live_objective]
    applied_moves = []
    converged = False

    with ProposalEvaluator(graph, mm, workers=options.workers, chunk_edges=options.chunk_edges) as evaluator:
        for iteration in range(1, options.max_iterations + 1):
            proposals = compute_iteration_moves(state, mm, graph, evaluator=evaluator)
            applied = validate_and_apply(state, mm, proposals)
            applied_moves.append(applied)
            trace.append(baseline + state.live_objective)

            logger.debug("iteration %d: %d proposals, %d applied, objective %d",
                         iteration, len(proposals), applied, state.live_objective)

            if options.check_objective:
                recomputed = surrogate_objective(state, mm)
                if recomputed != state.live_objective:
                    raise ContractError(
                        f"live objective {state.live_objective} drifted from recomputed {recomputed}",
                        stage='consensus')

            if applied == 0:
                converged = True
                break

    if not converged:
        logger.warning("consensus stopped after %d iterations without converging", options.max_iterations)

    partition = state.to_partition()
    final = total_mirkin(partition, ensemble)
    logger.info("consensus: %d iterations, %d clusters, total mirkin %d",
                len(applied_moves), partition.num_clusters, final)
    return ConsensusResult(
        partition,
        engine='median',
        converged=converged,
        applied_moves=applied_moves,
        total_mirkin_trace=trace,
        final_total_mirkin=final,
    )
