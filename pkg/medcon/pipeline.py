"""
Engine dispatch and the group -> consensus pipeline shared by the CLI and the API
"""
import logging
import time

from medcon import consensus
from medcon.baselines import EXACT_MAX_N, SMALL_INSTANCE_CAP, boem_run, exact_consensus
from medcon.errors import ContractError, DimensionError, RangeError
from medcon.grouping import DEFAULT_GRID, group_ensemble
from medcon.models.consensus import ConsensusOptions
from medcon.models.partition import require_same_n
from medcon.models.report import ConsensusResult, RunReport

logger = logging.getLogger(__name__)

ENGINES = ('median', 'boem', 'exact')
GROUP_MODES = ('largest', 'all')


def run_engine(graph, ensemble, engine='median', options=None,
               small_instance_cap=SMALL_INSTANCE_CAP, exact_max_n=EXACT_MAX_N):
    """Consensus of `ensemble` with the named engine; the graph is used by 'median' only"""
    ensemble = list(ensemble)
    if engine not in ENGINES:
        raise RangeError(f"unknown engine {engine!r}; choose from {list(ENGINES)}", stage='consensus')
    if engine == 'median':
        return consensus.run(graph, ensemble, options)

    if not ensemble:
        raise DimensionError("ensemble is empty", stage=engine)
    n = require_same_n(*ensemble)
    if n != graph.n:
        raise DimensionError(f"partitions cover {n} vertices but the graph has {graph.n}", stage=engine)

    if engine == 'boem':
        return boem_run(ensemble, cap=small_instance_cap)

    partition, optimum = exact_consensus(ensemble, max_n=exact_max_n)
    return ConsensusResult(partition, engine='exact', converged=True, applied_moves=[], final_total_mirkin=optimum)


class PipelineRun:
    """Grouping outcome (if any) and one (members, result, report) triple per consensus group"""

    def __init__(self, runs, grouping=None, sweep=None):
        self.runs = list(runs)
        self.grouping = grouping
        self.sweep = list(sweep or [])

    @property
    def reports(self):
        return [report for _, _, report in self.runs]

    @property
    def results(self):
        return [result for _, result, _ in self.runs]

    def to_dict(self):
        """Convert to dictionary for API responses"""
        return {
            'grouping': self.grouping.to_dict() if self.grouping is not None else None,
            'sweep': [record.to_dict() for record in self.sweep],
            'runs': [
                {'members': members, 'result': result.to_dict(), 'report': report.to_dict()}
                for members, result, report in self.runs
            ]
        }

    def __repr__(self):
        return f'<PipelineRun runs={len(self.runs)} grouped={self.grouping is not None}>'


def consensus_by_groups(graph, ensemble, grouping=None, engine='median', options=None, only_largest=False,
                        small_instance_cap=SMALL_INSTANCE_CAP, exact_max_n=EXACT_MAX_N):
    """Run the engine on every homogeneous group (or only the largest); [(members, result, report)]

    Without a grouping the whole ensemble is one group.
    """
    ensemble = list(ensemble)
    options = options or ConsensusOptions()
    if grouping is None:
        groups = [list(range(len(ensemble)))]
    elif only_largest:
        groups = [grouping.groups[grouping.largest_group]]
    else:
        groups = grouping.groups

    runs = []
    for members in groups:
        subset = [ensemble[i] for i in members]
        started = time.perf_counter()
        result = run_engine(graph, subset, engine=engine, options=options,
                            small_instance_cap=small_instance_cap, exact_max_n=exact_max_n)
        elapsed = time.perf_counter() - started
        report = RunReport.from_result(
            result,
            k=len(subset),
            wall_time=elapsed,
            workers=options.workers,
            lambda_used=grouping.lam if grouping is not None else None,
            group_sizes=grouping.group_sizes if grouping is not None else None,
        )
        logger.info("%s engine on %d partitions: total mirkin %s in %.3fs",
                    engine, len(subset), result.final_total_mirkin, elapsed)
        runs.append((list(members), result, report))
    return runs


def run_pipeline(graph, ensemble, engine='median', options=None, lam=None, auto_lambda=False,
                 group_mode='largest', metric='split_join', grid=DEFAULT_GRID,
                 small_instance_cap=SMALL_INSTANCE_CAP, exact_max_n=EXACT_MAX_N):
    """Optionally group the ensemble, then run the engine on the largest or on every group"""
    ensemble = list(ensemble)
    options = options or ConsensusOptions()
    if lam is not None and auto_lambda:
        raise ContractError("give either an explicit lambda or auto lambda, not both", stage='grouping')
    if group_mode not in GROUP_MODES:
        raise RangeError(f"unknown group mode {group_mode!r}; choose from {list(GROUP_MODES)}", stage='grouping')

    grouping = None
    sweep = []
    if lam is not None or auto_lambda:
        _, sweep, grouping = group_ensemble(ensemble, lam=lam, metric=metric, grid=grid, workers=options.workers)

    runs = consensus_by_groups(graph, ensemble, grouping, engine=engine, options=options,
                               only_largest=group_mode == 'largest',
                               small_instance_cap=small_instance_cap, exact_max_n=exact_max_n)
    return PipelineRun(runs, grouping=grouping, sweep=sweep)
