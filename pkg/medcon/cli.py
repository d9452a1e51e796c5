"""
Command-line front end: gen -> group -> consensus -> compare
"""
import functools
import json
import os
import sys

import click
from flask import current_app
from flask.cli import with_appcontext

from medcon import create_app
from medcon.config import config as profiles
from medcon.errors import MedconError
from medcon.evaluation import DISTANCES, accuracy_vs_truth, best_input_mean_distance, median_ratio, \
    mean_distance_to_inputs
from medcon.grouping import build_distance_graph, lambda_sweep, select_lambda, threshold_components
from medcon.metrics import METRICS, compare, mirkin_contingency, mirkin_pairwise, total_mirkin, \
    total_mirkin_pairs
from medcon.models.consensus import ConsensusOptions
from medcon.models.graph import load_edge_list, save_edge_list
from medcon.models.partition import Partition, load_ensemble, load_partition, save_ensemble_tsv, save_partition
from medcon.pipeline import ENGINES, GROUP_MODES, run_pipeline
from medcon.schemas import run_report_schema
from medcon.synth import PlantedPartitionSpec, generate_instance, make_rng


class StageError(click.ClickException):
    """Runtime failure reported as 'error [<stage>]: <message>', exit code 1"""
    exit_code = 1

    def __init__(self, message, stage):
        super(StageError, self).__init__(message)
        self.stage = stage

    def show(self, file=None):
        click.echo(f"error [{self.stage}]: {self.message}", err=True)


def reports_errors(f):
    """Turn library and I/O failures into StageError"""
    @functools.wraps(f)
    def wrapper(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except MedconError as e:
            raise StageError(e.message, e.stage)
        except OSError as e:
            raise StageError(str(e), 'io')
    return wrapper


def _read_partition(path, n=None):
    with open(path) as handle:
        return load_partition(handle, n)


def _group_output_path(out, index):
    stem, suffix = os.path.splitext(out)
    return f"{stem}.group{index}{suffix}"


@click.command('consensus')
@click.option('--graph', 'graph_path', required=True, help='Edge list, one "u v" per line')
@click.option('--parts', 'parts_path', required=True, help='Ensemble TSV or directory of partition files')
@click.option('--out', required=True, help='Output partition file')
@click.option('--n', 'n', type=click.IntRange(min=0), default=None, help='Vertex count (default: from partitions)')
@click.option('--lambda', 'lam', type=click.FloatRange(0.0, 1.0), default=None, help='Grouping threshold')
@click.option('--auto-lambda', is_flag=True, help='Select the grouping threshold from the sweep')
@click.option('--group', 'group_mode', type=click.Choice(GROUP_MODES), default='largest', show_default=True)
@click.option('--workers', type=click.IntRange(min=1), default=None, help='Proposal-phase processes')
@click.option('--max-iters', 'max_iterations', type=click.IntRange(min=1), default=None)
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--engine', type=click.Choice(ENGINES), default='median', show_default=True)
@click.option('--report', 'report_path', default=None, help='Also write the run report as JSON')
@with_appcontext
@reports_errors
def consensus_command(graph_path, parts_path, out, n, lam, auto_lambda, group_mode, workers,
                      max_iterations, seed, engine, report_path):
    """Consensus partition of an ensemble on a graph"""
    if lam is not None and auto_lambda:
        raise click.UsageError('--lambda and --auto-lambda are mutually exclusive')

    config = current_app.config
    # the engines are deterministic; the seed is recorded for the run log only
    current_app.logger.debug("consensus seed %d", seed)

    ensemble = load_ensemble(parts_path, n)
    n = ensemble[0].n if n is None else n
    with open(graph_path) as handle:
        graph = load_edge_list(handle, n)

    options = ConsensusOptions.from_config(config, workers=workers, max_iterations=max_iterations)
    outcome = run_pipeline(
        graph, ensemble,
        engine=engine,
        options=options,
        lam=lam,
        auto_lambda=auto_lambda,
        group_mode=group_mode,
        metric=config['GROUPING_METRIC'],
        grid=config['LAMBDA_GRID'],
        small_instance_cap=config['SMALL_INSTANCE_CAP'],
        exact_max_n=config['EXACT_MAX_N'],
    )

    several = group_mode == 'all' and outcome.grouping is not None
    for index, (members, result, report) in enumerate(outcome.runs):
        path = _group_output_path(out, index) if several else out
        with open(path, 'w') as sink:
            save_partition(result.partition, sink)
        if several:
            click.echo(f"group\t{index}\t" + ','.join(str(i) for i in members), err=True)
        for line in report.to_tsv_lines():
            click.echo(line, err=True)

    if report_path is not None:
        payload = run_report_schema.dump(outcome.reports, many=True) if several \
            else run_report_schema.dump(outcome.reports[0])
        with open(report_path, 'w') as sink:
            json.dump(payload, sink, indent=2)
            sink.write('\n')


@click.command('group')
@click.option('--parts', 'parts_path', required=True, help='Ensemble TSV or directory of partition files')
@click.option('--lambda', 'lam', type=click.FloatRange(0.0, 1.0), default=None,
              help='Grouping threshold (default: selected from the sweep)')
@click.option('--metric', type=click.Choice(sorted(METRICS)), default=None)
@click.option('--workers', type=click.IntRange(min=1), default=1, show_default=True)
@with_appcontext
@reports_errors
def group_command(parts_path, lam, metric, workers):
    """Lambda sweep and homogeneous groups of an ensemble"""
    config = current_app.config
    ensemble = load_ensemble(parts_path)

    pdg = build_distance_graph(ensemble, metric=metric or config['GROUPING_METRIC'], workers=workers)
    sweep = lambda_sweep(pdg, config['LAMBDA_GRID'])
    click.echo('lambda\tn_groups\tlargest_size')
    for record in sweep:
        click.echo(f"{record.lam:.2f}\t{record.n_groups}\t{record.largest_size}")

    if lam is None:
        lam = select_lambda(sweep)
    grouping = threshold_components(pdg, lam)
    click.echo(f"selected_lambda\t{lam:.2f}")
    for group_id, members in enumerate(grouping.groups):
        click.echo(f"{group_id}: " + ','.join(str(i) for i in members))


@click.command('compare')
@click.argument('first')
@click.argument('second')
@with_appcontext
@reports_errors
def compare_command(first, second):
    """Mirkin, Rand, split-join and VI distances between two partition files"""
    p = _read_partition(first)
    q = _read_partition(second, p.n)
    values = compare(p, q)
    click.echo(f"mirkin {values['mirkin']}")
    click.echo(f"rand {values['rand']:.6f}")
    click.echo(f"split_join {values['split_join']:.6f}")
    click.echo(f"vi {values['vi']:.6f}")


@click.command('gen')
@click.option('--q', type=click.IntRange(min=1), default=10, show_default=True, help='Number of blocks')
@click.option('--s', type=click.IntRange(min=1), default=50, show_default=True, help='Block size')
@click.option('--p-in', type=click.FloatRange(0.0, 1.0), default=0.3, show_default=True)
@click.option('--p-out', type=click.FloatRange(0.0, 1.0), default=0.02, show_default=True)
@click.option('--seed', type=int, default=0, show_default=True)
@click.option('--ensemble', 'size', type=click.IntRange(min=1), default=16, show_default=True)
@click.option('--epsilon', type=click.FloatRange(0.0, 1.0), default=0.1, show_default=True)
@click.option('--out-dir', required=True, help='Directory for graph.el, truth.part and ensemble.tsv')
@with_appcontext
@reports_errors
def gen_command(q, s, p_in, p_out, seed, size, epsilon, out_dir):
    """Planted-partition graph, its truth and a perturbed ensemble"""
    spec = PlantedPartitionSpec(q, s, p_in, p_out, seed=seed)
    graph, truth, ensemble = generate_instance(spec, size, epsilon)

    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, 'graph.el'), 'w') as sink:
        save_edge_list(graph, sink)
    with open(os.path.join(out_dir, 'truth.part'), 'w') as sink:
        save_partition(truth, sink)
    with open(os.path.join(out_dir, 'ensemble.tsv'), 'w') as sink:
        save_ensemble_tsv(ensemble, sink)

    current_app.logger.info("generated %r: m=%d, %d partitions", spec, graph.m, len(ensemble))
    click.echo(f"n\t{graph.n}", err=True)
    click.echo(f"m\t{graph.m}", err=True)
    click.echo(f"k\t{len(ensemble)}", err=True)


@click.command('evaluate')
@click.option('--parts', 'parts_path', required=True, help='Ensemble TSV or directory of partition files')
@click.option('--consensus', 'consensus_path', required=True, help='Consensus partition file')
@click.option('--truth', 'truth_path', default=None, help='Ground-truth partition file')
@click.option('--metric', type=click.Choice(sorted(DISTANCES)), default='mirkin', show_default=True)
@with_appcontext
@reports_errors
def evaluate_command(parts_path, consensus_path, truth_path, metric):
    """How close a consensus comes to being a median of its ensemble"""
    ensemble = load_ensemble(parts_path)
    consensus = _read_partition(consensus_path, ensemble[0].n)

    best, best_mean = best_input_mean_distance(ensemble, metric)
    click.echo(f"mean_distance\t{mean_distance_to_inputs(consensus, ensemble, metric):.6f}")
    click.echo(f"best_input\t{best}")
    click.echo(f"best_input_mean_distance\t{best_mean:.6f}")
    click.echo(f"median_ratio\t{median_ratio(consensus, ensemble, metric):.6f}")
    click.echo(f"total_mirkin\t{total_mirkin(consensus, ensemble)}")

    if truth_path is not None:
        truth = _read_partition(truth_path, consensus.n)
        accuracy = accuracy_vs_truth(consensus, truth, ensemble, metric='rand')
        click.echo(f"truth_rand_consensus\t{accuracy['consensus']:.6f}")
        click.echo(f"truth_rand_inputs_mean\t{accuracy['inputs_mean']:.6f}")


def _random_partition(rng, n):
    return Partition(rng.integers(0, int(rng.integers(1, n + 1)), size=n))


@click.command('metrics-selftest')
@click.option('--rounds', type=click.IntRange(min=1), default=500, show_default=True)
@click.option('--seed', type=int, default=0, show_default=True)
@with_appcontext
@reports_errors
def metrics_selftest_command(rounds, seed):
    """Contingency vs pair-enumeration Mirkin, and the pair-count identity, on random instances"""
    rng = make_rng(seed)

    oracle_misses = 0
    for _ in range(rounds):
        n = int(rng.integers(1, 51))
        p, q = _random_partition(rng, n), _random_partition(rng, n)
        if mirkin_contingency(p, q) != mirkin_pairwise(p, q):
            oracle_misses += 1

    identity_misses = 0
    for _ in range(rounds):
        n = int(rng.integers(1, 31))
        k = int(rng.integers(1, 7))
        ensemble = [_random_partition(rng, n) for _ in range(k)]
        candidate = _random_partition(rng, n)
        if total_mirkin(candidate, ensemble) != total_mirkin_pairs(candidate, ensemble):
            identity_misses += 1

    click.echo('check\trounds\tmismatches')
    click.echo(f"mirkin_oracle\t{rounds}\t{oracle_misses}")
    click.echo(f"pair_identity\t{rounds}\t{identity_misses}")
    if oracle_misses or identity_misses:
        current_app.logger.error("metrics self-test found %d mismatches", oracle_misses + identity_misses)
        click.get_current_context().exit(1)


COMMANDS = (consensus_command, group_command, compare_command, gen_command, evaluate_command,
            metrics_selftest_command)


@click.group('medcon')
@click.option('--config', 'config_name', envvar='MEDCON_CONFIG', type=click.Choice(sorted(profiles)), default=None,
              help='Configuration profile (default: $MEDCON_CONFIG or "default")')
@click.pass_context
def cli(ctx, config_name):
    """Graph median consensus of partition ensembles"""
    app = create_app(config_name)
    ctx.with_resource(app.app_context())


for _command in COMMANDS:
    cli.add_command(_command)


def register_commands(app):
    """Expose the subcommands under `flask`"""
    for command in COMMANDS:
        app.cli.add_command(command)


def main(argv=None):
    """Console entry point; returns the process exit code"""
    args = sys.argv[1:] if argv is None else list(argv)
    try:
        rv = cli.main(args=args, prog_name='medcon', standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.Abort:
        click.echo('Aborted!', err=True)
        return 1
    # standalone_mode=False hands back ctx.exit codes as the return value
    return rv if isinstance(rv, int) else 0


if __name__ == '__main__':
    sys.exit(main())
