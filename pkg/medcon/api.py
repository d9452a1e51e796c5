"""
API routes for REST API endpoints
"""
from flask import Blueprint, current_app, jsonify, request
from marshmallow import ValidationError

from medcon import __version__
from medcon.grouping import lambda_sweep, build_distance_graph, select_lambda, threshold_components
from medcon.metrics import compare
from medcon.models.consensus import ConsensusOptions
from medcon.models.graph import Graph
from medcon.models.partition import Partition
from medcon.pipeline import run_pipeline
from medcon.schemas import (compare_request_schema, consensus_request_schema, group_request_schema,
                            run_report_schema, sweep_record_schema)

api_bp = Blueprint('api', __name__)


def _payload():
    data = request.get_json(silent=True)
    if data is None:
        raise ValidationError('JSON body required')
    return data


@api_bp.route('/health', methods=['GET'])
def health():
    """Liveness check"""
    return jsonify({'status': 'ok', 'version': __version__})


@api_bp.route('/compare', methods=['POST'])
def compare_partitions():
    """Four distances between two partitions"""
    data = compare_request_schema.load(_payload())
    return jsonify(compare(Partition(data['p']), Partition(data['q'])))


@api_bp.route('/group', methods=['POST'])
def group():
    """Lambda sweep and homogeneous groups of an ensemble"""
    data = group_request_schema.load(_payload())
    ensemble = [Partition(labels) for labels in data['ensemble']]

    pdg = build_distance_graph(ensemble, metric=data['metric'])
    sweep = lambda_sweep(pdg, current_app.config['LAMBDA_GRID'])
    lam = data['lam'] if data['lam'] is not None else select_lambda(sweep)
    grouping = threshold_components(pdg, lam)

    return jsonify({
        'sweep': sweep_record_schema.dump(sweep, many=True),
        'selected_lambda': lam,
        'grouping': grouping.to_dict()
    })


@api_bp.route('/consensus', methods=['POST'])
def consensus():
    """Consensus partition of an ensemble on a graph"""
    data = consensus_request_schema.load(_payload())
    ensemble = [Partition(labels) for labels in data['ensemble']]
    n = data['n'] if data['n'] is not None else ensemble[0].n
    graph = Graph.from_edges(n, data['edges'])

    config = current_app.config
    options = ConsensusOptions.from_config(
        config, workers=data['workers'], max_iterations=data['max_iterations'])
    outcome = run_pipeline(
        graph, ensemble,
        engine=data['engine'],
        options=options,
        lam=data['lam'],
        auto_lambda=data['auto_lambda'],
        group_mode=data['group'],
        metric=config['GROUPING_METRIC'],
        grid=config['LAMBDA_GRID'],
        small_instance_cap=config['SMALL_INSTANCE_CAP'],
        exact_max_n=config['EXACT_MAX_N'],
    )
    current_app.logger.info("api consensus: n=%d k=%d engine=%s", n, len(ensemble), data['engine'])

    return jsonify({
        'runs': [
            {'members': members, 'labels': result.partition.labels.tolist(), 'report': run_report_schema.dump(report)}
            for members, result, report in outcome.runs
        ],
        'grouping': outcome.grouping.to_dict() if outcome.grouping is not None else None
    })


@api_bp.errorhandler(ValidationError)
def invalid_request(error):
    return jsonify({'error': error.messages}), 400


@api_bp.errorhandler(404)
def not_found(error):
    return jsonify({'error': 'Resource not found'}), 404


@api_bp.errorhandler(500)
def internal_error(error):
    return jsonify({'error': 'Internal server error'}), 500
