"""
Marshmallow schemas for API requests and run reports
"""
from marshmallow import Schema, ValidationError, fields, post_load, validate, validates_schema

from medcon.metrics import METRICS
from medcon.models.report import RunReport
from medcon.pipeline import ENGINES, GROUP_MODES


def _labels(**kwargs):
    return fields.List(fields.Integer(validate=validate.Range(min=0)), **kwargs)


class CompareRequestSchema(Schema):
    p = _labels(required=True)
    q = _labels(required=True)

    @validates_schema
    def validate_lengths(self, data, **kwargs):
        if len(data['p']) != len(data['q']):
            raise ValidationError('p and q must label the same number of vertices', 'q')


class GroupRequestSchema(Schema):
    ensemble = fields.List(_labels(), required=True, validate=validate.Length(min=1))
    lam = fields.Float(data_key='lambda', load_default=None, validate=validate.Range(min=0.0, max=1.0))
    metric = fields.String(load_default='split_join', validate=validate.OneOf(sorted(METRICS)))


class ConsensusRequestSchema(Schema):
    n = fields.Integer(load_default=None, validate=validate.Range(min=0))
    edges = fields.List(
        fields.List(fields.Integer(validate=validate.Range(min=0)), validate=validate.Length(equal=2)),
        load_default=list)
    ensemble = fields.List(_labels(), required=True, validate=validate.Length(min=1))
    engine = fields.String(load_default='median', validate=validate.OneOf(ENGINES))
    workers = fields.Integer(load_default=None, validate=validate.Range(min=1))
    max_iterations = fields.Integer(load_default=None, validate=validate.Range(min=1))
    lam = fields.Float(data_key='lambda', load_default=None, validate=validate.Range(min=0.0, max=1.0))
    auto_lambda = fields.Boolean(load_default=False)
    group = fields.String(load_default='largest', validate=validate.OneOf(GROUP_MODES))

    @validates_schema
    def validate_lambda_choice(self, data, **kwargs):
        if data.get('lam') is not None and data.get('auto_lambda'):
            raise ValidationError('give either lambda or auto_lambda, not both', 'auto_lambda')


class SweepRecordSchema(Schema):
    lam = fields.Float(data_key='lambda')
    n_groups = fields.Integer()
    largest_size = fields.Integer()


class RunReportSchema(Schema):
    iterations = fields.Integer()
    applied_moves = fields.List(fields.Integer())
    final_total_mirkin = fields.Integer(allow_none=True)
    wall_time = fields.Float()
    workers = fields.Integer()
    lambda_used = fields.Float(allow_none=True)
    group_sizes = fields.List(fields.Integer())
    engine = fields.String()
    converged = fields.Boolean()
    n = fields.Integer()
    k = fields.Integer()

    @post_load
    def make_report(self, data, **kwargs):
        return RunReport(**data)


compare_request_schema = CompareRequestSchema()
group_request_schema = GroupRequestSchema()
consensus_request_schema = ConsensusRequestSchema()
sweep_record_schema = SweepRecordSchema()
run_report_schema = RunReportSchema()
