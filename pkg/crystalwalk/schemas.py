# -*- coding: utf-8 -*-

from fractions import Fraction

import simplejson
from marshmallow import EXCLUDE, Schema, ValidationError, fields, post_dump, post_load

from crystalwalk.lattice import TorusParams
from crystalwalk.loops import Loop
from crystalwalk.shapes import Shape, nu, reconstruct_from_shape

__all__ = [
    "ShapeSchema",
    "LoopSchema",
    "HeightFunctionSchema",
    "GraphSummarySchema",
    "DiffusivityReportSchema",
    "DiffusivityEstimateSchema",
    "StripStatisticsSchema",
    "GateReportSchema",
    "SimplexReportSchema",
    "CountingReportSchema",
    "TauReportSchema",
    "SuiteResultSchema",
    "VerificationReportSchema",
    "ArtifactSchema",
]


class Rational(fields.Field):
    """Exact rational written as a ``"p/q"`` string

    Floats (results of an iterative solve) pass through unchanged.
    """

    def __init__(self, **kwargs):
        kwargs.setdefault("allow_none", True)
        super(Rational, self).__init__(**kwargs)

    def _serialize(self, value, attr, obj, **kwargs):
        if value is None:
            return None
        if isinstance(value, (Fraction, int)):
            return str(Fraction(value))
        return float(value)

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, str):
            try:
                return Fraction(value)
            except ValueError:
                raise ValidationError("Not a rational number: %r" % value)
        if isinstance(value, (int, float)):
            return value
        raise ValidationError("Not a rational number: %r" % (value,))


class Pair(fields.List):
    def __init__(self, **kwargs):
        super(Pair, self).__init__(fields.Int(), **kwargs)

    def _deserialize(self, value, attr, data, **kwargs):
        value = super(Pair, self)._deserialize(value, attr, data, **kwargs)
        if len(value) != 2:
            raise ValidationError("Expected a pair, got %r" % (value,))
        return value


def _float_or_none(value):
    return None if value is None else float(value)


class BaseSchema(Schema):
    class Meta:
        render_module = simplejson
        unknown = EXCLUDE

    @post_load
    def make_object(self, data, **kwargs):
        try:
            model_class = self.context["models"][self.__class__.__name__]
        except KeyError:
            return data

        return model_class(**data)

    @classmethod
    def get_attribute_names(cls):
        return [
            key
            for key, value in cls._declared_fields.items()
            if isinstance(value, fields.FieldABC)
        ]


class GeometrySchema(BaseSchema):
    """Objects carrying their torus parameters"""

    p = fields.Method("get_p", deserialize="load_pair")
    n = fields.Method("get_n", deserialize="load_pair")

    def get_p(self, obj):
        return list(obj.params.p)

    def get_n(self, obj):
        return list(obj.params.n)

    def load_pair(self, value):
        return Pair().deserialize(value)

    @staticmethod
    def params_from(data):
        return TorusParams(data.pop("p"), data.pop("n"))


class ShapeSchema(GeometrySchema):
    edges = fields.Method("get_edges", deserialize="load_edges")
    a = Pair(allow_none=True)
    hex = fields.Method("get_hex", dump_only=True)

    def get_edges(self, shape):
        return shape.edge_indices

    def load_edges(self, value):
        return fields.List(fields.Int()).deserialize(value)

    def get_hex(self, shape):
        return shape.hex

    @post_load
    def make_object(self, data, **kwargs):
        params = self.params_from(data)
        bits = 0
        for index in data["edges"]:
            if not 0 <= index < params.edge_count:
                raise ValidationError("Edge index %d outside the torus" % index)
            bits |= 1 << index
        return Shape(params, bits, a=data.get("a"))


class LoopSchema(GeometrySchema):
    start = fields.Method("get_start", deserialize="load_start")
    moves = fields.Str(required=True)

    def get_start(self, loop):
        return list(loop.doubled_start)

    def load_start(self, value):
        value = Pair().deserialize(value)
        if value[0] % 2 != 1 or value[1] % 2 != 1:
            raise ValidationError("Doubled start coordinates must be odd, got %r" % (value,))
        return value

    @post_load
    def make_object(self, data, **kwargs):
        params = self.params_from(data)
        x2, y2 = data["start"]
        return Loop(params, ((x2 - 1) // 2, (y2 - 1) // 2), data["moves"])


class HeightFunctionSchema(GeometrySchema):
    """Height functions are stored as f(0, 0) and their down-step set"""

    base = fields.Int(required=True)
    shape = fields.Method("get_shape", deserialize="load_shape")

    def get_shape(self, f):
        return nu(f).edge_indices

    def load_shape(self, value):
        return fields.List(fields.Int()).deserialize(value)

    @post_load
    def make_object(self, data, **kwargs):
        params = self.params_from(data)
        bits = 0
        for index in data["shape"]:
            bits |= 1 << index
        return reconstruct_from_shape(Shape(params, bits), base=data["base"])


class GraphSummarySchema(BaseSchema):
    p = Pair()
    n = Pair()
    shape_count = fields.Int()
    edge_count = fields.Int()
    connected = fields.Bool()
    min_degree = fields.Int(allow_none=True)
    max_degree = fields.Int(allow_none=True)
    strategy = fields.Str()


class DiffusivityReportSchema(BaseSchema):
    p = Pair()
    n = Pair()
    shape_count = fields.Int()
    edge_count = fields.Int()
    sigma2_Y = Rational()
    p_same_shape = Rational()
    p_outside_P = Rational()
    sigma2_Xhat = Rational()
    limit_value = Rational()
    gap = Rational()
    solver_mode = fields.Str()
    residual = fields.Float(allow_none=True)
    sigma2_Xhat_float = fields.Function(
        lambda report: _float_or_none(report.sigma2_Xhat), dump_only=True
    )
    gap_float = fields.Function(lambda report: _float_or_none(report.gap), dump_only=True)


class DiffusivityEstimateSchema(BaseSchema):
    p = Pair()
    n = Pair()
    estimate = fields.Float()
    standard_error = fields.Float()
    runs = fields.Int()
    steps = fields.Int()
    burn_in = fields.Int()
    batch_window = fields.Int()
    batch_count = fields.Int()
    same_shape_frequency = fields.Float()
    run_estimates = fields.List(fields.Float())


class StripStatisticsSchema(BaseSchema):
    p = Pair()
    n = Pair()
    samples = fields.Int()
    eps = fields.List(Rational())
    narrow_fractions = fields.List(fields.Float())
    ks_statistic = fields.Float()
    ks_pvalue = fields.Float()
    disjoint_fraction = fields.Float()
    disjoint_standard_error = fields.Float()


class GateReportSchema(BaseSchema):
    x = fields.Int()
    y = fields.Int()
    eps = Rational()
    bound = Rational()
    samples = fields.Int()
    fraction = fields.Float()
    standard_error = fields.Float()
    chebyshev_lower_bound = fields.Float()
    step_probabilities = fields.List(fields.Float())


class SimplexReportSchema(BaseSchema):
    g = fields.Int()
    samples = fields.Int()
    integral = fields.Float()
    integral_standard_error = fields.Float()
    integral_exact = Rational()
    ordering_probability = fields.Float()
    ordering_standard_error = fields.Float()
    ordering_exact = Rational()
    conditional = fields.Float(allow_none=True)
    conditional_standard_error = fields.Float(allow_none=True)
    conditional_exact = Rational()


class CountingReportSchema(BaseSchema):
    p = Pair()
    n = Pair()
    samples = fields.Int()
    disjoint_samples = fields.Int()
    alternating_fraction = fields.Float(allow_none=True)
    standard_error = fields.Float(allow_none=True)
    expected = Rational()


class TauReportSchema(BaseSchema):
    shape = fields.Nested(ShapeSchema)
    pairs = fields.Int()
    total = Rational()
    passed = fields.Bool()
    failures = fields.List(fields.Dict())


class SuiteResultSchema(BaseSchema):
    name = fields.Str()
    passed = fields.Bool()
    checked = fields.Int()
    details = fields.Dict()
    locus = fields.Raw(allow_none=True)


class VerificationReportSchema(BaseSchema):
    p = Pair()
    n = Pair()
    suites = fields.Nested(SuiteResultSchema, many=True)
    passed = fields.Bool(dump_only=True)


class ArtifactSchema(BaseSchema):
    """Envelope around a command result

    The result is dumped with the schema of its own model; parsed artifacts keep
    it as plain data.
    """

    command = fields.Str(required=True)
    version = fields.Str()
    config = fields.Dict()
    seed = fields.Int(allow_none=True)
    result = fields.Method("dump_result", deserialize="load_result")
    duration = fields.Float(allow_none=True)

    def dump_result(self, artifact):
        return _dump_any(artifact.result)

    def load_result(self, value):
        return value

    @post_dump
    def drop_missing_duration(self, data, **kwargs):
        if data.get("duration") is None:
            data.pop("duration", None)
        return data


def _dump_any(value):
    """Dump a model, a list of models or plain data"""
    schema_name = getattr(type(value), "schema", None)
    if schema_name:
        return globals()[schema_name]().dump(value)
    if isinstance(value, (list, tuple)):
        return [_dump_any(v) for v in value]
    if isinstance(value, dict):
        return {k: _dump_any(v) for k, v in value.items()}
    if isinstance(value, Fraction):
        return str(value)
    return value
