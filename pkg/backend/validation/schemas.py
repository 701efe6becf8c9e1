"""
Marshmallow schemas for command, request and document validation.
"""
import math
from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np
from marshmallow import Schema, ValidationError, fields, post_load, validate, validates_schema

from errors import HelixError
from geometry.frenet import make_grid
from geometry.intrinsics import ScalarFunction, parse_descriptor

COMMANDS = ['synth', 'catalog', 'verify', 'audit', 'plot', 'list']
FORMATS = ['csv', 'json', 'xlsx', 'svg']
PROJECTIONS = ['x1x2', 'x1x3', 'x2x3']
AXES = ['spacelike', 'timelike']


def parse_grid(text: str):
    """'min:max:step' to a (min, max, step) triple."""
    parts = str(text).split(':')
    if len(parts) != 3:
        raise ValidationError("Grid must be written min:max:step")
    try:
        lo, hi, step = (float(p) for p in parts)
    except ValueError:
        raise ValidationError("Grid bounds and step must be numbers")
    _check_grid(lo, hi, step)
    return lo, hi, step


def _check_grid(lo, hi, step):
    if not all(math.isfinite(v) for v in (lo, hi, step)):
        raise ValidationError("Grid bounds and step must be finite")
    if not step > 0:
        raise ValidationError("Grid step must be positive")
    if not lo < hi:
        raise ValidationError("Grid needs min < max")


def parse_params(text: str) -> Dict[str, float]:
    """'kappa=3,tau=2' to {'kappa': 3.0, 'tau': 2.0}."""
    params = {}
    for item in filter(None, (chunk.strip() for chunk in str(text).split(','))):
        key, sep, value = item.partition('=')
        if not sep or not key.strip():
            raise ValidationError(f"Parameter '{item}' is not of the form key=value")
        try:
            params[key.strip()] = float(value)
        except ValueError:
            raise ValidationError(f"Parameter '{key.strip()}' is not a number")
    return params


class IntrinsicDescriptorField(fields.Field):
    """A curvature or torsion descriptor such as const:3, rminus:2 or table:path.csv."""

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, ScalarFunction):
            return value
        try:
            return parse_descriptor(value)
        except HelixError as e:
            raise ValidationError(e.message)

    def _serialize(self, value, attr, obj, **kwargs):
        return None if value is None else value.describe()


class GridField(fields.Field):
    """A 'min:max:step' string loaded as the inclusive uniform grid."""

    def _deserialize(self, value, attr, data, **kwargs):
        lo, hi, step = parse_grid(value)
        return make_grid(lo, hi, step)


class CatalogParamsField(fields.Field):
    """Catalog parameters as 'key=value,...' or a mapping of numbers."""

    def _deserialize(self, value, attr, data, **kwargs):
        if isinstance(value, dict):
            try:
                return {str(k): float(v) for k, v in value.items()}
            except (TypeError, ValueError):
                raise ValidationError("Catalog parameters must be numbers")
        return parse_params(value)

    def _serialize(self, value, attr, obj, **kwargs):
        return dict(value or {})


class GridSchema(Schema):
    """Grid given as separate bounds, as sent by HTTP clients."""
    s_min = fields.Float(required=True)
    s_max = fields.Float(required=True)
    step = fields.Float(required=True)

    @validates_schema
    def check_bounds(self, data, **kwargs):
        _check_grid(data['s_min'], data['s_max'], data['step'])

    @post_load
    def make(self, data, **kwargs):
        return make_grid(data['s_min'], data['s_max'], data['step'])


@dataclass
class RunConfig:
    command: str
    kappa: Optional[ScalarFunction] = None
    tau: Optional[ScalarFunction] = None
    epsilon: Optional[int] = None
    grid: Optional[np.ndarray] = None
    name: Optional[str] = None
    params: Dict[str, float] = field(default_factory=dict)
    input: Optional[str] = None
    output: Optional[str] = None
    format: Optional[str] = None
    tol: Optional[float] = None
    mirror: bool = False
    axis: Optional[str] = None
    projection: str = 'x1x2'
    frames: bool = False


class RunConfigSchema(Schema):
    """One CLI invocation."""
    command = fields.Str(required=True, validate=validate.OneOf(COMMANDS))
    kappa = IntrinsicDescriptorField(allow_none=True, load_default=None)
    tau = IntrinsicDescriptorField(allow_none=True, load_default=None)
    epsilon = fields.Int(allow_none=True, load_default=None, validate=validate.OneOf([-1, 1]))
    grid = GridField(allow_none=True, load_default=None)
    name = fields.Str(allow_none=True, load_default=None)
    params = CatalogParamsField(load_default=dict)
    input = fields.Str(allow_none=True, load_default=None)
    output = fields.Str(allow_none=True, load_default=None)
    format = fields.Str(allow_none=True, load_default=None, validate=validate.OneOf(FORMATS))
    tol = fields.Float(allow_none=True, load_default=None, validate=validate.Range(min=0, min_inclusive=False))
    mirror = fields.Bool(load_default=False)
    axis = fields.Str(allow_none=True, load_default=None, validate=validate.OneOf(AXES))
    projection = fields.Str(load_default='x1x2', validate=validate.OneOf(PROJECTIONS))
    frames = fields.Bool(load_default=False)

    @validates_schema
    def check_command(self, data, **kwargs):
        command = data['command']
        if command == 'synth':
            missing = [k for k in ('kappa', 'tau', 'epsilon') if data.get(k) is None]
            if missing:
                raise ValidationError(f"synth needs {', '.join(missing)}")
        elif command == 'catalog' and not data.get('name'):
            raise ValidationError("catalog needs an entry name")
        elif command == 'verify' and not data.get('name'):
            if not data.get('input') or data.get('kappa') is None or data.get('tau') is None:
                raise ValidationError("verify needs an entry name, or an input file with kappa and tau")
        elif command == 'plot' and not (data.get('input') or data.get('name')):
            raise ValidationError("plot needs an input file or an entry name")
        elif command == 'audit' and not data.get('output'):
            raise ValidationError("audit needs an output directory")

    @post_load
    def make(self, data, **kwargs):
        return RunConfig(**data)


class SynthRequestSchema(Schema):
    """POST /api/curves/synth and /plot."""
    kappa = IntrinsicDescriptorField(required=True)
    tau = IntrinsicDescriptorField(required=True)
    epsilon = fields.Int(required=True, validate=validate.OneOf([-1, 1]))
    grid = fields.Nested(GridSchema, required=True)
    mirror = fields.Bool(load_default=False)
    axis = fields.Str(allow_none=True, load_default=None, validate=validate.OneOf(AXES))
    projection = fields.Str(load_default='x1x2', validate=validate.OneOf(PROJECTIONS))
    frames = fields.Bool(load_default=False)


class CatalogParamsSchema(Schema):
    """Query or body parameters for catalog endpoints."""
    params = CatalogParamsField(load_default=dict)
    s = fields.Float(allow_none=True, load_default=None)
    step = fields.Float(allow_none=True, load_default=None, validate=validate.Range(min=0, min_inclusive=False))
    tol = fields.Float(allow_none=True, load_default=None, validate=validate.Range(min=0, min_inclusive=False))


class CurveDocumentSchema(Schema):
    """The JSON exchange document for sampled curves."""
    meta = fields.Dict(load_default=dict)
    epsilon = fields.Int(allow_none=True, load_default=None, validate=validate.OneOf([-1, 1]))
    s = fields.List(fields.Float(allow_nan=False), required=True, validate=validate.Length(min=1))
    psi = fields.List(fields.List(fields.Float(allow_nan=False), validate=validate.Length(equal=3)),
                      required=True)
    frames = fields.List(
        fields.List(fields.List(fields.Float(allow_nan=False), validate=validate.Length(equal=3)),
                    validate=validate.Length(equal=3)),
        allow_none=True, load_default=None
    )

    @validates_schema
    def check_lengths(self, data, **kwargs):
        if len(data['psi']) != len(data['s']):
            raise ValidationError("psi needs one point per s value", 'psi')
        if data.get('frames') is not None and len(data['frames']) != len(data['s']):
            raise ValidationError("frames needs one frame per s value", 'frames')


class VerifyRequestSchema(CurveDocumentSchema):
    """POST /api/curves/verify: a curve document plus the intrinsic pair to check it against."""
    kappa = IntrinsicDescriptorField(required=True)
    tau = IntrinsicDescriptorField(required=True)


class ValidationReportSchema(Schema):
    """Dump of a ValidationReport."""
    subject = fields.Str()
    status = fields.Function(lambda report: report.status.value)
    tolerance = fields.Float()
    points = fields.Int()
    deviations = fields.Dict(keys=fields.Str(), values=fields.Float())
    recovery = fields.Dict()
    speed_residual = fields.Float(allow_none=True)
    params = fields.Dict()
    helix = fields.Dict(allow_none=True)
    notes = fields.List(fields.Str())


def report_document(report) -> Dict[str, Any]:
    return ValidationReportSchema().dump(report)
