"""
Validation module for lorhelix.
Schemas for CLI invocations, HTTP requests and curve documents, with
configurable enforcement.
"""
from .schemas import (
    RunConfig,
    RunConfigSchema,
    GridSchema,
    SynthRequestSchema,
    CatalogParamsSchema,
    CurveDocumentSchema,
    VerifyRequestSchema,
    ValidationReportSchema,
    parse_grid,
    parse_params,
    report_document
)
from .decorators import validate_request, validate_query_params
from .utils import ValidationError, validate_data

__all__ = [
    'RunConfig',
    'RunConfigSchema',
    'GridSchema',
    'SynthRequestSchema',
    'CatalogParamsSchema',
    'CurveDocumentSchema',
    'VerifyRequestSchema',
    'ValidationReportSchema',
    'parse_grid',
    'parse_params',
    'report_document',
    'validate_request',
    'validate_query_params',
    'ValidationError',
    'validate_data'
]
