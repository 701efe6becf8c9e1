"""
Catalog routes blueprint.
Lists the printed helix formulas, evaluates them and runs their three-way check.
"""
from flask import Blueprint, jsonify, request

from geometry.catalog import catalog_eval, catalog_get, catalog_list, catalog_validate
from validation import CatalogParamsSchema, report_document, validate_query_params, validate_request

catalog_bp = Blueprint('catalog', __name__, url_prefix='/api/catalog')


@catalog_bp.route('', methods=['GET'])
def list_entries():
    """All catalog entries with their default parameters."""
    return jsonify({'entries': [entry.summary() for entry in catalog_list()]})


@catalog_bp.route('/<name>', methods=['GET'])
@validate_query_params(CatalogParamsSchema, strict_mode=True)
def get_entry(name):
    """Entry summary; with ?s= also the printed position at that arclength."""
    args = request.validated_args
    entry = catalog_get(name)
    body = {**entry.summary(), 'params': entry.resolve(args['params'])}
    if args['s'] is not None:
        body['s'] = args['s']
        body['psi'] = catalog_eval(name, args['params'], args['s']).to_list()
    return jsonify(body)


@catalog_bp.route('/<name>/validate', methods=['POST'])
@validate_request(CatalogParamsSchema, strict_mode=True)
def validate_entry(name):
    """Compare the printed form with synthesis and Frenet integration; the verdict is in the body."""
    data = request.validated_json
    report = catalog_validate(name, data['params'], step=data['step'], tol=data['tol'])
    return jsonify(report_document(report))
