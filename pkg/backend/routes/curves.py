"""
Curve routes blueprint.
Synthesizes helices from intrinsic equations, verifies posted samples and
renders SVG projections.
"""
import logging

from flask import Blueprint, Response, jsonify, request

from exchange import infer_epsilon, render_projection, samples_document
from geometry.frenet import CurveSamples
from geometry.intrinsics import IntrinsicPair
from geometry.minkowski import Causal
from geometry.synthesis import classify_pair, synthesize
from geometry.verify import verify_samples
from validation import SynthRequestSchema, VerifyRequestSchema, report_document, validate_request

logger = logging.getLogger(__name__)

curves_bp = Blueprint('curves', __name__, url_prefix='/api/curves')


def _synthesize(data):
    pair = IntrinsicPair(data['kappa'], data['tau'], data['epsilon'])
    axis = Causal(data['axis']) if data['axis'] else None
    spec = classify_pair(pair, axis, data['mirror'])
    return spec, synthesize(spec, data['grid'])


@curves_bp.route('/synth', methods=['POST'])
@validate_request(SynthRequestSchema, strict_mode=True)
def synth():
    """Classified helix description and its samples as a curve document."""
    data = request.validated_json
    spec, samples = _synthesize(data)
    logger.info(f"Synthesized {spec.case.label} on {len(samples)} points")
    return jsonify({
        'helix': spec.describe(),
        'curve': samples_document(samples, frames=data['frames']),
    })


@curves_bp.route('/verify', methods=['POST'])
@validate_request(VerifyRequestSchema, strict_mode=True)
def verify():
    """Check a posted curve document against the posted intrinsic pair."""
    data = request.validated_json
    epsilon = data['epsilon']
    if epsilon is None:
        epsilon = infer_epsilon(data['s'], data['psi'])
    samples = CurveSamples(data['s'], data['psi'], epsilon, data['frames'], data['meta'])
    report = verify_samples(samples, IntrinsicPair(data['kappa'], data['tau'], epsilon), subject='request')
    return jsonify(report_document(report))


@curves_bp.route('/plot', methods=['POST'])
@validate_request(SynthRequestSchema, strict_mode=True)
def plot():
    """SVG projection of the synthesized helix."""
    data = request.validated_json
    _, samples = _synthesize(data)
    return Response(render_projection(samples, data['projection']), mimetype='image/svg+xml')
