"""
File formats for sampled curves: CSV, JSON and workbook exchange, and SVG plots.
"""
from .samples_io import (
    FORMATS,
    infer_epsilon,
    read_samples,
    samples_document,
    samples_to_frame,
    write_samples
)
from .svg import PLANES, render_points, render_projection, write_svg

__all__ = [
    'FORMATS',
    'infer_epsilon',
    'read_samples',
    'samples_document',
    'samples_to_frame',
    'write_samples',
    'PLANES',
    'render_points',
    'render_projection',
    'write_svg'
]
