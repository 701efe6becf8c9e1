"""
Static SVG rendering of a curve projected onto a coordinate plane.
"""
import logging
import xml.etree.ElementTree as ET
from typing import Optional, Tuple

import numpy as np

from errors import SamplesFormatError
from geometry.frenet import CurveSamples

logger = logging.getLogger(__name__)

SVG_NS = 'http://www.w3.org/2000/svg'
PLANES = {
    'x1x2': (0, 1),
    'x1x3': (0, 2),
    'x2x3': (1, 2),
}
# Spans below this fraction of the coordinate magnitude count as flat.
_FLAT_SPAN = 1e-12


def _fmt(value: float) -> str:
    return f"{value:.3f}"


def _label(value: float) -> str:
    return f"{value:.4g}"


def _bounds(values: np.ndarray, name: str) -> Tuple[float, float]:
    lo, hi = float(values.min()), float(values.max())
    if hi - lo <= _FLAT_SPAN * max(1.0, abs(lo), abs(hi)):
        logger.warning("Projection is degenerate along %s (constant %g); drawing a flat segment", name, lo)
        return lo - 0.5, hi + 0.5
    return lo, hi


def render_points(points, plane: str = 'x1x2', width: int = 640, height: int = 480,
                  margin: int = 56, title: Optional[str] = None) -> str:
    """SVG document with one polyline through the projected points."""
    if plane not in PLANES:
        raise ValueError(f"Unknown projection '{plane}'; expected one of {sorted(PLANES)}")
    pts = np.asarray(points, dtype=float).reshape(-1, 3)
    if pts.shape[0] == 0:
        raise SamplesFormatError("Cannot plot an empty sample set")
    i, j = PLANES[plane]
    h_name, v_name = plane[:2], plane[2:]
    u, v = pts[:, i], pts[:, j]
    u_lo, u_hi = _bounds(u, h_name)
    v_lo, v_hi = _bounds(v, v_name)

    inner_w, inner_h = width - 2 * margin, height - 2 * margin
    px = margin + (u - u_lo) / (u_hi - u_lo) * inner_w
    py = height - margin - (v - v_lo) / (v_hi - v_lo) * inner_h

    root = ET.Element('svg', {
        'xmlns': SVG_NS,
        'version': '1.1',
        'width': str(width),
        'height': str(height),
        'viewBox': f"0 0 {width} {height}",
    })
    if title:
        ET.SubElement(root, 'title').text = title
    ET.SubElement(root, 'rect', {'x': '0', 'y': '0', 'width': str(width), 'height': str(height),
                                 'fill': 'white'})

    axes = ET.SubElement(root, 'g', {'stroke': 'black', 'stroke-width': '1'})
    left, right, top, bottom = margin, width - margin, margin, height - margin
    ET.SubElement(axes, 'line', {'x1': str(left), 'y1': str(bottom), 'x2': str(right), 'y2': str(bottom)})
    ET.SubElement(axes, 'line', {'x1': str(left), 'y1': str(bottom), 'x2': str(left), 'y2': str(top)})

    labels = ET.SubElement(root, 'g', {'font-family': 'sans-serif', 'font-size': '12', 'fill': 'black'})
    for x, y, anchor, text in (
        (right, bottom + 32, 'end', h_name),
        (left - 40, top - 12, 'start', v_name),
        (left, bottom + 16, 'start', _label(u_lo)),
        (right, bottom + 16, 'end', _label(u_hi)),
        (left - 6, bottom, 'end', _label(v_lo)),
        (left - 6, top + 4, 'end', _label(v_hi)),
    ):
        ET.SubElement(labels, 'text', {'x': str(x), 'y': str(y), 'text-anchor': anchor}).text = text

    ET.SubElement(root, 'polyline', {
        'fill': 'none',
        'stroke': '#1f4e9c',
        'stroke-width': '1.5',
        'points': ' '.join(f"{_fmt(a)},{_fmt(b)}" for a, b in zip(px, py)),
    })
    return '<?xml version="1.0" encoding="UTF-8"?>\n' + ET.tostring(root, encoding='unicode') + '\n'


def render_projection(samples: CurveSamples, plane: str = 'x1x2', **kwargs) -> str:
    kwargs.setdefault('title', samples.meta.get('name') or samples.meta.get('case'))
    return render_points(samples.positions, plane, **kwargs)


def write_svg(samples: CurveSamples, path: str, plane: str = 'x1x2', **kwargs) -> str:
    try:
        with open(path, 'w', encoding='utf-8', newline='\n') as fh:
            fh.write(render_projection(samples, plane, **kwargs))
    except OSError as e:
        raise SamplesFormatError(f"Cannot write {path}: {e}", {'path': path})
    logger.info("Wrote %s projection of %d samples to %s", plane, len(samples), path)
    return path
