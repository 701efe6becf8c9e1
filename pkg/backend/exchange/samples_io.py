"""
Reading and writing sampled curves.

CSV carries the columns s,x1,x2,x3 and, when frames are requested, the nine
frame components Tx..Bz. JSON carries {meta, epsilon, s, psi, frames?}.
Workbooks carry a `samples` sheet with the CSV columns and a `meta` sheet of
key/value rows.
"""
import json
import logging
import os
from typing import Any, Dict, Optional

import numpy as np
import pandas as pd
from marshmallow import ValidationError as MarshmallowValidationError
from openpyxl import Workbook

from config import get_config
from errors import GridError, SamplesFormatError
from geometry.frenet import CurveSamples
from geometry.minkowski import quadratic
from validation.schemas import CurveDocumentSchema

logger = logging.getLogger(__name__)

FORMATS = ('csv', 'json', 'xlsx')
POSITION_COLUMNS = ['s', 'x1', 'x2', 'x3']
FRAME_COLUMNS = ['Tx', 'Ty', 'Tz', 'Nx', 'Ny', 'Nz', 'Bx', 'By', 'Bz']


def infer_format(path: str, fmt: Optional[str] = None) -> str:
    fmt = (fmt or os.path.splitext(path)[1].lstrip('.')).lower()
    if fmt not in FORMATS:
        raise SamplesFormatError(f"Unsupported sample format '{fmt}'", {'path': path, 'known': list(FORMATS)})
    return fmt


def _round(values: np.ndarray, digits: int) -> list:
    return [float(f"{v:.{digits}g}") for v in np.ravel(values)]


def _plain(value: Any) -> Any:
    """numpy scalars and arrays to JSON-native values."""
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_plain(v) for v in value]
    if isinstance(value, np.generic):
        return value.item()
    return value


def samples_to_frame(samples: CurveSamples, frames: bool = False) -> pd.DataFrame:
    """Tabular view of the samples, one row per grid point."""
    df = pd.DataFrame(samples.positions, columns=POSITION_COLUMNS[1:])
    df.insert(0, 's', samples.s)
    if frames:
        if samples.frames is None:
            raise SamplesFormatError("Samples carry no frames to export")
        df[FRAME_COLUMNS] = samples.frames.reshape(-1, 9)
    return df


def samples_document(samples: CurveSamples, frames: bool = False,
                     digits: Optional[int] = None) -> Dict[str, Any]:
    digits = digits or get_config().OUTPUT_DIGITS
    document = {
        'meta': _plain(samples.meta),
        'epsilon': samples.epsilon,
        's': _round(samples.s, digits),
        'psi': [_round(p, digits) for p in samples.positions],
    }
    if frames:
        if samples.frames is None:
            raise SamplesFormatError("Samples carry no frames to export")
        document['frames'] = [[_round(row, digits) for row in f] for f in samples.frames]
    return document


def write_samples(samples: CurveSamples, path: str, fmt: Optional[str] = None,
                  frames: bool = False, digits: Optional[int] = None) -> str:
    """Write samples to `path`; the format follows the suffix unless given."""
    fmt = infer_format(path, fmt)
    digits = digits or get_config().OUTPUT_DIGITS
    try:
        if fmt == 'csv':
            samples_to_frame(samples, frames).to_csv(
                path, index=False, float_format=f'%.{digits}g', lineterminator='\n'
            )
        elif fmt == 'json':
            with open(path, 'w', encoding='utf-8') as fh:
                json.dump(samples_document(samples, frames, digits), fh)
                fh.write('\n')
        else:
            _write_workbook(samples, path, frames)
    except OSError as e:
        raise SamplesFormatError(f"Cannot write {path}: {e}", {'path': path})
    logger.info("Wrote %d samples to %s (%s)", len(samples), path, fmt)
    return path


def _write_workbook(samples: CurveSamples, path: str, frames: bool):
    wb = Workbook()
    if wb.active:
        wb.remove(wb.active)

    ws_samples = wb.create_sheet("samples")
    df = samples_to_frame(samples, frames)
    ws_samples.append(list(df.columns))
    for row in df.itertuples(index=False):
        ws_samples.append([float(v) for v in row])

    ws_meta = wb.create_sheet("meta")
    ws_meta.append(['key', 'value'])
    ws_meta.append(['epsilon', samples.epsilon])
    for key, value in _plain(samples.meta).items():
        if isinstance(value, (list, dict)):
            value = json.dumps(value)
        ws_meta.append([key, value])

    wb.save(path)


def infer_epsilon(s: np.ndarray, positions: np.ndarray) -> int:
    """Sign of g(psi'', psi'') = epsilon * kappa^2, taken over the median point."""
    s = np.asarray(s, dtype=float)
    positions = np.asarray(positions, dtype=float).reshape(-1, 3)
    if len(s) < 3:
        raise SamplesFormatError("At least 3 samples are needed to infer epsilon")
    d2 = np.gradient(np.gradient(positions, s, axis=0), s, axis=0)
    median = float(np.median(quadratic(d2[1:-1] if len(s) > 4 else d2)))
    if not np.isfinite(median) or abs(median) < get_config().CURVATURE_FLOOR ** 2:
        raise SamplesFormatError("Cannot infer epsilon from samples without curvature")
    return 1 if median > 0 else -1


def _build(s, positions, epsilon, frames, meta, path) -> CurveSamples:
    if epsilon is None:
        epsilon = infer_epsilon(s, positions)
        logger.debug("Inferred epsilon=%d for %s", epsilon, path)
    try:
        return CurveSamples(s, positions, int(epsilon), frames, meta)
    except GridError as e:
        raise SamplesFormatError(f"{path}: {e.message}", {'path': path, **e.details})


def _from_frame(df: pd.DataFrame, path: str, epsilon, meta) -> CurveSamples:
    missing = [c for c in POSITION_COLUMNS if c not in df.columns]
    if missing:
        raise SamplesFormatError(f"{path}: missing columns {', '.join(missing)}", {'path': path})
    if df.empty:
        raise SamplesFormatError(f"{path}: no samples", {'path': path})
    has_frames = all(c in df.columns for c in FRAME_COLUMNS)
    columns = POSITION_COLUMNS + (FRAME_COLUMNS if has_frames else [])
    numeric = df[columns].apply(pd.to_numeric, errors='coerce')
    bad = ~np.isfinite(numeric.to_numpy(dtype=float)).all(axis=1)
    if bad.any():
        row = int(np.argmax(bad))
        raise SamplesFormatError(f"{path}: non-numeric or missing value in row {row + 1}",
                                 {'path': path, 'row': row + 1})
    values = numeric.to_numpy(dtype=float)
    frames = values[:, 4:].reshape(-1, 3, 3) if has_frames else None
    return _build(values[:, 0], values[:, 1:4], epsilon, frames, meta, path)


def _read_json(path: str, epsilon) -> CurveSamples:
    try:
        with open(path, encoding='utf-8') as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as e:
        raise SamplesFormatError(f"{path}: invalid JSON ({e.msg})", {'path': path})
    try:
        doc = CurveDocumentSchema().load(raw)
    except MarshmallowValidationError as e:
        raise SamplesFormatError(f"{path}: not a curve document", {'path': path, 'errors': e.messages})
    eps = epsilon if epsilon is not None else doc['epsilon']
    return _build(doc['s'], doc['psi'], eps, doc['frames'], doc['meta'], path)


def _read_workbook(path: str, epsilon) -> CurveSamples:
    try:
        sheets = pd.read_excel(path, sheet_name=None)
    except ValueError as e:
        raise SamplesFormatError(f"{path}: not a workbook ({e})", {'path': path})
    if 'samples' not in sheets:
        raise SamplesFormatError(f"{path}: no 'samples' sheet", {'path': path})
    meta = {}
    if 'meta' in sheets:
        meta = {str(k): v for k, v in zip(sheets['meta']['key'], sheets['meta']['value'])}
    if epsilon is None and 'epsilon' in meta:
        epsilon = int(meta['epsilon'])
    meta.pop('epsilon', None)
    return _from_frame(sheets['samples'], path, epsilon, meta)


def read_samples(path: str, fmt: Optional[str] = None, epsilon: Optional[int] = None) -> CurveSamples:
    """
    Load samples from a CSV, JSON or workbook file.

    CSV files carry no epsilon; unless one is given it is inferred from the
    sign of g(psi'', psi'').
    """
    fmt = infer_format(path, fmt)
    try:
        if fmt == 'csv':
            try:
                df = pd.read_csv(path, float_precision='round_trip')
            except (pd.errors.EmptyDataError, pd.errors.ParserError) as e:
                raise SamplesFormatError(f"{path}: {e}", {'path': path})
            samples = _from_frame(df, path, epsilon, {'source': path})
        elif fmt == 'json':
            samples = _read_json(path, epsilon)
        else:
            samples = _read_workbook(path, epsilon)
    except OSError as e:
        raise SamplesFormatError(f"Cannot read {path}: {e}", {'path': path})
    logger.debug("Read %d samples from %s", len(samples), path)
    return samples
