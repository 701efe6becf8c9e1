"""
Command-line interface for lorhelix.

Usage:
    lorhelix list
    lorhelix synth --kappa const:3 --tau const:2 --epsilon=-1 --s=-2:2:0.001 --out w1.csv
    lorhelix catalog --name loghelix-case1 --params h=2,r=1 --out log1.json
    lorhelix verify --name wcurve-case1 --params kappa=3,tau=2
    lorhelix verify --input w1.csv --kappa const:3 --tau const:2
    lorhelix audit --out-dir ../docs/reports
    lorhelix plot --name plane-case1 --projection x1x3 --out plane1.svg

Exit codes: 0 ok, 1 input/output or domain error, 2 classification
rejection, 3 discrepant verification.
"""
import json
import logging
import os
import sys
from logging.handlers import RotatingFileHandler
from typing import Any, Callable, Dict

import click
import numpy as np

from config import get_config
from errors import HelixError, RejectionError
from exchange import read_samples, write_samples, write_svg, render_projection
from geometry.catalog import catalog_get, catalog_list, catalog_samples, catalog_validate
from geometry.frenet import CurveSamples, make_grid
from geometry.intrinsics import IntrinsicPair
from geometry.minkowski import Causal
from geometry.synthesis import HelixSpec, classify_pair, synthesize
from geometry.verify import verify_samples
from validation import RunConfig, RunConfigSchema, report_document, validate_data

logger = logging.getLogger(__name__)

__version__ = '1.0.0'


def setup_logging(level: str = 'WARNING') -> None:
    """stderr handler, plus a rotating file when LORHELIX_LOG_FILE is set."""
    cfg = get_config()
    handlers = [logging.StreamHandler(sys.stderr)]
    if cfg.LOG_FILE:
        handlers.append(RotatingFileHandler(cfg.LOG_FILE, maxBytes=1024 * 1024, backupCount=5))
    logging.basicConfig(level=level.upper(), format=cfg.LOG_FORMAT, handlers=handlers, force=True)


def _json_default(value):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"{type(value).__name__} is not JSON serializable")


def _output_format(config: RunConfig) -> str:
    if config.format:
        return config.format
    return os.path.splitext(config.output)[1].lstrip('.').lower() or 'csv'


def _write(samples: CurveSamples, config: RunConfig) -> None:
    fmt = _output_format(config)
    if fmt == 'svg':
        write_svg(samples, config.output, config.projection)
    else:
        write_samples(samples, config.output, fmt, frames=config.frames)


def _default_grid(pair: IntrinsicPair) -> np.ndarray:
    """
    Up to one unit of arclength either side of the curvature reference point.

    An open edge of the domain is a pole of kappa or tau, so the grid stops
    halfway to it.
    """
    lo, hi = pair.sample_interval()
    ref = pair.kappa.reference if pair.contains(pair.kappa.reference) else 0.5 * (lo + hi)

    def reach(edge: float) -> float:
        if not np.isfinite(edge):
            return 1.0
        gap = abs(ref - edge)
        return min(1.0, gap if pair.contains(edge) else 0.5 * gap)

    lo_edge, hi_edge = pair.domain
    return make_grid(ref - reach(lo_edge), ref + reach(hi_edge), get_config().DEFAULT_STEP)


def _echo_spec(spec: HelixSpec) -> None:
    axis = ', '.join(f"{c:g}" for c in spec.axis)
    click.echo(f"case: {spec.case.label}")
    click.echo(f"epsilon: {spec.epsilon:+d}")
    click.echo(f"m: {spec.m:.17g}")
    click.echo(f"n: {spec.n:.17g}")
    click.echo(f"phi: {spec.phi:.17g}")
    click.echo(f"axis: ({axis}) {spec.case.axis_character.value}")


def cmd_list(config: RunConfig) -> int:
    for entry in catalog_list():
        params = ','.join(f"{k}={v:g}" for k, v in entry.default_params.items())
        click.echo(f"{entry.name:<16} {entry.case.label:<36} {params:<16} {entry.formula}")
    return 0


def cmd_synth(config: RunConfig) -> int:
    """Classify the pair, print the helix description and write the synthesized samples."""
    pair = IntrinsicPair(config.kappa, config.tau, config.epsilon)
    axis = Causal(config.axis) if config.axis else None
    spec = classify_pair(pair, axis, config.mirror)
    _echo_spec(spec)
    if config.output:
        grid = config.grid if config.grid is not None else _default_grid(pair)
        _write(synthesize(spec, grid), config)
        click.echo(f"wrote {grid.size} samples to {config.output}")
    return 0


def cmd_catalog(config: RunConfig) -> int:
    entry = catalog_get(config.name)
    samples = catalog_samples(config.name, config.params, s_grid=config.grid)
    click.echo(f"{entry.name}: {entry.case.label} {entry.formula}")
    if config.output:
        _write(samples, config)
        click.echo(f"wrote {len(samples)} samples to {config.output}")
    return 0


def _report_text(report) -> str:
    return json.dumps(report_document(report), indent=2, sort_keys=True, default=_json_default)


def _write_text(path: str, text: str) -> None:
    try:
        with open(path, 'w', encoding='utf-8') as fh:
            fh.write(text + '\n')
    except OSError as e:
        raise HelixError(f"Cannot write {path}: {e}")


def cmd_verify(config: RunConfig) -> int:
    """Catalog three-way check by name, or sample-file check against a supplied pair."""
    if config.name:
        report = catalog_validate(config.name, config.params, tol=config.tol, s_grid=config.grid)
    else:
        samples = read_samples(config.input, epsilon=config.epsilon)
        pair = IntrinsicPair(config.kappa, config.tau, samples.epsilon)
        report = verify_samples(samples, pair, subject=config.input, tol=config.tol)

    text = _report_text(report)
    if config.output:
        _write_text(config.output, text)
    click.echo(text)
    return report.exit_code


def cmd_audit(config: RunConfig) -> int:
    """Write the three-way report of every catalog entry at its defaults to <output>/<name>.json."""
    try:
        os.makedirs(config.output, exist_ok=True)
    except OSError as e:
        raise HelixError(f"Cannot create {config.output}: {e}")
    code = 0
    for entry in catalog_list():
        report = catalog_validate(entry.name, tol=config.tol)
        _write_text(os.path.join(config.output, f"{entry.name}.json"), _report_text(report))
        worst = max(v for k, v in report.deviations.items() if k != 'frame_drift')
        click.echo(f"{entry.name:<16} {report.status.value:<10} {worst:.3e}")
        code = max(code, report.exit_code)
    return code


def cmd_plot(config: RunConfig) -> int:
    if config.input:
        samples = read_samples(config.input, epsilon=config.epsilon)
    else:
        samples = catalog_samples(config.name, config.params, s_grid=config.grid)
    if config.output:
        write_svg(samples, config.output, config.projection)
    else:
        click.echo(render_projection(samples, config.projection), nl=False)
    return 0


def _run(handler: Callable[[RunConfig], int], raw: Dict[str, Any]) -> None:
    """Validate the invocation, run it and exit with its code."""
    raw = {k: v for k, v in raw.items() if v is not None}
    try:
        config, _ = validate_data(RunConfigSchema(), raw, strict_mode=True, source=raw['command'])
        code = handler(config)
    except RejectionError as e:
        click.echo(f"Rejected ({e.reason.name}): {e.message}", err=True)
        code = e.exit_code
    except HelixError as e:
        click.echo(f"Error: {e.message}", err=True)
        code = e.exit_code
    sys.exit(code)


_kappa = click.option('--kappa', help='Curvature descriptor, e.g. const:3, rminus:2, recip:2, table:k.csv')
_tau = click.option('--tau', help='Torsion descriptor, same syntax as --kappa')
_epsilon = click.option('--epsilon', help='g(N,N): -1 (timelike normal) or +1 (spacelike normal)')
_grid = click.option('--s', 'grid', help='Arclength grid min:max:step, endpoints inclusive')
_out = click.option('--out', 'output', type=click.Path(dir_okay=False), help='Output file')
_format = click.option('--format', 'fmt', type=click.Choice(['csv', 'json', 'xlsx', 'svg']),
                       help='Output format (default: from the file suffix)')
_name = click.option('--name', help='Catalog entry name (see `lorhelix list`)')
_params = click.option('--params', help='Catalog parameters, e.g. kappa=3,tau=2')
_projection = click.option('--projection', type=click.Choice(['x1x2', 'x1x3', 'x2x3']),
                           default='x1x2', show_default=True)


@click.group()
@click.version_option(version=__version__, prog_name='lorhelix')
@click.option('--log-level', envvar='LORHELIX_CLI_LOG_LEVEL', default='WARNING', show_default=True,
              type=click.Choice(['DEBUG', 'INFO', 'WARNING', 'ERROR'], case_sensitive=False))
def cli(log_level: str):
    """
    Spacelike general helices in Minkowski 3-space.

    Synthesizes helices from their intrinsic equations, samples the printed
    catalog formulas and cross-checks both against a Frenet integrator.
    """
    setup_logging(log_level)


@cli.command('list')
def list_command():
    """List catalog entries with their default parameters."""
    _run(cmd_list, {'command': 'list'})


@cli.command()
@_kappa
@_tau
@_epsilon
@_grid
@_out
@_format
@click.option('--axis', type=click.Choice(['spacelike', 'timelike']), help='Required causal character of the axis')
@click.option('--mirror', is_flag=True, help='Reflect the odd rotating coordinate')
@click.option('--frames', is_flag=True, help='Include Frenet frames in CSV/JSON output')
@_projection
def synth(kappa, tau, epsilon, grid, output, fmt, axis, mirror, frames, projection):
    """Synthesize the helix with curvature KAPPA and torsion TAU."""
    _run(cmd_synth, {
        'command': 'synth', 'kappa': kappa, 'tau': tau, 'epsilon': epsilon, 'grid': grid,
        'output': output, 'format': fmt, 'axis': axis, 'mirror': mirror, 'frames': frames,
        'projection': projection,
    })


@cli.command()
@_name
@_params
@_grid
@_out
@_format
@_projection
def catalog(name, params, grid, output, fmt, projection):
    """Sample a printed catalog formula."""
    _run(cmd_catalog, {
        'command': 'catalog', 'name': name, 'params': params, 'grid': grid,
        'output': output, 'format': fmt, 'projection': projection,
    })


@cli.command()
@_name
@_params
@click.option('--input', 'input_path', type=click.Path(dir_okay=False), help='Samples file (csv, json, xlsx)')
@_kappa
@_tau
@_epsilon
@_grid
@_out
@click.option('--tol', type=float, help='Verdict tolerance (default: LORHELIX_DISCREPANCY_TOL or LORHELIX_RECOVERY_TOL)')
def verify(name, params, input_path, kappa, tau, epsilon, grid, output, tol):
    """Cross-check a catalog entry or a samples file; exit 3 when DISCREPANT."""
    _run(cmd_verify, {
        'command': 'verify', 'name': name, 'params': params, 'input': input_path,
        'kappa': kappa, 'tau': tau, 'epsilon': epsilon, 'grid': grid, 'output': output, 'tol': tol,
    })


@cli.command()
@click.option('--out-dir', 'output', type=click.Path(file_okay=False), required=True,
              help='Directory for one JSON report per catalog entry')
@click.option('--tol', type=float, help='Verdict tolerance (default: LORHELIX_DISCREPANCY_TOL)')
def audit(output, tol):
    """Validate every catalog entry at its defaults; exit 3 when any is DISCREPANT."""
    _run(cmd_audit, {'command': 'audit', 'output': output, 'tol': tol})


@cli.command()
@click.option('--input', 'input_path', type=click.Path(dir_okay=False), help='Samples file (csv, json, xlsx)')
@_name
@_params
@_epsilon
@_grid
@_out
@_projection
def plot(input_path, name, params, epsilon, grid, output, projection):
    """Write an SVG projection of a samples file or catalog entry."""
    _run(cmd_plot, {
        'command': 'plot', 'input': input_path, 'name': name, 'params': params, 'epsilon': epsilon,
        'grid': grid, 'output': output, 'projection': projection,
    })


def main():
    cli()


if __name__ == '__main__':
    main()
