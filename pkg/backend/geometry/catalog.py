"""
Named example curves with their printed closed-form position vectors.

Each entry bundles intrinsic equations, the published parametrization
(transcribed as printed, never corrected here) and a standard sampling
window. catalog_validate compares the printed form against the quadrature
synthesis and the Frenet integrator; disagreements are reported as data.
"""
import logging
import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Mapping, Optional, Tuple

import numpy as np

from config import get_config
from errors import CaseConstraintViolatedError, HelixError, OutOfValidityError, UnknownEntryError
from geometry.frenet import CurveSamples, integrate_frenet, make_grid
from geometry.intrinsics import IntrinsicPair, ScalarFunction
from geometry.minkowski import LorentzVector
from geometry.synthesis import (
    HelixCase, HelixSpec, constant_angle_spread, frame_closed_form, helix_axis, synthesize
)
from geometry.verify import ValidationReport, Verdict, max_deviation, recover_intrinsics

logger = logging.getLogger(__name__)

Params = Dict[str, float]

# Plane curves are sampled over theta in [-1.2, 1.2]; W-curves and
# logarithmic helices over fixed arclength windows.
_PLANE_THETA = 1.2
_WCURVE_WINDOW = (-2.0, 2.0)
_LOGHELIX_WINDOW = (0.5, 3.0)


@dataclass(frozen=True)
class CatalogEntry:
    name: str
    case: HelixCase
    param_names: Tuple[str, ...]
    default_params: Mapping[str, float] = field(hash=False)
    formula: str
    description: str
    mirror: bool
    make_pair: Callable[[Params], IntrinsicPair] = field(repr=False, hash=False)
    closed_form: Callable[[Params, np.ndarray], np.ndarray] = field(repr=False, hash=False)
    check: Callable[[Params], Optional[str]] = field(repr=False, hash=False)
    window: Callable[[Params], Tuple[float, float]] = field(repr=False, hash=False)
    contains: Callable[[Params, np.ndarray], np.ndarray] = field(repr=False, hash=False)

    def resolve(self, params: Optional[Mapping[str, float]] = None) -> Params:
        """Defaults overlaid with `params`; unknown keys or invalid values raise OutOfValidity."""
        params = dict(params or {})
        unknown = sorted(set(params) - set(self.param_names))
        if unknown:
            raise OutOfValidityError(
                f"{self.name} has no parameter(s) {', '.join(unknown)}",
                {'expected': list(self.param_names)}
            )
        resolved = {k: float(params.get(k, self.default_params[k])) for k in self.param_names}
        if not all(math.isfinite(v) for v in resolved.values()):
            raise OutOfValidityError(f"{self.name} parameters must be finite", {'params': resolved})
        problem = self.check(resolved)
        if problem:
            raise OutOfValidityError(f"{self.name}: {problem}", {'params': resolved})
        return resolved

    def summary(self) -> dict:
        return {
            'name': self.name,
            'case': self.case.label,
            'params': list(self.param_names),
            'default_params': dict(self.default_params),
            'formula': self.formula,
            'description': self.description,
            'mirror': self.mirror,
        }


# Intrinsic pairs

def _constant_pair(epsilon):
    def make(p):
        return IntrinsicPair(ScalarFunction.constant(p['kappa']), ScalarFunction.constant(p['tau']), epsilon)
    return make


def _plane_pair(builder, epsilon):
    def make(p):
        kappa = builder(p['a'])
        return IntrinsicPair(kappa, ScalarFunction.constant(0.0, domain=kappa.domain), epsilon)
    return make


def _log_pair(epsilon):
    def make(p):
        h, r = p['h'], p['r']
        tau = ScalarFunction.reciprocal(r) if r != 0 else ScalarFunction.constant(0.0, domain=(0.0, math.inf))
        return IntrinsicPair(ScalarFunction.reciprocal(h), tau, epsilon)
    return make


# Printed closed forms, evaluated at arclength s

def _plane_case1(p, s):
    a = p['a']
    theta = np.arctanh(s / a)
    return a * np.stack([-1.0 / np.cosh(theta), 2.0 * np.arctan(np.tanh(theta / 2)), np.zeros_like(s)], axis=-1)


def _plane_case3(p, s):
    a = p['a']
    theta = np.arctan(s / a)
    return a * np.stack([np.zeros_like(s), 2.0 * np.arctanh(np.tan(theta / 2)), 1.0 / np.cos(theta)], axis=-1)


def _wcurve_case1(p, s):
    k, t = p['kappa'], p['tau']
    xi = math.sqrt(k * k + t * t) * s
    return k / (k * k + t * t) * np.stack([np.cosh(xi), np.sinh(xi), t / k * xi], axis=-1)


def _wcurve_case2(p, s):
    k, t = p['kappa'], p['tau']
    xi = math.sqrt(t * t - k * k) * s
    return k / (t * t - k * k) * np.stack([np.sinh(xi), np.cosh(xi), t / k * xi], axis=-1)


def _wcurve_case3(p, s):
    k, t = p['kappa'], p['tau']
    xi = math.sqrt(k * k - t * t) * s
    return k / (k * k - t * t) * np.stack([t / k * xi, np.sin(xi), np.cos(xi)], axis=-1)


def _loghelix_case1(p, s):
    h, r = p['h'], p['r']
    theta = h * np.log(s)
    e = np.exp(theta / h)
    root = math.sqrt(h * h + r * r)
    arg = root / h * theta
    scale = h * e / (h * h + r * r - 1)
    return np.stack([
        scale * (np.cosh(arg) - np.sinh(arg) / root),
        scale * (np.sinh(arg) - np.cosh(arg) / root),
        r * e / root,
    ], axis=-1)


def _loghelix_case2(p, s):
    h, r = p['h'], p['r']
    theta = h * np.log(s)
    e = np.exp(theta / h)
    root = math.sqrt(r * r - h * h)
    arg = root / h * theta
    scale = h * e / (1 + h * h - r * r)
    return np.stack([
        scale * (np.cosh(arg) / root - np.sinh(arg)),
        scale * (np.sinh(arg) / root - np.cosh(arg)),
        r * e / root,
    ], axis=-1)


def _loghelix_case3(p, s):
    # the printed form labels its last two components alike; taken in order
    h, r = p['h'], p['r']
    theta = h * np.log(s)
    e = np.exp(theta / h)
    root = math.sqrt(h * h - r * r)
    arg = root / h * theta
    scale = h * e / (1 + h * h - r * r)
    return np.stack([
        r * e / root,
        scale * (np.cos(arg) / root + np.sin(arg)),
        scale * (np.sin(arg) / root - np.cos(arg)),
    ], axis=-1)


# Validity regions

def _positive(*names):
    def check(p):
        bad = [n for n in names if not p[n] > 0]
        return f"{', '.join(bad)} must be positive" if bad else None
    return check


def _both(*checks):
    def check(p):
        for c in checks:
            problem = c(p)
            if problem:
                return problem
        return None
    return check


def _require(predicate, message):
    return lambda p: None if predicate(p) else message


def _everywhere(p, s):
    return np.isfinite(s)


def _inside_a(p, s):
    return np.isfinite(s) & (np.abs(s) < p['a'])


def _positive_s(p, s):
    return np.isfinite(s) & (s > 0)


def _fixed(window):
    return lambda p: window


def _plane_window(to_s):
    def window(p):
        edge = p['a'] * to_s(_PLANE_THETA)
        return -edge, edge
    return window


_ENTRIES: List[CatalogEntry] = [
    CatalogEntry(
        name='plane-case1', case=HelixCase.TIMELIKE_NORMAL, param_names=('a',),
        default_params={'a': 2.0},
        formula='psi = a(-sech t, 2 arctan(tanh(t/2)), 0), s = a tanh t',
        description='plane curve with timelike principal normal, kappa = a/(a^2 - s^2), tau = 0',
        mirror=False, make_pair=_plane_pair(ScalarFunction.rational_minus, -1),
        closed_form=_plane_case1, check=_positive('a'),
        window=_plane_window(math.tanh), contains=_inside_a,
    ),
    CatalogEntry(
        name='plane-case3', case=HelixCase.SPACELIKE_NORMAL_TIMELIKE_AXIS, param_names=('a',),
        default_params={'a': 0.5},
        formula='psi = a(0, 2 arctanh(tan(t/2)), sec t), s = a tan t',
        description='plane curve with spacelike principal normal, kappa = a/(a^2 + s^2), tau = 0',
        mirror=False, make_pair=_plane_pair(ScalarFunction.rational_plus, 1),
        closed_form=_plane_case3, check=_positive('a'),
        window=_plane_window(math.tan), contains=_everywhere,
    ),
    CatalogEntry(
        name='wcurve-case1', case=HelixCase.TIMELIKE_NORMAL, param_names=('kappa', 'tau'),
        default_params={'kappa': 3.0, 'tau': 2.0},
        formula='psi = k/(k^2+t^2)(cosh x, sinh x, (t/k) x), x = sqrt(k^2+t^2) s',
        description='W-curve with timelike principal normal and spacelike axis',
        mirror=False, make_pair=_constant_pair(-1),
        closed_form=_wcurve_case1, check=_positive('kappa'),
        window=_fixed(_WCURVE_WINDOW), contains=_everywhere,
    ),
    CatalogEntry(
        name='wcurve-case2', case=HelixCase.SPACELIKE_NORMAL_SPACELIKE_AXIS, param_names=('kappa', 'tau'),
        default_params={'kappa': 1.0, 'tau': 2.0},
        formula='psi = k/(t^2-k^2)(sinh x, cosh x, (t/k) x), x = sqrt(t^2-k^2) s',
        description='W-curve with spacelike principal normal and spacelike axis',
        mirror=False, make_pair=_constant_pair(1),
        closed_form=_wcurve_case2,
        check=_both(_positive('kappa'), _require(lambda p: p['tau'] ** 2 > p['kappa'] ** 2,
                                                 'needs tau^2 > kappa^2')),
        window=_fixed(_WCURVE_WINDOW), contains=_everywhere,
    ),
    CatalogEntry(
        name='wcurve-case3', case=HelixCase.SPACELIKE_NORMAL_TIMELIKE_AXIS, param_names=('kappa', 'tau'),
        default_params={'kappa': 2.0, 'tau': 1.0},
        formula='psi = k/(k^2-t^2)((t/k) x, sin x, cos x), x = sqrt(k^2-t^2) s',
        description='W-curve with spacelike principal normal and timelike axis',
        mirror=True, make_pair=_constant_pair(1),
        closed_form=_wcurve_case3,
        check=_both(_positive('kappa'), _require(lambda p: p['kappa'] ** 2 > p['tau'] ** 2,
                                                 'needs kappa^2 > tau^2')),
        window=_fixed(_WCURVE_WINDOW), contains=_everywhere,
    ),
    CatalogEntry(
        name='loghelix-case1', case=HelixCase.TIMELIKE_NORMAL, param_names=('h', 'r'),
        default_params={'h': 2.0, 'r': 1.0},
        formula='psi1,2 = h e^(t/h)/(h^2+r^2-1)(cosh u - sinh u/R, sinh u - cosh u/R), '
                'psi3 = r e^(t/h)/R, R = sqrt(h^2+r^2), u = R t/h, s = e^(t/h)',
        description='general helix with kappa = h/s, tau = r/s and timelike principal normal',
        mirror=False, make_pair=_log_pair(-1),
        closed_form=_loghelix_case1,
        check=_both(_positive('h'), _require(lambda p: p['h'] ** 2 + p['r'] ** 2 != 1,
                                             'needs h^2 + r^2 != 1')),
        window=_fixed(_LOGHELIX_WINDOW), contains=_positive_s,
    ),
    CatalogEntry(
        name='loghelix-case2', case=HelixCase.SPACELIKE_NORMAL_SPACELIKE_AXIS, param_names=('h', 'r'),
        default_params={'h': 1.0, 'r': 4.0},
        formula='psi1,2 = h e^(t/h)/(1+h^2-r^2)(cosh u/R - sinh u, sinh u/R - cosh u), '
                'psi3 = r e^(t/h)/R, R = sqrt(r^2-h^2), u = R t/h, s = e^(t/h)',
        description='general helix with kappa = h/s, tau = r/s, spacelike normal and spacelike axis',
        mirror=False, make_pair=_log_pair(1),
        closed_form=_loghelix_case2,
        check=_both(_positive('h'),
                    _require(lambda p: p['r'] ** 2 > p['h'] ** 2, 'needs r^2 > h^2'),
                    _require(lambda p: 1 + p['h'] ** 2 - p['r'] ** 2 != 0, 'needs 1 + h^2 - r^2 != 0')),
        window=_fixed(_LOGHELIX_WINDOW), contains=_positive_s,
    ),
    CatalogEntry(
        name='loghelix-case3', case=HelixCase.SPACELIKE_NORMAL_TIMELIKE_AXIS, param_names=('h', 'r'),
        default_params={'h': 6.0, 'r': 1.0},
        formula='psi1 = r e^(t/h)/R, psi2,3 = h e^(t/h)/(1+h^2-r^2)(cos u/R + sin u, sin u/R - cos u), '
                'R = sqrt(h^2-r^2), u = R t/h, s = e^(t/h)',
        description='general helix with kappa = h/s, tau = r/s, spacelike normal and timelike axis',
        mirror=False, make_pair=_log_pair(1),
        closed_form=_loghelix_case3,
        check=_both(_positive('h'), _require(lambda p: p['h'] ** 2 > p['r'] ** 2, 'needs h^2 > r^2')),
        window=_fixed(_LOGHELIX_WINDOW), contains=_positive_s,
    ),
]

CATALOG: Dict[str, CatalogEntry] = {entry.name: entry for entry in _ENTRIES}


def catalog_list() -> List[CatalogEntry]:
    return list(_ENTRIES)


def catalog_get(name: str) -> CatalogEntry:
    try:
        return CATALOG[name]
    except KeyError:
        raise UnknownEntryError(f"No catalog entry named '{name}'", {'known': sorted(CATALOG)})


def catalog_spec(name: str, params: Optional[Mapping[str, float]] = None) -> HelixSpec:
    """The classified helix an entry describes."""
    entry = catalog_get(name)
    resolved = entry.resolve(params)
    spec = HelixSpec.from_pair(entry.make_pair(resolved), mirror=entry.mirror)
    if spec.case is not entry.case:
        raise CaseConstraintViolatedError(
            f"{name} parameters classify as {spec.case.label}", {'params': resolved}
        )
    return spec


def catalog_grid(name: str, params: Optional[Mapping[str, float]] = None,
                 step: Optional[float] = None) -> np.ndarray:
    entry = catalog_get(name)
    lo, hi = entry.window(entry.resolve(params))
    return make_grid(lo, hi, step or get_config().DEFAULT_STEP)


def catalog_eval(name: str, params: Optional[Mapping[str, float]], s):
    """Evaluate the printed closed form at arclength s (scalar or array)."""
    entry = catalog_get(name)
    resolved = entry.resolve(params)
    s_arr = np.asarray(s, dtype=float)
    inside = entry.contains(resolved, s_arr)
    if not np.all(inside):
        raise OutOfValidityError(f"{name} is not defined at the requested s",
                                 {'s': np.atleast_1d(s_arr[~inside] if s_arr.ndim else s_arr)[:5].tolist()})
    out = entry.closed_form(resolved, s_arr)
    return LorentzVector.from_array(out) if s_arr.ndim == 0 else out


def catalog_samples(name: str, params: Optional[Mapping[str, float]] = None,
                    s_grid=None, step: Optional[float] = None) -> CurveSamples:
    """The printed closed form sampled on `s_grid` (default: the entry's standard grid)."""
    entry = catalog_get(name)
    resolved = entry.resolve(params)
    grid = catalog_grid(name, resolved, step) if s_grid is None else np.asarray(s_grid, dtype=float)
    positions = catalog_eval(name, resolved, grid)
    return CurveSamples(grid, positions, entry.case.epsilon,
                        meta={'source': 'catalog', 'name': name, 'case': entry.case.label, **resolved})


def catalog_validate(name: str, params: Optional[Mapping[str, float]] = None,
                     step: Optional[float] = None, tol: Optional[float] = None,
                     s_grid=None) -> ValidationReport:
    """
    Compare the printed form with synthesize and integrate_frenet on `s_grid`
    (default: the standard grid at `step`).

    Deviations are measured modulo translation; the verdict is DISCREPANT
    when any of the three pairwise deviations exceeds `tol`.
    """
    tol = get_config().DISCREPANCY_TOL if tol is None else tol
    entry = catalog_get(name)
    resolved = entry.resolve(params)
    spec = catalog_spec(name, resolved)
    printed = catalog_samples(name, resolved, s_grid=s_grid, step=step)
    grid = printed.s
    synthesized = synthesize(spec, grid)

    notes = []
    deviations = {'closed_form_vs_synthesis': max_deviation(printed.positions, synthesized.positions)}
    kappa = spec.pair.kappa
    start = int(np.argmin(np.abs(grid - kappa.reference)))
    try:
        oracle = integrate_frenet(spec.pair, frame_closed_form(spec, kappa.theta(grid[start])),
                                  synthesized.positions[start], grid, s0=grid[start])
        deviations['closed_form_vs_frenet'] = max_deviation(printed.positions, oracle.positions)
        deviations['synthesis_vs_frenet'] = max_deviation(synthesized.positions, oracle.positions)
        deviations['frame_drift'] = oracle.meta['drift']
    except HelixError as e:
        notes.append(f"Frenet integration failed: {e.message}")

    recovery = recover_intrinsics(printed, spec.pair)
    recovery['expected_orientation'] = spec.orientation
    axis = helix_axis(synthesized, spec)
    helix = {
        **spec.describe(),
        'axis_estimate': axis.axis.to_list(),
        'axis_variance': axis.variance,
        'angle_spread': constant_angle_spread(synthesized, spec.axis),
    }

    worst = max(v for k, v in deviations.items() if k != 'frame_drift')
    if worst > tol:
        notes.append(f"printed form deviates by {worst:.3e} (tolerance {tol:g})")
    status = Verdict.DISCREPANT if notes else Verdict.CONSISTENT
    if status is Verdict.DISCREPANT:
        logger.warning("catalog entry %s is DISCREPANT: %s", name, '; '.join(notes))
    else:
        logger.info("catalog entry %s is CONSISTENT (max deviation %.3e)", name, worst)
    return ValidationReport(
        subject=name, status=status, tolerance=tol, points=len(grid),
        deviations=deviations, recovery=recovery, speed_residual=printed.speed_residual(),
        params=resolved, helix=helix, notes=notes,
    )
