"""
Spacelike general helices from their intrinsic equations.

A spacelike curve with constant slope m = tau/kappa falls in one of three
cases: a timelike principal normal (always a spacelike axis), or a spacelike
principal normal with |m| > 1 (spacelike axis) or |m| < 1 (timelike axis).
In each case the tangent has a closed form in theta = int kappa ds, and the
position is its integral in s.
"""
import logging
import math
from dataclasses import dataclass
from enum import IntEnum
from typing import Optional, Union

import numpy as np
from scipy.integrate import quad_vec

from errors import (
    CaseConstraintViolatedError, DegenerateFramesError, OutOfDomainError,
    RejectionError, RejectionReason, ZeroSlopeError
)
from geometry.frenet import CurveSamples, FrenetFrame, estimate_frames, uniform_step
from geometry.intrinsics import Family, IntrinsicPair, NonConstant, ratio
from geometry.minkowski import E1, E3, Causal, LorentzVector, metric, pseudo_norm

logger = logging.getLogger(__name__)

_SLOPE_EDGE = 1e-12
_QUAD_EPSABS = 1e-14
_QUAD_EPSREL = 1e-11
_RESONANCE = 1e-9


class HelixCase(IntEnum):
    TIMELIKE_NORMAL = 1
    SPACELIKE_NORMAL_SPACELIKE_AXIS = 2
    SPACELIKE_NORMAL_TIMELIKE_AXIS = 3

    @property
    def epsilon(self) -> int:
        return -1 if self is HelixCase.TIMELIKE_NORMAL else 1

    @property
    def axis(self) -> LorentzVector:
        return E1 if self is HelixCase.SPACELIKE_NORMAL_TIMELIKE_AXIS else E3

    @property
    def axis_character(self) -> Causal:
        return Causal.TIMELIKE if self is HelixCase.SPACELIKE_NORMAL_TIMELIKE_AXIS else Causal.SPACELIKE

    @property
    def label(self) -> str:
        return {
            1: 'Case1_TimelikeNormal',
            2: 'Case2_SpacelikeNormal_SpacelikeAxis',
            3: 'Case3_SpacelikeNormal_TimelikeAxis',
        }[self.value]

    @property
    def mirror_coordinate(self) -> int:
        """Index of the coordinate carrying the odd (sinh or sin) term."""
        return {1: 0, 2: 1, 3: 2}[self.value]


def classify_case(epsilon: int, m: float, axis: Optional[Causal] = None) -> HelixCase:
    """
    Decide the helix case of a spacelike curve from g(N,N) and the slope.

    `axis` optionally requests the causal character of the fixed line; a
    request the characterization cannot satisfy is rejected.
    """
    if epsilon not in (-1, 1):
        raise CaseConstraintViolatedError("epsilon must be +1 or -1", {'epsilon': epsilon})
    if not math.isfinite(m):
        raise CaseConstraintViolatedError("Slope must be finite", {'m': m})
    if axis is Causal.NULL:
        raise RejectionError(RejectionReason.AXIS_MISMATCH, {'axis': axis.value})

    if epsilon == -1:
        case = HelixCase.TIMELIKE_NORMAL
    elif abs(abs(m) - 1.0) <= _SLOPE_EDGE:
        raise RejectionError(RejectionReason.DEGENERATE_SLOPE, {'epsilon': epsilon, 'm': m})
    elif m == 0 and axis is Causal.SPACELIKE:
        raise RejectionError(RejectionReason.PLANAR_SPACELIKE_AXIS, {'epsilon': epsilon, 'm': m})
    elif abs(m) > 1:
        case = HelixCase.SPACELIKE_NORMAL_SPACELIKE_AXIS
    else:
        case = HelixCase.SPACELIKE_NORMAL_TIMELIKE_AXIS

    if axis is not None and axis is not case.axis_character:
        raise RejectionError(
            RejectionReason.AXIS_MISMATCH,
            {'epsilon': epsilon, 'm': m, 'requested': axis.value, 'case': case.label}
        )
    return case


# Slope, cosine and angle conversions.
# phi is unsigned, as lorentz_angle returns it; |n| is cos(phi), cosh(phi)
# or sinh(phi) by case and n carries the sign of m.

def slope_to_cosine(case: HelixCase, m: float) -> float:
    if case is HelixCase.TIMELIKE_NORMAL:
        return m / math.sqrt(1.0 + m * m)
    if case is HelixCase.SPACELIKE_NORMAL_SPACELIKE_AXIS:
        return m / math.sqrt(m * m - 1.0)
    return m / math.sqrt(1.0 - m * m)


def cosine_to_slope(case: HelixCase, n: float) -> float:
    if case is HelixCase.TIMELIKE_NORMAL:
        return n / math.sqrt(1.0 - n * n)
    if case is HelixCase.SPACELIKE_NORMAL_SPACELIKE_AXIS:
        return n / math.sqrt(n * n - 1.0)
    return n / math.sqrt(1.0 + n * n)


def slope_angle(case: HelixCase, m: float) -> float:
    """phi = arccot |m|, arccoth |m| or arctanh |m|."""
    if case is HelixCase.TIMELIKE_NORMAL:
        return math.atan2(1.0, abs(m))
    if case is HelixCase.SPACELIKE_NORMAL_SPACELIKE_AXIS:
        return abs(math.atanh(1.0 / m))
    return abs(math.atanh(m))


@dataclass(frozen=True)
class HelixSpec:
    """A classified spacelike general helix."""
    case: HelixCase
    m: float
    n: float
    phi: float
    pair: IntrinsicPair
    axis: LorentzVector
    mirror: bool = False

    def __post_init__(self):
        case, m, n = self.case, self.m, self.n
        if self.pair.epsilon != case.epsilon:
            raise CaseConstraintViolatedError(
                f"{case.label} needs epsilon={case.epsilon}", {'epsilon': self.pair.epsilon}
            )
        bounds = {
            HelixCase.TIMELIKE_NORMAL: abs(n) < 1,
            HelixCase.SPACELIKE_NORMAL_SPACELIKE_AXIS: abs(m) > 1 and abs(n) > 1,
            HelixCase.SPACELIKE_NORMAL_TIMELIKE_AXIS: abs(m) < 1,
        }
        if not bounds[case]:
            raise CaseConstraintViolatedError(f"Slope {m:g} is outside {case.label}", {'m': m, 'n': n})
        if not math.isclose(cosine_to_slope(case, n), m, rel_tol=1e-9, abs_tol=1e-12):
            raise CaseConstraintViolatedError("n and m disagree", {'m': m, 'n': n})

    @classmethod
    def from_pair(cls, pair: IntrinsicPair, axis: Optional[Causal] = None,
                  mirror: bool = False) -> 'HelixSpec':
        m = ratio(pair)
        if isinstance(m, NonConstant):
            raise CaseConstraintViolatedError(
                "tau/kappa is not constant; the pair is not a general helix", {'spread': m.spread}
            )
        case = classify_case(pair.epsilon, m, axis)
        return cls(case, m, slope_to_cosine(case, m), slope_angle(case, m), pair, case.axis, mirror)

    @property
    def epsilon(self) -> int:
        return self.case.epsilon

    @property
    def amplitude(self) -> float:
        """Length factor of the tangent: sqrt(1-n^2), sqrt(n^2-1) or sqrt(1+n^2)."""
        m2 = self.m * self.m
        if self.case is HelixCase.TIMELIKE_NORMAL:
            return 1.0 / math.sqrt(1.0 + m2)
        if self.case is HelixCase.SPACELIKE_NORMAL_SPACELIKE_AXIS:
            return 1.0 / math.sqrt(m2 - 1.0)
        return 1.0 / math.sqrt(1.0 - m2)

    @property
    def rate(self) -> float:
        """Angular rate in theta: sqrt(1+m^2), sqrt(m^2-1) or sqrt(1-m^2)."""
        return 1.0 / self.amplitude

    @property
    def orientation(self) -> int:
        """sigma with B = sigma * lorentz_cross(T, N) along the synthesized curve."""
        sigma = 1 if self.case is HelixCase.SPACELIKE_NORMAL_TIMELIKE_AXIS else -1
        return -sigma if self.mirror else sigma

    def describe(self) -> dict:
        return {
            'case': self.case.label,
            'epsilon': self.epsilon,
            'm': self.m,
            'n': self.n,
            'phi': self.phi,
            'axis': self.axis.to_list(),
            'mirror': self.mirror,
        }


def classify_pair(pair: IntrinsicPair, axis: Optional[Causal] = None, mirror: bool = False) -> HelixSpec:
    return HelixSpec.from_pair(pair, axis, mirror)


def _rotating(spec: HelixSpec, theta: np.ndarray):
    ct = spec.rate * theta
    if spec.case is HelixCase.SPACELIKE_NORMAL_TIMELIKE_AXIS:
        return np.cos(ct), np.sin(ct)
    return np.cosh(ct), np.sinh(ct)


def _apply_mirror(spec: HelixSpec, vectors: np.ndarray) -> np.ndarray:
    if spec.mirror:
        vectors = vectors.copy()
        vectors[..., spec.case.mirror_coordinate] *= -1.0
    return vectors


def _tangent_array(spec: HelixSpec, theta: np.ndarray) -> np.ndarray:
    a, m = spec.amplitude, spec.m
    even, odd = _rotating(spec, theta)
    const = np.full_like(theta, m)
    if spec.case is HelixCase.TIMELIKE_NORMAL:
        rows = (odd, even, const)
    elif spec.case is HelixCase.SPACELIKE_NORMAL_SPACELIKE_AXIS:
        rows = (even, odd, const)
    else:
        rows = (const, even, odd)
    return _apply_mirror(spec, a * np.stack(rows, axis=-1))


def tangent_closed_form(spec: HelixSpec, theta) -> Union[LorentzVector, np.ndarray]:
    """Unit tangent of the helix at parameter theta."""
    t = np.asarray(theta, dtype=float)
    T = _tangent_array(spec, t)
    return LorentzVector.from_array(T) if t.ndim == 0 else T


def frame_closed_form(spec: HelixSpec, theta) -> Union[FrenetFrame, np.ndarray]:
    """Exact Frenet frame (T, N, B) at theta; an array of shape (k, 3, 3) for array input."""
    t = np.asarray(theta, dtype=float)
    a, m = spec.amplitude, spec.m
    even, odd = _rotating(spec, t)
    zero = np.zeros_like(t)
    T = _tangent_array(spec, t)
    if spec.case is HelixCase.TIMELIKE_NORMAL:
        N = np.stack([even, odd, zero], axis=-1)
        B = a * np.stack([m * odd, m * even, np.full_like(t, -1.0)], axis=-1)
    elif spec.case is HelixCase.SPACELIKE_NORMAL_SPACELIKE_AXIS:
        N = np.stack([odd, even, zero], axis=-1)
        B = a * np.stack([m * even, m * odd, np.full_like(t, 1.0)], axis=-1)
    else:
        N = np.stack([zero, -odd, even], axis=-1)
        B = a * np.stack([np.full_like(t, 1.0), m * even, m * odd], axis=-1)
    frames = np.stack([T, _apply_mirror(spec, N), _apply_mirror(spec, B)], axis=-2)
    return FrenetFrame.from_matrix(frames, spec.epsilon) if t.ndim == 0 else frames


def _tangent_primitive(spec: HelixSpec, theta: np.ndarray) -> np.ndarray:
    """An antiderivative in theta of the closed-form tangent."""
    a, m, c = spec.amplitude, spec.m, spec.rate
    even, odd = _rotating(spec, theta)
    if spec.case is HelixCase.TIMELIKE_NORMAL:
        rows = (even / c, odd / c, m * theta)
    elif spec.case is HelixCase.SPACELIKE_NORMAL_SPACELIKE_AXIS:
        rows = (odd / c, even / c, m * theta)
    else:
        rows = (m * theta, odd / c, -even / c)
    return _apply_mirror(spec, a * np.stack(rows, axis=-1))


def _resonant(spec: HelixSpec, k: float) -> bool:
    """exp(k theta) beats against cosh/sinh(c theta) when k^2 = c^2."""
    if spec.case is HelixCase.SPACELIKE_NORMAL_TIMELIKE_AXIS:
        return False
    c = spec.rate
    return abs(k * k - c * c) <= _RESONANCE * (k * k + c * c)


def _exp_tangent_primitive(spec: HelixSpec, theta: np.ndarray, k: float) -> np.ndarray:
    """An antiderivative in theta of exp(k theta) T(theta), away from resonance."""
    a, m, c = spec.amplitude, spec.m, spec.rate
    even, odd = _rotating(spec, theta)
    e = np.exp(k * theta)
    if spec.case is HelixCase.SPACELIKE_NORMAL_TIMELIKE_AXIS:
        d = k * k + c * c
        ev, od = e * (k * even + c * odd) / d, e * (k * odd - c * even) / d
    else:
        d = k * k - c * c
        ev, od = e * (k * even - c * odd) / d, e * (k * odd - c * even) / d
    const = m * e / k
    if spec.case is HelixCase.TIMELIKE_NORMAL:
        rows = (od, ev, const)
    elif spec.case is HelixCase.SPACELIKE_NORMAL_SPACELIKE_AXIS:
        rows = (ev, od, const)
    else:
        rows = (const, ev, od)
    return _apply_mirror(spec, a * np.stack(rows, axis=-1))


def _check_grid(grid: np.ndarray, name: str):
    if grid.ndim != 1 or grid.size == 0 or np.any(np.diff(grid) <= 0):
        raise OutOfDomainError(f"{name} must be a non-empty strictly increasing array")


def _cumulative_quad(integrand, knots: np.ndarray) -> np.ndarray:
    """
    Cumulative integral of a vector integrand from knots[0] to every knot.

    Every interval is mapped onto [-1, 1] and all of them go through one
    adaptive quad_vec call, so refinement is driven by the worst interval.
    """
    mid = 0.5 * (knots[1:] + knots[:-1])
    half = 0.5 * (knots[1:] - knots[:-1])
    if mid.size == 0:
        return np.zeros((1, 3))

    def scaled(u):
        return half[:, None] * integrand(mid + half * u)

    steps, error = quad_vec(scaled, -1.0, 1.0, epsabs=_QUAD_EPSABS, epsrel=_QUAD_EPSREL, norm='max')
    logger.debug("Adaptive quadrature over %d intervals, error estimate %.3e", mid.size, error)
    return np.vstack([np.zeros((1, 3)), np.cumsum(steps, axis=0)])


def _samples_meta(spec: HelixSpec, source: str) -> dict:
    return {**spec.describe(), 'source': source,
            'kappa': spec.pair.kappa.describe(), 'tau': spec.pair.tau.describe()}


def synthesize(spec: HelixSpec, s_grid, s_ref: Optional[float] = None) -> CurveSamples:
    """
    Position and frames of the helix on an arclength grid, with psi(s_ref) = 0.

    Constant and reciprocal curvature integrate the closed-form tangent
    exactly; any other curvature uses adaptive quadrature between grid points.
    """
    grid = np.asarray(s_grid, dtype=float)
    _check_grid(grid, "Arclength grid")
    pair, kappa = spec.pair, spec.pair.kappa
    if not np.all(pair.contains(grid)):
        raise OutOfDomainError("Arclength grid leaves the domain of the intrinsic pair",
                               {'domain': list(pair.domain)})
    if s_ref is None:
        s_ref = kappa.reference if pair.contains(kappa.reference) else float(grid[0])
    elif not pair.contains(s_ref):
        raise OutOfDomainError("Gauge point lies outside the domain", {'s_ref': s_ref})

    theta = kappa.theta(grid)
    if kappa.family is Family.CONSTANT:
        theta_ref = kappa.theta(s_ref)
        positions = (_tangent_primitive(spec, theta) - _tangent_primitive(spec, np.asarray(theta_ref))) / kappa.param
    elif kappa.family is Family.RECIPROCAL and not _resonant(spec, 1.0 / kappa.param):
        # s = reference * exp(theta / h), so ds = (s / h) dtheta
        k = 1.0 / kappa.param
        theta_ref = kappa.theta(s_ref)
        scale = kappa.reference * k
        positions = scale * (_exp_tangent_primitive(spec, theta, k)
                             - _exp_tangent_primitive(spec, np.asarray(theta_ref), k))
    else:
        knots = np.union1d(grid, [s_ref])
        cumulative = _cumulative_quad(lambda s: _tangent_array(spec, kappa.theta(s)), knots)
        cumulative -= cumulative[np.searchsorted(knots, s_ref)]
        positions = cumulative[np.searchsorted(knots, grid)]

    logger.debug("Synthesized %s on %d points (m=%g)", spec.case.label, grid.size, spec.m)
    return CurveSamples(grid, positions, spec.epsilon, frame_closed_form(spec, theta),
                        meta={**_samples_meta(spec, 'synthesis'), 's_ref': float(s_ref)})


def synthesize_parametric(spec: HelixSpec, theta_grid, theta_ref: float = 0.0) -> CurveSamples:
    """
    The theta-parametric form psi(theta) = int T(theta) / kappa(theta) dtheta.

    Integrates in theta with s = s_of_theta(theta); the samples are returned
    on the corresponding (generally non-uniform) arclength grid.
    """
    theta = np.asarray(theta_grid, dtype=float)
    _check_grid(theta, "Theta grid")
    kappa = spec.pair.kappa
    s = kappa.s_of_theta(theta)
    s_ref = kappa.s_of_theta(theta_ref)

    def integrand(t):
        return _tangent_array(spec, t) / kappa(kappa.s_of_theta(t))[:, None]

    knots = np.union1d(theta, [theta_ref])
    cumulative = _cumulative_quad(integrand, knots)
    cumulative -= cumulative[np.searchsorted(knots, theta_ref)]
    positions = cumulative[np.searchsorted(knots, theta)]
    return CurveSamples(np.atleast_1d(s), positions, spec.epsilon, frame_closed_form(spec, theta),
                        meta={**_samples_meta(spec, 'parametric'), 's_ref': float(s_ref)})


@dataclass(frozen=True)
class OdeResidual:
    third_order: float
    reduced: float


def _tangent_derivatives(spec: HelixSpec, theta_grid):
    theta = np.asarray(theta_grid, dtype=float)
    if theta.size < 5:
        raise OutOfDomainError("Residual checks need at least five theta samples")
    h = uniform_step(theta)
    T = _tangent_array(spec, theta)
    d1 = (T[3:-1] - T[1:-3]) / (2 * h)
    d3 = (T[4:] - 2 * T[3:-1] + 2 * T[1:-3] - T[:-4]) / (2 * h ** 3)
    return d1, d3


def reduced_ode_residual(spec: HelixSpec, theta_grid) -> float:
    """max |T''' + (eps - m^2) T'| by finite differences; defined for m = 0."""
    d1, d3 = _tangent_derivatives(spec, theta_grid)
    return float(np.max(np.abs(d3 + (spec.epsilon - spec.m ** 2) * d1)))


def tangent_ode_residual(spec: HelixSpec, theta_grid) -> OdeResidual:
    """
    Finite-difference residuals of the third-order tangent equation with f = m.

    (T''/f)' + ((eps - f^2)/f) T' - eps (f'/f) T reduces to
    T'''/m + ((eps - m^2)/m) T' for constant slope.
    """
    d1, d3 = _tangent_derivatives(spec, theta_grid)
    eps, m = spec.epsilon, spec.m
    reduced = float(np.max(np.abs(d3 + (eps - m * m) * d1)))
    if abs(m) < 1e-12:
        raise ZeroSlopeError("The third-order tangent equation divides by tau/kappa",
                             {'m': m, 'reduced': reduced})
    third = float(np.max(np.abs(d3 / m + ((eps - m * m) / m) * d1)))
    return OdeResidual(third, reduced)


def hyperbola_residual(spec: HelixSpec, theta_grid) -> float:
    """Deviation of the rotating tangent components from their conic."""
    T = _tangent_array(spec, np.asarray(theta_grid, dtype=float))
    n2 = spec.n * spec.n
    if spec.case is HelixCase.TIMELIKE_NORMAL:
        values = -T[:, 0] ** 2 + T[:, 1] ** 2 - (1.0 - n2)
    elif spec.case is HelixCase.SPACELIKE_NORMAL_SPACELIKE_AXIS:
        values = -T[:, 0] ** 2 + T[:, 1] ** 2 + (n2 - 1.0)
    else:
        values = T[:, 1] ** 2 + T[:, 2] ** 2 - (n2 + 1.0)
    return float(np.max(np.abs(values)))


@dataclass(frozen=True)
class AxisEstimate:
    axis: LorentzVector
    variance: float
    sign: int


def _canonical(direction: np.ndarray) -> np.ndarray:
    return direction if direction[np.argmax(np.abs(direction))] > 0 else -direction


def helix_axis(samples: CurveSamples, spec: HelixSpec) -> AxisEstimate:
    """
    The fixed line of a helix rebuilt as d = n T + lambda B at every sample.

    lambda = +-sqrt(|1 - n^2|) in the timelike-normal case and +-sqrt(|n^2 -+ 1|)
    otherwise; the sign with the smaller spread across samples wins, which also
    absorbs the orientation of estimated binormals.
    """
    if samples.frames is not None:
        T, B = samples.frames[:, 0, :], samples.frames[:, 2, :]
    else:
        if len(samples) < 5:
            raise DegenerateFramesError("Too few samples to estimate frames", {'points': len(samples)})
        est = estimate_frames(samples, orientation=spec.orientation)
        T, B = est['T'], est['B']
    if T.shape[0] == 0:
        raise DegenerateFramesError("No frames to rebuild the axis from")

    n, lam = spec.n, spec.amplitude
    best = None
    for sign in (-1, 1):
        directions = n * T + sign * lam * B
        variance = float(np.max(np.var(directions, axis=0)))
        if best is None or variance < best[1]:
            best = (directions, variance, sign)
    directions, variance, sign = best
    mean = directions.mean(axis=0)
    norm = float(pseudo_norm(mean))
    if norm < 1e-12:
        raise DegenerateFramesError("Rebuilt axis is null or zero", {'axis': mean.tolist()})
    axis = _canonical(mean / norm)
    logger.debug("Axis %s with spread %.3e", axis, variance)
    return AxisEstimate(LorentzVector.from_array(axis), variance, sign)


def constant_angle_spread(samples: CurveSamples, axis) -> float:
    """Variance of g(T, axis) along the samples; zero for a general helix."""
    if samples.frames is None:
        T = estimate_frames(samples)['T']
    else:
        T = samples.frames[:, 0, :]
    return float(np.var(metric(T, np.asarray(axis, dtype=float))))
