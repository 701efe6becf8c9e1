"""
Frenet oracle for spacelike curves.

Integrates T' = kN, N' = -eps k T + tau B, B' = tau N (plus psi' = T) with
fixed-step RK4, and recovers frames, curvature and torsion from sampled
positions by central finite differences. Both directions are independent
of the closed forms in geometry.synthesis.
"""
import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Dict, Optional, Tuple

import numpy as np

from config import get_config
from errors import (
    BadInitialFrameError, DegenerateCurvatureError, FrameDriftError, GridError, ZeroSlopeError
)
from geometry.intrinsics import IntrinsicPair
from geometry.minkowski import LorentzVector, lorentz_cross, metric, quadratic

logger = logging.getLogger(__name__)

# Drift above this is logged even when it stays under the FrameDrift threshold.
_DRIFT_NOTICE = 1e-8
_UNIFORM_RTOL = 1e-6


@dataclass(frozen=True)
class FrenetFrame:
    T: LorentzVector
    N: LorentzVector
    B: LorentzVector
    epsilon: int

    @classmethod
    def from_matrix(cls, rows, epsilon: int) -> 'FrenetFrame':
        rows = np.asarray(rows, dtype=float)
        return cls(*(LorentzVector.from_array(r) for r in rows), epsilon=int(epsilon))

    def as_matrix(self) -> np.ndarray:
        return np.array([np.asarray(self.T), np.asarray(self.N), np.asarray(self.B)])

    def residual(self) -> float:
        return float(frame_residuals(self.as_matrix(), self.epsilon))


def frame_products(frames: np.ndarray) -> np.ndarray:
    """The six products g(T,T), g(N,N), g(B,B), g(T,N), g(T,B), g(N,B) per frame."""
    T, N, B = frames[..., 0, :], frames[..., 1, :], frames[..., 2, :]
    return np.stack([
        metric(T, T), metric(N, N), metric(B, B),
        metric(T, N), metric(T, B), metric(N, B),
    ], axis=-1)


def frame_targets(epsilon: int) -> np.ndarray:
    return np.array([1.0, epsilon, -epsilon, 0.0, 0.0, 0.0])


def frame_residuals(frames: np.ndarray, epsilon: int):
    """Largest deviation of the six products from (1, eps, -eps, 0, 0, 0)."""
    return np.max(np.abs(frame_products(frames) - frame_targets(epsilon)), axis=-1)


@dataclass(frozen=True)
class CurveSamples:
    """Positions (and optionally frames) of a curve on an arclength grid."""
    s: np.ndarray
    positions: np.ndarray
    epsilon: int
    frames: Optional[np.ndarray] = None
    meta: Dict[str, Any] = field(default_factory=dict, compare=False)

    def __post_init__(self):
        s = np.array(self.s, dtype=float)
        positions = np.array(self.positions, dtype=float).reshape(-1, 3)
        if s.ndim != 1 or s.size == 0 or positions.shape[0] != s.size:
            raise GridError("Samples need one position per grid point", {'points': int(s.size)})
        if np.any(np.diff(s) <= 0):
            raise GridError("Arclength grid must be strictly increasing")
        if self.epsilon not in (-1, 1):
            raise GridError("epsilon must be +1 or -1", {'epsilon': self.epsilon})
        s.setflags(write=False)
        positions.setflags(write=False)
        object.__setattr__(self, 's', s)
        object.__setattr__(self, 'positions', positions)
        if self.frames is not None:
            frames = np.array(self.frames, dtype=float).reshape(-1, 3, 3)
            if frames.shape[0] != s.size:
                raise GridError("Samples need one frame per grid point")
            frames.setflags(write=False)
            object.__setattr__(self, 'frames', frames)

    def __len__(self):
        return self.s.size

    def position(self, i: int) -> LorentzVector:
        return LorentzVector.from_array(self.positions[i])

    def frame(self, i: int) -> FrenetFrame:
        if self.frames is None:
            raise IndexError("Samples carry no frames")
        return FrenetFrame.from_matrix(self.frames[i], self.epsilon)

    def with_meta(self, **meta) -> 'CurveSamples':
        return replace(self, meta={**self.meta, **meta})

    def without_frames(self) -> 'CurveSamples':
        return replace(self, frames=None)

    def step(self) -> float:
        """Uniform grid spacing; GridError when the grid is not uniform."""
        return uniform_step(self.s)

    def speed_residual(self) -> float:
        """max |g(psi', psi') - 1| over interior points, fourth-order central differences."""
        if len(self) < 5:
            return 0.0
        h = self.step()
        p = self.positions
        d1 = (-p[4:] + 8 * p[3:-1] - 8 * p[1:-3] + p[:-4]) / (12.0 * h)
        return float(np.max(np.abs(quadratic(d1) - 1.0)))


def make_grid(s_min: float, s_max: float, step: float) -> np.ndarray:
    """Uniform grid from s_min to s_max inclusive (endpoint within half a step)."""
    if not step > 0:
        raise GridError("Grid step must be positive", {'step': step})
    if not s_min < s_max:
        raise GridError("Grid needs s_min < s_max", {'s_min': s_min, 's_max': s_max})
    count = int(math.floor((s_max - s_min) / step + 0.5)) + 1
    return s_min + step * np.arange(count)


def uniform_step(grid: np.ndarray) -> float:
    diffs = np.diff(np.asarray(grid, dtype=float))
    if diffs.size == 0:
        raise GridError("A single point has no spacing")
    h = float(np.mean(diffs))
    if not np.allclose(diffs, h, rtol=_UNIFORM_RTOL, atol=0.0):
        raise GridError("Grid is not uniform", {'min_step': float(diffs.min()), 'max_step': float(diffs.max())})
    return h


def _frenet_rhs(kappa: float, tau: float, epsilon: int, y: np.ndarray) -> np.ndarray:
    T, N, B = y[3:6], y[6:9], y[9:12]
    return np.concatenate([T, kappa * N, -epsilon * kappa * T + tau * B, tau * N])


def _stabilize(y: np.ndarray, epsilon: int) -> np.ndarray:
    """Gram-Schmidt with signature: restore g(T,T)=1, g(N,N)=eps, g(B,B)=-eps."""
    T, N, B = y[3:6].copy(), y[6:9].copy(), y[9:12].copy()
    T /= math.sqrt(abs(quadratic(T)))
    N -= metric(N, T) * T
    N /= math.sqrt(abs(quadratic(N)))
    B -= metric(B, T) * T + epsilon * metric(B, N) * N
    B /= math.sqrt(abs(quadratic(B)))
    return np.concatenate([y[:3], T, N, B])


def integrate_frenet(pair: IntrinsicPair, initial: FrenetFrame, initial_position,
                     s_grid, s0: Optional[float] = None, substeps: int = 1,
                     stabilize: bool = False, drift_tol: Optional[float] = None,
                     initial_tol: Optional[float] = None) -> CurveSamples:
    """
    Integrate the Frenet system on s_grid with fixed-step RK4.

    Initial data sit at the grid point s0 (default the first point); the
    system is integrated forward and backward from there, one step per grid
    interval split into `substeps`.
    """
    cfg = get_config()
    drift_tol = cfg.FRAME_DRIFT_TOL if drift_tol is None else drift_tol
    initial_tol = cfg.INITIAL_FRAME_TOL if initial_tol is None else initial_tol
    epsilon = initial.epsilon
    if epsilon != pair.epsilon:
        raise BadInitialFrameError("Initial frame epsilon differs from the intrinsic pair",
                                   {'frame': epsilon, 'pair': pair.epsilon})

    grid = np.asarray(s_grid, dtype=float)
    if grid.ndim != 1 or grid.size == 0 or np.any(np.diff(grid) <= 0):
        raise GridError("Integration grid must be a non-empty strictly increasing array")
    start = 0 if s0 is None else int(np.argmin(np.abs(grid - s0)))
    if s0 is not None and not math.isclose(grid[start], s0, rel_tol=1e-12, abs_tol=1e-12):
        raise GridError("s0 must be a grid point", {'s0': s0})

    frame0 = initial.as_matrix()
    scale = max(1.0, float(np.max(np.abs(frame0))) ** 2)
    residual0 = float(frame_residuals(frame0, epsilon))
    if residual0 > initial_tol * scale:
        raise BadInitialFrameError("Initial frame is not pseudo-orthonormal", {'residual': residual0})
    kappa_grid = pair.kappa(grid)
    if np.any(kappa_grid <= 0):
        raise DegenerateCurvatureError("Curvature must be positive on the grid")
    pair.tau(grid)

    states = np.empty((grid.size, 12))
    states[start] = np.concatenate([np.asarray(initial_position, dtype=float), frame0.ravel()])

    def advance(y, s, h):
        k1 = _frenet_rhs(pair.kappa(s), pair.tau(s), epsilon, y)
        k2 = _frenet_rhs(pair.kappa(s + h / 2), pair.tau(s + h / 2), epsilon, y + h / 2 * k1)
        k3 = _frenet_rhs(pair.kappa(s + h / 2), pair.tau(s + h / 2), epsilon, y + h / 2 * k2)
        k4 = _frenet_rhs(pair.kappa(s + h), pair.tau(s + h), epsilon, y + h * k3)
        y = y + h / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        return _stabilize(y, epsilon) if stabilize else y

    for direction, indices in ((1, range(start + 1, grid.size)), (-1, range(start - 1, -1, -1))):
        for i in indices:
            prev = i - direction
            y, s = states[prev], grid[prev]
            h = (grid[i] - s) / substeps
            for _ in range(substeps):
                y = advance(y, s, h)
                s += h
            states[i] = y

    frames = states[:, 3:].reshape(-1, 3, 3)
    drift = float(np.max(np.abs(frame_products(frames) - frame_products(frame0))))
    if drift > drift_tol:
        raise FrameDriftError("Frame left the pseudo-orthonormal set; refine the step",
                              {'drift': drift, 'tolerance': drift_tol})
    if drift > _DRIFT_NOTICE:
        logger.warning("Frenet integration drift %.3e (tolerance %.1e)", drift, drift_tol)
    logger.debug("Integrated %d points from s0=%g, drift %.3e", grid.size, grid[start], drift)
    return CurveSamples(grid, states[:, :3], epsilon, frames,
                        meta={'source': 'frenet', 'drift': drift, 's0': float(grid[start])})


@dataclass(frozen=True)
class FrameEstimate:
    frame: FrenetFrame
    kappa: float
    tau: float


def _stencil_derivatives(positions: np.ndarray, idx: np.ndarray, h: float, order: int,
                         stride: int) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    def at(k):
        return positions[idx + k * stride]

    c, p1, m1, p2, m2 = at(0), at(1), at(-1), at(2), at(-2)
    if order == 4:
        p3, m3 = at(3), at(-3)
        d1 = (-p2 + 8 * p1 - 8 * m1 + m2) / (12 * h)
        d2 = (-p2 + 16 * p1 - 30 * c + 16 * m1 - m2) / (12 * h * h)
        d3 = (m3 - 8 * m2 + 13 * m1 - 13 * p1 + 8 * p2 - p3) / (8 * h ** 3)
    else:
        d1 = (p1 - m1) / (2 * h)
        d2 = (p1 - 2 * c + m1) / (h * h)
        d3 = (p2 - 2 * p1 + 2 * m1 - m2) / (2 * h ** 3)
    return d1, d2, d3


def stencil_reach(order: int, stride: int = 1) -> int:
    """Samples needed on each side of a point by estimate_frames."""
    if order not in (2, 4):
        raise ValueError("Stencil order must be 2 or 4")
    return (3 if order == 4 else 2) * stride


def estimate_frames(samples: CurveSamples, indices=None, orientation: int = -1,
                    order: int = 2, stride: int = 1,
                    curvature_floor: Optional[float] = None) -> Dict[str, np.ndarray]:
    """
    Frames, curvature and torsion at interior points of a uniform grid.

    B is orientation * lorentz_cross(T, N); orientation -1 reproduces the
    timelike-normal W-curve with positive torsion. Torsion follows from
    N' = -eps k T + tau B as tau = -eps g(N', B). The stencils span
    `stride` grid steps per node; a wider spacing trades truncation error
    for round-off on strongly boosted curves.
    """
    floor = get_config().CURVATURE_FLOOR if curvature_floor is None else curvature_floor
    reach = stencil_reach(order, stride)
    n = len(samples)
    if indices is None:
        indices = np.arange(reach, n - reach)
    idx = np.atleast_1d(np.asarray(indices, dtype=int))
    if idx.size == 0 or idx.min() < reach or idx.max() > n - 1 - reach:
        raise GridError(f"Frame estimation needs {reach} samples on each side", {'points': n})
    h = uniform_step(samples.s[idx.min() - reach: idx.max() + reach + 1]) * stride

    d1, d2, d3 = _stencil_derivatives(samples.positions, idx, h, order, stride)
    q2 = quadratic(d2)
    kappa = np.sqrt(np.abs(q2))
    if np.any(kappa < floor):
        raise DegenerateCurvatureError("Curvature vanishes at a sampled point",
                                       {'min_kappa': float(kappa.min())})
    epsilon = np.where(q2 >= 0, 1, -1)
    N = d2 / kappa[:, None]
    kappa_prime = epsilon * metric(d3, d2) / kappa
    N_prime = d3 / kappa[:, None] - (kappa_prime / kappa)[:, None] * N
    B = orientation * lorentz_cross(d1, N)
    tau = -epsilon * metric(N_prime, B)
    return {
        'index': idx, 's': samples.s[idx], 'T': d1, 'N': N, 'B': B,
        'kappa': kappa, 'tau': tau, 'epsilon': epsilon,
    }


def estimate_frame(samples: CurveSamples, i: int, orientation: int = -1, order: int = 2,
                   stride: int = 1, curvature_floor: Optional[float] = None) -> FrameEstimate:
    est = estimate_frames(samples, [i], orientation=orientation, order=order, stride=stride,
                          curvature_floor=curvature_floor)
    frame = FrenetFrame.from_matrix([est['T'][0], est['N'][0], est['B'][0]], int(est['epsilon'][0]))
    return FrameEstimate(frame, float(est['kappa'][0]), float(est['tau'][0]))


def binormal_from_tangent(tangents, theta, f: float, epsilon: int,
                          tol: float = 1e-5) -> Tuple[np.ndarray, np.ndarray]:
    """
    B(theta) = (T''(theta) + eps T(theta)) / f on the interior of a uniform theta grid.

    Returns the interior theta values and the binormals there.
    """
    if abs(f) < 1e-12:
        raise ZeroSlopeError("Binormal reconstruction divides by tau/kappa", {'f': f})
    T = np.asarray(tangents, dtype=float)
    theta = np.asarray(theta, dtype=float)
    h = uniform_step(theta)
    second = (T[2:] - 2 * T[1:-1] + T[:-2]) / (h * h)
    B = (second + epsilon * T[1:-1]) / f
    off = float(np.max(np.abs(quadratic(B) + epsilon)))
    if off > tol:
        logger.warning("Reconstructed binormal off the pseudo-sphere by %.3e", off)
    return theta[1:-1], B
