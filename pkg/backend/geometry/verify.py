"""
Cross-checks between sampled curves and their intrinsic equations.
"""
import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np

from config import get_config
from geometry.frenet import CurveSamples, estimate_frames
from geometry.intrinsics import IntrinsicPair

logger = logging.getLogger(__name__)


class Verdict(str, Enum):
    CONSISTENT = 'CONSISTENT'
    DISCREPANT = 'DISCREPANT'


@dataclass
class ValidationReport:
    subject: str
    status: Verdict
    tolerance: float
    points: int
    deviations: Dict[str, float] = field(default_factory=dict)
    recovery: Dict[str, Any] = field(default_factory=dict)
    speed_residual: Optional[float] = None
    params: Dict[str, Any] = field(default_factory=dict)
    helix: Optional[Dict[str, Any]] = None
    notes: List[str] = field(default_factory=list)

    @property
    def consistent(self) -> bool:
        return self.status is Verdict.CONSISTENT

    @property
    def exit_code(self) -> int:
        return 0 if self.consistent else 3


def max_deviation(a, b) -> float:
    """Largest componentwise distance between two sampled curves after removing the mean offset."""
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    if a.shape != b.shape:
        raise ValueError(f"Cannot compare curves of shapes {a.shape} and {b.shape}")
    d = a - b
    return float(np.max(np.abs(d - d.mean(axis=0))))


def _stride(samples: CurveSamples, spacing: float, order: int) -> int:
    per_side = 3 if order == 4 else 2
    wanted = int(round(spacing / samples.step()))
    return max(1, min(wanted, (len(samples) - 1) // (2 * per_side)))


def recover_intrinsics(samples: CurveSamples, pair: IntrinsicPair,
                       orientation: Optional[int] = None, order: int = 4,
                       spacing: Optional[float] = None) -> Dict[str, Any]:
    """
    Estimate kappa and tau from positions and compare with the pair.

    Positions fix tau only up to the sign convention of B; when no
    orientation is given, the one that matches the pair better is used.
    Stencil nodes sit about `spacing` apart in arclength.
    """
    spacing = get_config().FD_SPACING if spacing is None else spacing
    stride = _stride(samples, spacing, order)
    est = estimate_frames(samples, order=order, stride=stride, orientation=orientation or -1)
    s = est['s']
    kappa, tau = np.asarray(pair.kappa(s)), np.asarray(pair.tau(s))
    kappa_error = float(np.max(np.abs(est['kappa'] - kappa)))
    tau_hat = est['tau']
    chosen = orientation or -1
    if orientation is None and np.max(np.abs(-tau_hat - tau)) < np.max(np.abs(tau_hat - tau)):
        tau_hat, chosen = -tau_hat, 1
    tau_error = float(np.max(np.abs(tau_hat - tau)))
    slope_hat = tau_hat / est['kappa']
    slope_error = float(np.max(np.abs(slope_hat - tau / kappa)))
    epsilon_hat = int(np.sign(np.sum(est['epsilon'])))
    return {
        'kappa_hat': float(np.median(est['kappa'])),
        'tau_hat': float(np.median(tau_hat)),
        'slope_hat': float(np.median(slope_hat)),
        'kappa_error': kappa_error,
        'tau_error': tau_error,
        'slope_error': slope_error,
        'epsilon_hat': epsilon_hat,
        'orientation': chosen,
        'stride': stride,
    }


def verify_samples(samples: CurveSamples, pair: IntrinsicPair, subject: str = 'samples',
                   tol: Optional[float] = None, speed_tol: Optional[float] = None) -> ValidationReport:
    """Check that sampled positions are unit speed and carry the intrinsic equations of `pair`."""
    cfg = get_config()
    tol = cfg.RECOVERY_TOL if tol is None else tol
    speed_tol = cfg.SPEED_TOL if speed_tol is None else speed_tol
    recovery = recover_intrinsics(samples, pair)
    speed = samples.speed_residual()
    notes = []
    if recovery['epsilon_hat'] != pair.epsilon:
        notes.append(f"estimated g(N,N) sign {recovery['epsilon_hat']} differs from epsilon {pair.epsilon}")
    if speed > speed_tol:
        notes.append(f"samples are not unit speed (residual {speed:.3e})")
    worst = max(recovery['kappa_error'], recovery['tau_error'])
    if worst > tol:
        notes.append(f"intrinsic recovery error {worst:.3e} exceeds {tol:g}")
    status = Verdict.DISCREPANT if notes else Verdict.CONSISTENT
    if status is Verdict.DISCREPANT:
        logger.warning("%s is DISCREPANT: %s", subject, '; '.join(notes))
    return ValidationReport(
        subject=subject, status=status, tolerance=tol, points=len(samples),
        recovery=recovery, speed_residual=speed,
        params={'kappa': pair.kappa.describe(), 'tau': pair.tau.describe(), 'epsilon': pair.epsilon},
        notes=notes,
    )
