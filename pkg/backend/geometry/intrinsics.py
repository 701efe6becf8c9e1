"""
Curvature and torsion functions and the reparameterization theta = int kappa ds.

Four closed-form families carry closed-form theta(s) and inverses; tabulated
functions are interpolated with a shape-preserving cubic Hermite spline
whose antiderivative gives theta exactly for the interpolant.
"""
import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np
import pandas as pd
from scipy.interpolate import PchipInterpolator
from scipy.optimize import brentq

from config import get_config
from errors import (
    InadmissibleFunctionError, OutOfDomainError, OutOfRangeError, SamplesFormatError
)

logger = logging.getLogger(__name__)

# Sample windows over unbounded domains and clearance from poles.
_SCAN_HALF_WIDTH = 10.0
_POLE_CLEARANCE = 1e-6


class Family(str, Enum):
    CONSTANT = 'const'
    RATIONAL_MINUS = 'rminus'   # a / (a^2 - s^2)
    RATIONAL_PLUS = 'rplus'     # a / (a^2 + s^2)
    RECIPROCAL = 'recip'        # h / s
    TABULATED = 'table'


@dataclass(frozen=True)
class ScalarFunction:
    """A curvature or torsion function of arclength on a real interval."""
    family: Family
    param: float = 0.0
    domain: Tuple[float, float] = (-math.inf, math.inf)
    reference: Optional[float] = None
    grid: Optional[np.ndarray] = field(default=None, compare=False, repr=False)
    values: Optional[np.ndarray] = field(default=None, compare=False, repr=False)
    source: Optional[str] = None

    def __post_init__(self):
        lo, hi = (float(b) for b in self.domain)
        if not lo < hi:
            raise InadmissibleFunctionError("Domain must satisfy s_min < s_max", {'domain': [lo, hi]})
        object.__setattr__(self, 'domain', (lo, hi))
        self._check_admissible()
        if self.reference is None:
            object.__setattr__(self, 'reference', self._default_reference())
        elif not self.contains(self.reference):
            raise OutOfDomainError("Reference point lies outside the domain", {'reference': self.reference})
        if self.family is Family.TABULATED:
            object.__setattr__(self, '_spline', PchipInterpolator(self.grid, self.values, extrapolate=False))
            object.__setattr__(self, '_primitive', self._spline.antiderivative())

    # Constructors

    @classmethod
    def constant(cls, c: float, domain=(-math.inf, math.inf), reference=None) -> 'ScalarFunction':
        return cls(Family.CONSTANT, float(c), domain, reference)

    @classmethod
    def rational_minus(cls, a: float, domain=None, reference=None) -> 'ScalarFunction':
        a = float(a)
        return cls(Family.RATIONAL_MINUS, a, domain or (-abs(a), abs(a)), reference)

    @classmethod
    def rational_plus(cls, a: float, domain=(-math.inf, math.inf), reference=None) -> 'ScalarFunction':
        return cls(Family.RATIONAL_PLUS, float(a), domain, reference)

    @classmethod
    def reciprocal(cls, h: float, domain=(0.0, math.inf), reference=None) -> 'ScalarFunction':
        return cls(Family.RECIPROCAL, float(h), domain, reference)

    @classmethod
    def tabulated(cls, grid, values, reference=None, source=None) -> 'ScalarFunction':
        grid = np.asarray(grid, dtype=float)
        values = np.asarray(values, dtype=float)
        if grid.ndim != 1 or grid.shape != values.shape or grid.size < 2:
            raise InadmissibleFunctionError("Tabulated functions need matching 1-D grid and values with >= 2 points")
        grid.setflags(write=False)
        values.setflags(write=False)
        return cls(Family.TABULATED, 0.0, (grid[0], grid[-1]), reference, grid, values, source)

    # Admissibility

    def _check_admissible(self):
        lo, hi = self.domain
        fam, p = self.family, self.param
        if not math.isfinite(p):
            raise InadmissibleFunctionError("Family parameter must be finite", {'param': p})
        if fam is Family.RATIONAL_MINUS:
            if p == 0 or lo < -abs(p) or hi > abs(p):
                raise InadmissibleFunctionError(
                    "a/(a^2-s^2) needs a != 0 and a domain inside (-|a|, |a|)",
                    {'a': p, 'domain': [lo, hi]}
                )
        elif fam is Family.RATIONAL_PLUS:
            if p == 0:
                raise InadmissibleFunctionError("a/(a^2+s^2) needs a != 0", {'a': p})
        elif fam is Family.RECIPROCAL:
            if p == 0 or lo < 0 < hi:
                raise InadmissibleFunctionError(
                    "h/s needs h != 0 and a domain excluding s = 0",
                    {'h': p, 'domain': [lo, hi]}
                )
        elif fam is Family.TABULATED:
            grid, values = self.grid, self.values
            if grid is None or values is None:
                raise InadmissibleFunctionError("Tabulated function without samples")
            if not (np.all(np.isfinite(grid)) and np.all(np.isfinite(values))):
                raise InadmissibleFunctionError("Tabulated samples must be finite")
            if np.any(np.diff(grid) <= 0):
                raise InadmissibleFunctionError("Tabulated grid must be strictly increasing")
            if np.any(values > 0) and np.any(values < 0):
                raise InadmissibleFunctionError("Tabulated values must be single-signed")

    def _default_reference(self) -> float:
        lo, hi = self.domain
        if self.family is Family.RECIPROCAL:
            candidate = 1.0 if hi > 0 else -1.0
            if self.contains(candidate):
                return candidate
        elif lo <= 0.0 <= hi and self.contains(0.0):
            return 0.0
        if math.isfinite(lo) and math.isfinite(hi):
            return 0.5 * (lo + hi)
        return lo + 1.0 if math.isfinite(lo) else hi - 1.0

    def contains(self, s) -> Union[bool, np.ndarray]:
        s = np.asarray(s, dtype=float)
        lo, hi = self.domain
        inside = (s >= lo) & (s <= hi) & np.isfinite(s)
        if self.family is Family.RATIONAL_MINUS:
            inside &= np.abs(s) < abs(self.param)
        elif self.family is Family.RECIPROCAL:
            inside &= s != 0
        return bool(inside) if inside.ndim == 0 else inside

    def _require_domain(self, s: np.ndarray):
        inside = np.asarray(self.contains(s))
        if not np.all(inside):
            bad = np.asarray(s)[~inside] if inside.ndim else s
            raise OutOfDomainError(
                f"{self.describe()} evaluated outside its domain {list(self.domain)}",
                {'s': np.atleast_1d(bad)[:5].tolist()}
            )

    def sample_interval(self) -> Tuple[float, float]:
        """A closed finite interval strictly inside the valid domain."""
        lo, hi = self.domain
        ref = self.reference
        lo = lo if math.isfinite(lo) else ref - _SCAN_HALF_WIDTH
        hi = hi if math.isfinite(hi) else ref + _SCAN_HALF_WIDTH
        margin = _POLE_CLEARANCE * (hi - lo)
        if not self.contains(lo):
            lo += margin
        if not self.contains(hi):
            hi -= margin
        return lo, hi

    # Evaluation

    def __call__(self, s):
        s_arr = np.asarray(s, dtype=float)
        self._require_domain(s_arr)
        fam, p = self.family, self.param
        if fam is Family.CONSTANT:
            out = np.full_like(s_arr, p)
        elif fam is Family.RATIONAL_MINUS:
            out = p / (p * p - s_arr * s_arr)
        elif fam is Family.RATIONAL_PLUS:
            out = p / (p * p + s_arr * s_arr)
        elif fam is Family.RECIPROCAL:
            out = p / s_arr
        else:
            out = self._spline(s_arr)
        return float(out) if out.ndim == 0 else out

    def _primitive_at(self, s: np.ndarray) -> np.ndarray:
        fam, p = self.family, self.param
        if fam is Family.CONSTANT:
            return p * s
        if fam is Family.RATIONAL_MINUS:
            return np.arctanh(s / p)
        if fam is Family.RATIONAL_PLUS:
            return np.arctan(s / p)
        if fam is Family.RECIPROCAL:
            return p * np.log(np.abs(s))
        return self._primitive(s)

    def theta(self, s):
        """theta(s) = int_{reference}^{s} f(u) du."""
        s_arr = np.asarray(s, dtype=float)
        self._require_domain(s_arr)
        out = self._primitive_at(s_arr) - self._primitive_at(np.asarray(self.reference))
        return float(out) if np.ndim(out) == 0 else out

    def s_of_theta(self, theta):
        """Inverse of theta(s) on the domain."""
        t = np.asarray(theta, dtype=float)
        fam, p, ref = self.family, self.param, self.reference
        with np.errstate(all='ignore'):
            if fam is Family.CONSTANT:
                if p == 0:
                    raise OutOfRangeError("theta(s) is constant for a zero function")
                s = ref + t / p
            elif fam is Family.RATIONAL_MINUS:
                s = p * np.tanh(t + math.atanh(ref / p))
            elif fam is Family.RATIONAL_PLUS:
                shifted = t + math.atan(ref / p)
                s = np.where(np.abs(shifted) < math.pi / 2, p * np.tan(shifted), np.nan)
            elif fam is Family.RECIPROCAL:
                s = math.copysign(1.0, ref) * np.exp(t / p + math.log(abs(ref)))
            else:
                s = self._invert_tabulated(t)
        if not np.all(np.isfinite(s)) or not np.all(self.contains(s)):
            raise OutOfRangeError(
                f"theta outside the range of {self.describe()}",
                {'theta': np.atleast_1d(t)[:5].tolist()}
            )
        return float(s) if np.ndim(s) == 0 else s

    def _invert_tabulated(self, t: np.ndarray) -> np.ndarray:
        lo, hi = self.domain
        t_lo, t_hi = self.theta(lo), self.theta(hi)
        flat = np.atleast_1d(t).ravel()
        out = np.empty_like(flat)
        for k, target in enumerate(flat):
            if not min(t_lo, t_hi) <= target <= max(t_lo, t_hi):
                out[k] = np.nan
                continue
            out[k] = brentq(lambda u: self.theta(u) - target, lo, hi, xtol=1e-14, rtol=1e-14)
        return out.reshape(np.shape(t)) if np.ndim(t) else out[0]

    def describe(self) -> str:
        if self.family is Family.TABULATED:
            return f"table:{self.source or 'inline'}"
        return f"{self.family.value}:{self.param:g}"


@dataclass(frozen=True)
class NonConstant:
    """tau/kappa is not constant on the scanned domain."""
    spread: float


@dataclass(frozen=True)
class IntrinsicPair:
    """Intrinsic equations kappa(s), tau(s) with the causal sign epsilon = g(N, N)."""
    kappa: ScalarFunction
    tau: ScalarFunction
    epsilon: int

    def __post_init__(self):
        if self.epsilon not in (-1, 1):
            raise InadmissibleFunctionError("epsilon must be +1 or -1", {'epsilon': self.epsilon})
        lo = max(self.kappa.domain[0], self.tau.domain[0])
        hi = min(self.kappa.domain[1], self.tau.domain[1])
        if not lo < hi:
            raise InadmissibleFunctionError("kappa and tau domains do not overlap")
        object.__setattr__(self, '_domain', (lo, hi))
        if not self._kappa_positive():
            raise InadmissibleFunctionError(
                f"Curvature {self.kappa.describe()} is not positive on its domain"
            )

    @property
    def domain(self) -> Tuple[float, float]:
        return self._domain

    def _kappa_positive(self) -> bool:
        k = self.kappa
        if k.family in (Family.CONSTANT, Family.RATIONAL_MINUS, Family.RATIONAL_PLUS):
            return k.param > 0
        if k.family is Family.RECIPROCAL:
            return k.param * k.domain[1] > 0
        return bool(np.all(k.values > 0))

    def contains(self, s):
        return np.asarray(self.kappa.contains(s)) & np.asarray(self.tau.contains(s))

    def sample_interval(self) -> Tuple[float, float]:
        k_lo, k_hi = self.kappa.sample_interval()
        t_lo, t_hi = self.tau.sample_interval()
        return max(k_lo, t_lo), min(k_hi, t_hi)


def theta_of_s(kappa: ScalarFunction, s):
    return kappa.theta(s)


def s_of_theta(kappa: ScalarFunction, theta):
    return kappa.s_of_theta(theta)


def ratio(pair: IntrinsicPair, points: Optional[int] = None,
          tol: Optional[float] = None) -> Union[float, NonConstant]:
    """Slope ratio m = tau/kappa, or NonConstant when it varies over the domain."""
    cfg = get_config()
    points = points or cfg.RATIO_SCAN_POINTS
    tol = cfg.RATIO_TOL if tol is None else tol
    lo, hi = pair.sample_interval()
    s = np.linspace(lo, hi, points)
    r = pair.tau(s) / pair.kappa(s)
    spread = float(np.max(np.abs(r - r[0])))
    if spread > tol * max(1.0, abs(r[0])):
        logger.debug("tau/kappa spread %.3e over [%g, %g]", spread, lo, hi)
        return NonConstant(spread)
    return float(r[0])


def parse_descriptor(text: str) -> ScalarFunction:
    """Parse 'family:param' (const:3, rminus:2, rplus:0.5, recip:2, table:path.csv)."""
    if not isinstance(text, str) or ':' not in text:
        raise InadmissibleFunctionError(f"Descriptor '{text}' is not of the form family:param")
    family, _, arg = text.partition(':')
    family = family.strip().lower()
    arg = arg.strip()
    if family == Family.TABULATED.value:
        return load_tabulated(arg)
    try:
        value = float(arg)
    except ValueError:
        raise InadmissibleFunctionError(f"Descriptor parameter '{arg}' is not a number")
    builders = {
        Family.CONSTANT.value: ScalarFunction.constant,
        Family.RATIONAL_MINUS.value: ScalarFunction.rational_minus,
        Family.RATIONAL_PLUS.value: ScalarFunction.rational_plus,
        Family.RECIPROCAL.value: lambda h: ScalarFunction.reciprocal(
            h, domain=(0.0, math.inf) if h > 0 else (-math.inf, 0.0)
        ),
    }
    if family not in builders:
        raise InadmissibleFunctionError(
            f"Unknown family '{family}'", {'known': sorted(f.value for f in Family)}
        )
    return builders[family](value)


def load_tabulated(path: str) -> ScalarFunction:
    """Load a two-column (s, value) CSV; the header row is optional."""
    try:
        df = pd.read_csv(path, header=None)
    except (OSError, pd.errors.ParserError, pd.errors.EmptyDataError) as e:
        raise SamplesFormatError(f"Cannot read tabulated function {path}: {e}")
    if df.shape[1] != 2:
        raise SamplesFormatError(f"{path}: expected 2 columns, found {df.shape[1]}")
    numeric = df.apply(pd.to_numeric, errors='coerce')
    if numeric.iloc[0].isna().any():
        numeric = numeric.iloc[1:]
    if numeric.isna().any().any() or len(numeric) < 2:
        raise SamplesFormatError(f"{path}: non-numeric or too few rows")
    return ScalarFunction.tabulated(numeric.iloc[:, 0].to_numpy(), numeric.iloc[:, 1].to_numpy(), source=path)
