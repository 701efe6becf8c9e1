"""
Lorentzian vector algebra of Minkowski 3-space.

The metric has signature (-,+,+): e1 is the timelike basis vector, e2 and
e3 are spacelike. Every function accepts a LorentzVector or anything numpy
can turn into an array whose last axis has length 3, so batches of vectors
broadcast.
"""
import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

import numpy as np

from config import get_config
from errors import MixedTimeOrientationError, NonFiniteComponentError, NullInputError

logger = logging.getLogger(__name__)

SIGNATURE = np.array([-1.0, 1.0, 1.0])


@dataclass(frozen=True)
class LorentzVector:
    """A vector of E^3_1 in the standard frame."""
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        for name in ('x1', 'x2', 'x3'):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise NonFiniteComponentError(
                    f"Component {name} is not finite", {name: value}
                )
            object.__setattr__(self, name, value)

    @classmethod
    def from_array(cls, values) -> 'LorentzVector':
        arr = np.asarray(values, dtype=float)
        if arr.shape != (3,):
            raise ValueError(f"Expected 3 components, got shape {arr.shape}")
        return cls(*arr)

    def __array__(self, dtype=None, copy=None):
        return np.array([self.x1, self.x2, self.x3], dtype=dtype or float)

    def __iter__(self):
        return iter((self.x1, self.x2, self.x3))

    def __add__(self, other):
        return LorentzVector.from_array(np.asarray(self) + np.asarray(other))

    def __sub__(self, other):
        return LorentzVector.from_array(np.asarray(self) - np.asarray(other))

    def __mul__(self, scalar: float):
        return LorentzVector.from_array(np.asarray(self) * float(scalar))

    __rmul__ = __mul__

    def __neg__(self):
        return LorentzVector(-self.x1, -self.x2, -self.x3)

    def is_zero(self) -> bool:
        return self.x1 == 0.0 and self.x2 == 0.0 and self.x3 == 0.0

    def to_list(self):
        return [self.x1, self.x2, self.x3]


E1 = LorentzVector(1.0, 0.0, 0.0)
E2 = LorentzVector(0.0, 1.0, 0.0)
E3 = LorentzVector(0.0, 0.0, 1.0)

VectorLike = Union[LorentzVector, np.ndarray, list, tuple]


class Causal(Enum):
    SPACELIKE = 'spacelike'
    TIMELIKE = 'timelike'
    NULL = 'null'


@dataclass(frozen=True)
class CausalCharacter:
    tag: Causal
    q: float


class AngleCase(Enum):
    SPACELIKE_SPAN = 'spacelike-span'
    TIMELIKE_SPAN_SPACELIKE_PAIR = 'timelike-span-spacelike-pair'
    SPACELIKE_TIMELIKE_PAIR = 'spacelike-timelike-pair'
    TIMELIKE_PAIR = 'timelike-pair'


@dataclass(frozen=True)
class LorentzAngle:
    phi: float
    case: AngleCase


def _components(v: VectorLike) -> np.ndarray:
    arr = np.asarray(v, dtype=float)
    if arr.shape[-1:] != (3,):
        raise ValueError(f"Expected a trailing axis of length 3, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise NonFiniteComponentError("Vector components must be finite")
    return arr


def _scalar_or_array(value):
    return float(value) if np.ndim(value) == 0 else value


def _wrap(result: np.ndarray, *inputs):
    if result.ndim == 1 and all(np.ndim(np.asarray(v)) == 1 for v in inputs):
        return LorentzVector.from_array(result)
    return result


def _causal_tol(tol: Optional[float]) -> float:
    return get_config().CAUSAL_TOL if tol is None else tol


def metric(u: VectorLike, v: VectorLike):
    """g(u, v) = -u1 v1 + u2 v2 + u3 v3."""
    return _scalar_or_array(np.sum(SIGNATURE * _components(u) * _components(v), axis=-1))


def quadratic(v: VectorLike):
    """The classifying quadratic form g(v, v)."""
    return metric(v, v)


def pseudo_norm(v: VectorLike):
    return _scalar_or_array(np.sqrt(np.abs(quadratic(v))))


def lorentz_cross(u: VectorLike, v: VectorLike):
    """Lorentzian vector product: the determinant with first row (i, -j, -k)."""
    a = _components(u)
    b = _components(v)
    result = np.stack([
        a[..., 1] * b[..., 2] - a[..., 2] * b[..., 1],
        a[..., 0] * b[..., 2] - a[..., 2] * b[..., 0],
        -(a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]),
    ], axis=-1)
    return _wrap(result, u, v)


def gram_determinant(u: VectorLike, v: VectorLike) -> float:
    """g(u,u) g(v,v) - g(u,v)^2; negative exactly when span(u, v) is timelike."""
    return quadratic(u) * quadratic(v) - metric(u, v) ** 2


def causal_character(v: VectorLike, tol: Optional[float] = None) -> CausalCharacter:
    tol = _causal_tol(tol)
    if tol <= 0:
        raise ValueError("Causal tolerance must be positive")
    arr = _components(v)
    q = float(quadratic(arr))
    if not np.any(arr):
        return CausalCharacter(Causal.SPACELIKE, q)
    if q > tol:
        return CausalCharacter(Causal.SPACELIKE, q)
    if q < -tol:
        return CausalCharacter(Causal.TIMELIKE, q)
    return CausalCharacter(Causal.NULL, q)


def lorentz_angle(x: VectorLike, y: VectorLike, tol: Optional[float] = None) -> LorentzAngle:
    """
    Lorentzian angle between two non-null vectors.

    Two spacelike vectors are compared with arccos when they span a spacelike
    plane and with arccosh when they span a timelike one; the span is
    timelike iff their Lorentzian cross product is spacelike. A spacelike and
    a timelike vector use arcsinh, two timelike vectors in the same time cone
    use arccosh of -g/(|x||y|).
    """
    tol = _causal_tol(tol)
    a = _components(x)
    b = _components(y)
    characters = []
    for vec in (a, b):
        if not np.any(vec):
            raise NullInputError("The zero vector has no Lorentzian angle")
        character = causal_character(vec, tol)
        if character.tag is Causal.NULL:
            raise NullInputError(
                "Null vectors have no Lorentzian angle", {'q': character.q}
            )
        characters.append(character.tag)

    g = float(metric(a, b))
    norms = float(pseudo_norm(a)) * float(pseudo_norm(b))
    ratio = abs(g) / norms

    if characters[0] is Causal.SPACELIKE and characters[1] is Causal.SPACELIKE:
        normal = lorentz_cross(a, b)
        if quadratic(normal) > tol * norms ** 2:
            return LorentzAngle(math.acosh(max(ratio, 1.0)), AngleCase.TIMELIKE_SPAN_SPACELIKE_PAIR)
        return LorentzAngle(math.acos(min(ratio, 1.0)), AngleCase.SPACELIKE_SPAN)

    if characters[0] is Causal.TIMELIKE and characters[1] is Causal.TIMELIKE:
        if np.sign(a[0]) != np.sign(b[0]):
            raise MixedTimeOrientationError(
                "Timelike vectors lie in opposite time cones",
                {'x1': float(a[0]), 'y1': float(b[0])}
            )
        # same-cone pairs have g <= -|x||y| under (-,+,+)
        return LorentzAngle(math.acosh(max(-g / norms, 1.0)), AngleCase.TIMELIKE_PAIR)

    return LorentzAngle(math.asinh(ratio), AngleCase.SPACELIKE_TIMELIKE_PAIR)
