"""
Exception hierarchy for lorhelix.
Every failure raised by the library carries a message, a details dict and
the exit code the command-line front end reports for it.
"""
from enum import Enum
from typing import Any, Dict, Optional


class HelixError(Exception):
    """Base error for all library failures."""
    exit_code = 1
    status_code = 400

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        self.message = message
        self.details = details or {}
        super().__init__(message)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'error': type(self).__name__,
            'message': self.message,
            'details': self.details,
            'status_code': self.status_code
        }


# Lorentzian algebra

class NonFiniteComponentError(HelixError):
    """A NaN or infinite component reached the vector algebra."""


class NullInputError(HelixError):
    """A null (or zero) vector was passed where no angle is defined."""


class MixedTimeOrientationError(HelixError):
    """Two timelike vectors lie in opposite time cones."""


# Intrinsic equations

class InadmissibleFunctionError(HelixError):
    """A curvature or torsion descriptor is invalid on its domain."""


class OutOfDomainError(HelixError):
    """An arclength value lies outside a function's domain."""


class OutOfRangeError(HelixError):
    """A theta value lies outside the range of theta(s)."""


# Frenet oracle and finite differences

class BadInitialFrameError(HelixError):
    """The initial frame is not pseudo-orthonormal."""


class FrameDriftError(HelixError):
    """The integrated frame left the pseudo-orthonormal set."""


class DegenerateCurvatureError(HelixError):
    """Curvature vanishes where a principal normal is required."""


class ZeroSlopeError(HelixError):
    """The slope ratio tau/kappa is zero where it divides."""


class GridError(HelixError):
    """An arclength or theta grid is malformed."""


# Helix synthesis

class RejectionReason(Enum):
    PLANAR_SPACELIKE_AXIS = (
        'there is no spacelike plane curve with a spacelike principal normal '
        'whose tangent makes a constant angle with a fixed spacelike line'
    )
    DEGENERATE_SLOPE = (
        'a spacelike principal normal with |tau/kappa| = 1 makes both the '
        'spacelike-axis and timelike-axis closed forms degenerate'
    )
    AXIS_MISMATCH = (
        'the requested axis character contradicts the characterization of '
        'this principal normal and slope'
    )


class RejectionError(HelixError):
    """classify_case refused an (epsilon, m) pair."""
    exit_code = 2
    status_code = 422

    def __init__(self, reason: RejectionReason, details: Optional[Dict[str, Any]] = None):
        self.reason = reason
        super().__init__(reason.value, {'reason': reason.name, **(details or {})})


class CaseConstraintViolatedError(HelixError):
    """A HelixSpec breaks the constraints of its case."""


class DegenerateFramesError(HelixError):
    """No usable frames to reconstruct an axis from."""


# Catalog

class UnknownEntryError(HelixError):
    """No catalog entry has the requested name."""


class OutOfValidityError(HelixError):
    """Catalog parameters or arguments lie outside the entry's validity region."""


# Exchange formats

class SamplesFormatError(HelixError):
    """A CSV, JSON or workbook curve file could not be parsed."""
