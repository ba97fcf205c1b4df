"""
Patchfold Errors
Exception hierarchy shared by the geometry layer, the unfolders and the CLI.

InvalidInput subclasses mean the caller handed us something we refuse to
work with (exit code 2). InvariantViolation subclasses mean a geometric fact
that must hold on valid input did not hold (exit code 3): either a bug or a
tolerance breach, never a user mistake.
"""
from typing import Dict, Optional


class PatchfoldError(Exception):
    """Root of every error raised by patchfold."""

    def __init__(self, message: str = '', details: Optional[Dict] = None):
        super().__init__(message)
        self.details = dict(details or {})


# =============================================================================
# MALFORMED INPUT
# =============================================================================

class InvalidInput(PatchfoldError, ValueError):
    pass


class NonFiniteInput(InvalidInput):
    pass


class NonConvexInput(InvalidInput):
    pass


class QuadLateralFace(InvalidInput):
    """An A-edge is parallel to a B-edge, so a lateral face is a quadrilateral."""


class DegenerateHinge(InvalidInput):
    pass


class NonPlanarFace(InvalidInput):
    pass


class DegenerateAngle(InvalidInput):
    pass


class DegenerateHull(InvalidInput):
    pass


class NotADisk(InvalidInput):
    pass


class ObtuseFace(InvalidInput):
    pass


class ExactlyHorizontalNormal(InvalidInput):
    """A lateral face is vertical, so it is neither an up-face nor a down-face."""


# =============================================================================
# BROKEN GEOMETRIC GUARANTEES
# =============================================================================

class InvariantViolation(PatchfoldError, RuntimeError):
    pass


class RayCrossing(InvariantViolation):
    pass


class NoSafeFlip(InvariantViolation):
    pass


class ContainmentFailure(InvariantViolation):
    pass


class OverlapDetected(InvariantViolation):
    pass


class HullCheckFailed(InvariantViolation):
    pass


# =============================================================================
# RESOURCE / USAGE LIMITS
# =============================================================================

class CombinatorialExplosion(PatchfoldError):
    pass


class VertexNotSurrounded(PatchfoldError):
    """Faces around a vertex are split across layout trees; carries partial sums in details."""


class GenerationExhausted(PatchfoldError):
    pass
