"""Exception hierarchy for balayage-kit.

Every failure mode named by an operation contract gets its own class so
callers (and the CLI) can map it to an exit code without string matching.
"""

from __future__ import annotations


class BalayageKitError(Exception):
    """Base class for all library errors."""


class SingularityError(BalayageKitError):
    """Kernel evaluated at its pole (z = t, or z = 0 with genus >= 1)."""


class BranchError(BalayageKitError):
    """Point lies on the branch cut (positive real axis) of the slit plane."""


class GeometryError(BalayageKitError):
    """Point outside the open angle, or segment not on a boundary ray."""


class OriginAtomError(BalayageKitError):
    """Atom at the origin where a genus >= 1 sweep is requested."""


class RegimeError(BalayageKitError):
    """Neither bound regime |t| <= a|z| nor a|t| >= |z| holds."""


class ExponentMismatchError(BalayageKitError):
    """(beta - alpha) * p / pi is not a nonnegative integer."""


class QuadratureError(BalayageKitError):
    """Adaptive integration did not converge to tolerance."""


class OscillationError(QuadratureError):
    """Principal-value excision sequence failed to stabilize."""


class InsufficientGridError(BalayageKitError):
    """Grid too short or too narrow for the requested fit or verdict."""


class SupportConditionError(BalayageKitError):
    """Charge support violates a stated precondition (inner gap, T/a ball)."""


class IntegrabilityError(BalayageKitError):
    """Integrand fails the integrability precondition at the origin."""


class ParseError(BalayageKitError):
    """Malformed input file; message carries the offending row."""
