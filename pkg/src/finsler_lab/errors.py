"""Exception hierarchy.

Every error is a ``ValueError`` so callers that only care about "bad input or
bad point" can catch that; the subclasses say which precondition failed.
"""

from typing import Any


class FinslerLabError(ValueError):
    """Base class for all finsler-lab errors."""


class DomainError(FinslerLabError):
    """The evaluation point lies outside the domain where a quantity is smooth."""


class OutsideDomain(DomainError):
    """Null or non-smooth direction for the Lagrangian of a model."""


class DivisionNearZero(DomainError):
    """Jet division by a value indistinguishable from zero."""


class SqrtDomain(DomainError):
    """Jet square root or fractional power of a non-positive value."""


class NullDirection(DomainError):
    """|L| below the division threshold: the point is outside A0."""


class DegenerateHessian(DomainError):
    """|det g| below tolerance: the point is outside the admissible set A."""


class OrderExceeded(FinslerLabError):
    """A derivative was requested beyond the stored truncation order."""


class InvalidParameter(FinslerLabError):
    """A model or gas descriptor violates a structural condition."""


class SeedNotTimelike(FinslerLabError):
    """The fiducial seed direction of a model is not timelike at x."""


class NotTimelike(FinslerLabError):
    """A direction that must be timelike is not."""


class ConeExit(FinslerLabError):
    """A fiber chart coordinate maps outside the timelike cone."""


class NodeOutsideCone(FinslerLabError):
    """A quadrature node maps outside the timelike cone."""


class NonHomogeneousIntegrand(FinslerLabError):
    """A fiber integrand is not positively 0-homogeneous in the velocity."""


class LeftAdmissibleDomain(FinslerLabError):
    """Geodesic integration left the admissible domain."""

    def __init__(self, message: str, last_state: Any) -> None:
        super().__init__(message)
        self.last_state = last_state


class StepUnderflow(FinslerLabError):
    """Adaptive step size fell below the representable minimum."""


class ModelNotLorentzian(FinslerLabError):
    """A classical-geometry comparison was requested for a non-Lorentzian model."""


class StencilLeavesDomain(FinslerLabError):
    """A finite-difference stencil leaves the smoothness domain."""


class EmptyReport(FinslerLabError):
    """A report was requested with no results to emit."""
