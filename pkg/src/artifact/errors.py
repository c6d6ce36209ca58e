"""Exception and warning types raised across the package."""


class ArtifactError(Exception):
    """Base class for all package errors."""


class PoleError(ArtifactError):
    """A parameter sits on a pole of a Gamma factor."""


class DomainError(ArtifactError):
    """Argument outside the domain of a special function."""


class IntegrabilityError(ArtifactError):
    """Integral is not absolutely convergent for the requested parameters."""


class DegreeOverflow(ArtifactError):
    """Requested band limit exceeds what the quadrature integrates exactly."""


class ConstructionError(ArtifactError):
    """A body could not be built because its defining function is not positive."""


class NotNonMember(ArtifactError):
    """A counterexample was requested from a body that is not a certified non-member."""


class EpsilonExhausted(ArtifactError):
    """No perturbation size in the schedule produced a valid body."""


class BisectionFailure(ArtifactError):
    """Radial bisection failed, which signals an invalid star body."""


class ConvergenceWarning(UserWarning):
    """Adaptive quadrature did not reach its target accuracy."""


class ConvexityWarning(UserWarning):
    """Sampled midpoint convexity test failed."""
