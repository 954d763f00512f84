"""Exception types shared across the package."""


class ShapeError(ValueError):
    """Operands have incompatible lengths or live in different charts."""


class NotInteriorError(ValueError):
    """Point does not satisfy the (strict) chart domain inequality."""


class NotSymplecticError(ValueError):
    """Matrix does not satisfy the quaternionic Lorentz-unitarity identity."""


class NotPolarError(ValueError):
    """Hyperplane vector is not of positive signature."""


class DegenerateLocusError(ValueError):
    """Locus parameters are degenerate (e.g. coincident bisector points)."""


class DomainError(ValueError):
    """Point or parameter outside the admissible orbit-space domain."""


class SingularBoundaryError(ValueError):
    """Reduced ODE evaluated on a singular boundary stratum."""


class NoSingularStratumError(ValueError):
    """The requested case has no singular boundary stratum."""


class StepSizeUnderflow(RuntimeError):
    """Adaptive integrator could not meet the tolerance."""


class ExtrapolationError(RuntimeError):
    """Curve tail is not convergent enough to extrapolate an endpoint."""


class DegenerateOrbitError(RuntimeError):
    """Killing fields fail to span the expected orbit tangent space."""


class SingularPointError(RuntimeError):
    """Level-set gradient (numerically) vanishes at the evaluation point."""


class CertificateFailure(RuntimeError):
    """A foliation certificate check did not hold."""
