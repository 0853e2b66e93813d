"""Exception types shared across the package."""


class AlgebraError(Exception):
    """Base class for algebra-level failures."""


class DivergenceError(AlgebraError):
    """A series evaluation did not converge within the term budget."""


class SingularElementError(AlgebraError):
    """Multivector has no inverse (matrix representation is singular)."""


class RepresentationError(AlgebraError):
    """4x4 matrix does not lie in the image of the real algebra."""


class RotorError(AlgebraError):
    """Element violates the rotor constraint R * reversion(R) = 1."""


class SingularSpinorError(AlgebraError):
    """Spinor with psi * reversion(psi) = 0 (Majorana-like); not decomposable."""


class MassShellError(ValueError):
    """Momentum does not satisfy p^2 = m^2 within tolerance."""


class ConfigError(ValueError):
    """Scenario configuration is malformed; `field` names the offending key."""

    def __init__(self, message, field=None):
        super().__init__(message)
        self.field = field


class SimulationNumericsError(ArithmeticError):
    """Non-finite value produced during integration; `tau` locates the failure."""

    def __init__(self, message, tau=None):
        super().__init__(message)
        self.tau = tau


class InsufficientSpanError(ValueError):
    """Trajectory does not cover the span required by the requested analysis."""


class InsufficientDataError(ValueError):
    """Too few samples for the requested finite-difference evaluation."""
