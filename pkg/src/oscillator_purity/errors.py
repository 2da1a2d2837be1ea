"""
Exceptions raised by the library. Value-domain problems are ValueErrors and
numerical failures of the quadrature oracle are RuntimeErrors, so callers can
catch them either by these classes or by the builtin ones.
"""


class OscillatorPurityError(Exception):
    """Base class for all library errors."""


class NonPositiveMass(OscillatorPurityError, ValueError):
    pass


class UnstablePotential(OscillatorPurityError, ValueError):
    """The rescaled stiffnesses violate 4*c1*c2 > c3**2."""


class DomainError(OscillatorPurityError, ValueError):
    """A parameter lies outside the domain of a formula, e.g. sin(theta) = 0."""


class ConstraintViolation(OscillatorPurityError, ValueError):
    """A principal index does not satisfy i + j + k + l + r = 2 * (n1 + n2)."""


class CapExceeded(OscillatorPurityError, ValueError):
    """The requested n1 + n2 is above the configured cap."""


class ConfigError(OscillatorPurityError, ValueError):
    pass


class GridTooNarrow(OscillatorPurityError, RuntimeError):
    """The state is not negligible at the edge of the quadrature grid."""


class NotConverged(OscillatorPurityError, RuntimeError):
    """Grid refinement changed the oracle purity by more than the tolerance."""
