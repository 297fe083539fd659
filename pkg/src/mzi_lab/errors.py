"""Exception hierarchy.

``DomainError`` subclasses mark inputs that are well formed but land on a
singular point of the model; the CLI maps them to exit status 2.
"""


class MziLabError(Exception):
    """Base class for all package errors."""


class DomainError(MziLabError, ValueError):
    """Well-formed input that hits a singularity of the model."""


class SingularTargetError(DomainError):
    """Designer target with z == y (pole of z/(y - z))."""


class PoleError(DomainError):
    """Delay ratio requested at |xbar| == v*tau, where A1 must vanish."""


class DarkPortError(DomainError):
    """A1 + A2 == 0: the port receives no broad-packet intensity."""


class VanishingNormError(DomainError):
    """Conditional quantity requested for a port with (near) zero mass."""


class DegeneratePreselectionError(DomainError):
    """Pre-selected state with a zero component in the path basis."""


class InvalidPostselectionError(MziLabError, ValueError):
    """Post-selected states that are not orthonormal."""


class DarkBracketError(DomainError):
    """Peak search over a bracket where the density is numerically zero."""
