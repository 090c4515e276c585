"""Exception types raised across the package."""


class BiquaternionError(Exception):
    """Base class for all errors raised by bqverify."""


class DomainError(BiquaternionError, ValueError):
    """An argument lies outside the domain of an operation."""


class NullElementError(BiquaternionError, ZeroDivisionError):
    """Attempt to invert a biquaternion with vanishing semi-norm."""


class SingularPointError(BiquaternionError, ValueError):
    """A field was evaluated at (or too close to) one of its singular points."""


class NullFieldError(BiquaternionError, ValueError):
    """The field has F.F = 0 and admits no duality/rotor decomposition."""


class DegenerateAxisError(BiquaternionError, ValueError):
    """The field direction is antipodal to the reference axis (f.u = -1)."""


class NotOnOrbitError(BiquaternionError, ValueError):
    """Two rotors are not related by a gauge factor exp(c u)."""


class OffShellError(BiquaternionError, ValueError):
    """A momentum does not satisfy E^2 = p^2 + m^2."""


class MissingDerivativeError(BiquaternionError, NotImplementedError):
    """A field does not provide the derivatives an operation needs."""


class SearchExhaustedError(BiquaternionError, RuntimeError):
    """No time-reversal candidate maps solutions onto solutions."""
