"""Exception hierarchy shared by all engines."""


class GeoAmpError(Exception):
    """Base class for every error raised by :mod:`geoamp`."""


class RegimeError(GeoAmpError, ValueError):
    """Parameters leave the imaginary-frequency regime ``Y**2 > X*Z, Z > 0``.

    ``s`` is the loop coordinate of the offending sample when the error
    comes from loop validation, otherwise ``None``.
    """

    def __init__(self, message, s=None):
        super().__init__(message)
        self.s = s


class SingularPairingError(GeoAmpError, ValueError):
    """A Gaussian pairing has a vanishing or divergent exponent."""


class QuadratureError(GeoAmpError, RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error


class GaugeError(GeoAmpError, RuntimeError):
    """Adjacent snapshot states are not smoothly connected."""


class IntegrationError(GeoAmpError, RuntimeError):
    """The ODE integrator failed; ``t`` is the last successful time."""

    def __init__(self, message, t=None):
        super().__init__(message)
        self.t = t


class ExtractionError(GeoAmpError, RuntimeError):
    """The evolved state does not yield a real positive metric norm."""
