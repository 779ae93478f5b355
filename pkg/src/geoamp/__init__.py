"""Geometric amplitude of the generalized harmonic oscillator with imaginary frequency."""

__version__ = "0.1.0"

from .errors import (ExtractionError, GaugeError, GeoAmpError, IntegrationError,
                     QuadratureError, RegimeError, SingularPairingError)
from .params import (ParameterLoop, ParameterPoint, energy, make_preset_loop, omega,
                     validate_loop)
from .spectral import (MetricOperator, PolyGaussianState, gram_matrix, inner_eta,
                       snapshot_state)
from .amplitude import (dynamical_integral, evolved_gamma_closed_form,
                        gamma_closed_form, gamma_connection)
from .dynamics import convergence_study, evolve, extract_gamma
from .cubic import cubic_operator_check

__all__ = [
    "ExtractionError", "GaugeError", "GeoAmpError", "IntegrationError",
    "QuadratureError", "RegimeError", "SingularPairingError",
    "ParameterLoop", "ParameterPoint", "energy", "make_preset_loop", "omega",
    "validate_loop", "MetricOperator", "PolyGaussianState", "gram_matrix",
    "inner_eta", "snapshot_state", "dynamical_integral", "evolved_gamma_closed_form",
    "gamma_closed_form", "gamma_connection", "convergence_study", "evolve",
    "extract_gamma", "cubic_operator_check", "__version__",
]
