"""Front tracking, Glimm and vanishing-viscosity tools for 1-D hyperbolic systems."""
from .errors import ConsLawError
from .hyperbolic_system import SystemModel, builtin_models, eigen_decompose, get_model
from .riemann import WaveFan, sample_fan, solve_riemann, wave_curve

__all__ = [
    "ConsLawError",
    "SystemModel",
    "WaveFan",
    "builtin_models",
    "eigen_decompose",
    "get_model",
    "sample_fan",
    "solve_riemann",
    "wave_curve",
]
__version__ = "0.1.0"
