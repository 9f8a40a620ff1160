"""Half-line space-fractional diffusion: the self-similar fundamental
solution, convolution solvers built from it, an explicit Grunwald scheme,
and numerical checks of their properties."""

from .errors import (ConfigError, ConvergenceError, DomainError, FraclineError, ResolutionWarning,
                     SmoothnessWarning, StabilityError, UsageError)
from .fdscheme import SchemeConfig, cross_validate, grunwald_weights, run, step
from .fracops import GridFunction, caputo, caputo_deriv_x, frac_integral
from .kernel import KernelModel, kernel_eval, kernel_model, mass, normalization_a0
from .solvers import InitialData, SolutionField, dirichlet_solve, duhamel_solve, neumann_solve
from .specfun import FractionalOrder, MLParams, ml_eval, phi

__version__ = "0.1.0"

__all__ = [
    "ConfigError", "ConvergenceError", "DomainError", "FraclineError", "ResolutionWarning",
    "SmoothnessWarning", "StabilityError", "UsageError",
    "SchemeConfig", "cross_validate", "grunwald_weights", "run", "step",
    "GridFunction", "caputo", "caputo_deriv_x", "frac_integral",
    "KernelModel", "kernel_eval", "kernel_model", "mass", "normalization_a0",
    "InitialData", "SolutionField", "dirichlet_solve", "duhamel_solve", "neumann_solve",
    "FractionalOrder", "MLParams", "ml_eval", "phi",
]
