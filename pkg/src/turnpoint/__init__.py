"""Simple turning point of ``eps^2 x'' + mu(t) x = 0``.

Airy functions, formal slow-manifold series, Liouville-Green propagation,
blowup charts, a uniform approximation of the unstable solution across the
turning point, Bohr-Sommerfeld eigenvalues and a high-order reference
integrator for checking all of them.
"""

__version__ = "0.1.0"

from ._backend import BACKEND
from .airy import AiryQuad, airy_eval, airy_osc, airy_scaled
from .approximant import (Direction2, UniformApproximant, approximant_error, direction_error,
                          phase_fit, uniform_wu_grid, uniform_wu_solution, wu_direction)
from .blowup import ChartPoint, a1, chart1_hu, desing_field, to_physical, transition, xc_yc
from .eigen import EigenResult, bs_energies, eigen_table, reference_energies
from .elliptic import diagonalize, lg_propagate
from .hyperbolic import h_u, wu_state
from .problem import ProblemSpec, action, load_problem, normalize, turning_points
from .reference import LogScaledState, integrate, rate_fit, riccati_reference, wu_reference
from .series import (b0_coeffs, ell_riccati_coeffs, hyp_riccati_coeffs, nu_series)

__all__ = [
    "BACKEND",
    "AiryQuad",
    "airy_eval",
    "airy_osc",
    "airy_scaled",
    "Direction2",
    "UniformApproximant",
    "approximant_error",
    "direction_error",
    "phase_fit",
    "uniform_wu_grid",
    "uniform_wu_solution",
    "wu_direction",
    "ChartPoint",
    "a1",
    "chart1_hu",
    "desing_field",
    "to_physical",
    "transition",
    "xc_yc",
    "EigenResult",
    "bs_energies",
    "eigen_table",
    "reference_energies",
    "diagonalize",
    "lg_propagate",
    "h_u",
    "wu_state",
    "ProblemSpec",
    "action",
    "load_problem",
    "normalize",
    "turning_points",
    "LogScaledState",
    "integrate",
    "rate_fit",
    "riccati_reference",
    "wu_reference",
    "b0_coeffs",
    "ell_riccati_coeffs",
    "hyp_riccati_coeffs",
    "nu_series",
]
