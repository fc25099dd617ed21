"""Numerical verification toolkit for sharp weighted functional inequalities
(Gagliardo-Nirenberg, Sobolev, p-log-Sobolev, Faber-Krahn, isoperimetric) on
open convex cones with homogeneous weights.

Submodules
----------
specfun      log-Gamma, Gamma and Euler Beta in log space
geometry     cones, homogeneous weights, spherical-radial cone quadrature
conditions   the joint three-weight concavity condition and concavity checks
constants    closed-form sharp constants and optimizer formulas
functionals  test-function families, weighted norms, ratio/deficit evaluators
cli          batch verification front-end
"""

from .geometry import (Cone, Weight, QuadratureGrid, monomial_weight,
                       constant_weight, sphere_cone_quadrature,
                       cone_integral, ball_cone_weight_mass, omega_SE)
from .constants import (Params, Mode, derive_params, compute_LM, theta,
                        c_klmc0, sharp_gn_constant, log_sobolev_constant,
                        faber_krahn_constant, isoperimetric_constant,
                        constants_bundle, ConstantsBundle)
from .conditions import (check_condition_C, check_tr_det,
                         check_p_concavity, check_log_concavity,
                         monomial_condition_constants)
from .functionals import (PowerExtremal, CompactExtremal, Gaussian, Bump,
                          Perturbed, gn_ratio, log_sobolev_deficit,
                          faber_krahn_ratio, isoperimetric_ratio, rescale)

__version__ = "0.1.0"

__all__ = [
    "Cone", "Weight", "QuadratureGrid", "monomial_weight",
    "constant_weight", "sphere_cone_quadrature", "cone_integral",
    "ball_cone_weight_mass", "omega_SE",
    "Params", "Mode", "derive_params", "compute_LM", "theta", "c_klmc0",
    "sharp_gn_constant", "log_sobolev_constant", "faber_krahn_constant",
    "isoperimetric_constant", "constants_bundle", "ConstantsBundle",
    "check_condition_C", "check_tr_det", "check_p_concavity",
    "check_log_concavity", "monomial_condition_constants",
    "PowerExtremal", "CompactExtremal", "Gaussian", "Bump", "Perturbed",
    "gn_ratio", "log_sobolev_deficit", "faber_krahn_ratio",
    "isoperimetric_ratio", "rescale",
]
