"""Janossy densities of the sine kernel and gap-ratio statistics.

Two independent routes to J_1(0; [a1, a2]), a Nystrom Fredholm determinant and
a radial ODE solve, plus the spacing, joint and ratio densities derived from
the latter, a GUE Monte Carlo oracle and zeta-zero ratio statistics.
"""
__version__ = "0.1.0"

from ._backend import BACKEND
from .errors import (AccuracyError, ConvergenceError, DataIntegrityError, DomainError, FitError,
                     InsufficientStatisticsError, InvalidArgumentError, JanossyError, NumericError,
                     ParseError, QualityWarning, StiffnessError)
from .quadrature import QuadratureRule, gauss_legendre, integrate
from .kernel import kernel_K, kernel_Ktilde, phi, psi, sinc
from .nystrom import Interval, fredholm_det, fredholm_det_converged, fredholm_logdet
from .tw import RayProfile, integrate_ray, janossy, log_janossy
from .densities import (DensityTable, MomentSet, joint_density, nearest_neighbor_density, ratio_density,
                        ratio_moments, ratio_tilde_density, spacing_density, surmise_ratio)
from .mc import SpectrumSample, empirical_ratio_stats, sample_gue_spectrum
from .zeta import WindowStats, ZeroWindow, load_zeros, scaling_fit, unfold, window_moments
