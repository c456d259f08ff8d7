"""Weighted spectral calculus on deformed coordinates.

A numpy/scipy library for the weighted Fourier transform with respect to a
deformation phi and weight omega, weighted fractional Laplacians, Hilfer
time-fractional operators, the generalized phi-Mellin transform,
Mittag-Leffler/Fox-H special functions, and the fundamental solution of the
generalized time-space fractional diffusion-wave equation evaluated by
three independent routes.
"""

from .geometry import (CATALOG, DeformedGrid, Diffeomorphism, SpatialWeight,
                       TemporalPair, build_grid, diffeomorphism_from_callables,
                       jacobian_det, make_diffeomorphism, make_spatial_weight,
                       make_temporal_pair)
from .transform import (GridFunction, SpectralField, forward, inverse, sample,
                        weighted_convolution, weighted_gradient, weighted_inner,
                        weighted_norm)
from .specfun import (ContourSpec, FoxHSpec, MellinBarnesResult, ValidityReport,
                      check_convergence, diffusion_kernel_spec, fox_h_1232,
                      gamma_complex, loggamma_complex, mellin_barnes,
                      mittag_leffler, mittag_leffler_neg_array)
from .fracops import (FractionalOrder, HilferOrder, fractional_laplacian_singular,
                      fractional_laplacian_spectral, generalized_laplace,
                      laplacian_constant, sobolev_norm, weighted_fractional_integral,
                      weighted_hilfer_derivative)
from .mellin import MellinStrip, mellin_forward, mellin_forward_line, mellin_inverse
from .uncertainty import (DispersionReport, apply_momentum, apply_position,
                          commutator_residual, dispersion_report)
from .solver import (GreenEvaluation, HilferProblem, delta_surrogate, green_foxh_route,
                     green_hat, green_mellin_route, green_spectral_route,
                     solve_cauchy, spectral_error_estimate)
from .profiles import pullback, u_profile

__version__ = "0.1.0"
