"""Periodic traveling waves of the CDG-SK equation and their spectral stability.

The CDG-SK equation u_t + u_xxxxx + 15 (u u_xx + u^3)_x = 0 supports a
branch of small-amplitude 2*pi/k-periodic traveling waves.  This package
constructs the branch (closed-form expansion and Newton continuation),
runs the Bloch-Floquet stability scan of the linearization, reproduces
the rank-3 reduced model near the spectral origin, and cross-checks with
direct time evolution.
"""

from .fourier import FourierSeries, differentiate, multiply, inner_product
from .profile import (WaveProfile, asymptotic_profile, residual, newton_solve,
                      newton_continuation, solve_profile, fit_speed_coefficients,
                      speed_expansion, NonConvergence, SingularJacobian)
from .bloch import (BlochMatrix, SpectrumSlice, StabilityReport, flat_symbol,
                    assemble, eigenvalues, scan, collision_analysis,
                    make_xi_grid, EigenFailure)
from .reduced import (ProjectorPair, ReducedModel, projector, flat_projector,
                      transported_basis, reduced_matrix, characteristic_cubic,
                      paper_reduced_matrix, paper_characteristic_cubic,
                      paper_q_coefficients, discriminant, paper_discriminant,
                      appendix_derivative_checks, spectral_gap_radius,
                      WrongRank, QuadratureStall, NotAPerturbation)
from .evolve import (EvolutionState, Stepper, step, integrate,
                     perturbation_growth, BlowUp)

__version__ = "0.1.0"
