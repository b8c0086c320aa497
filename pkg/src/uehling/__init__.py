"""Uehling vacuum-polarisation potential: several independent evaluation routes and cross-checks."""

from ._kernels import BACKEND
from .errors import ConvergenceError, DomainError, IntegrandError
from .odecheck import (
    OdeTrajectory,
    VerificationReport,
    consistency_report,
    ode_residual,
    ode_rhs,
    paper_bracket_F,
    paper_bracket_F_prime,
    solve_ivp,
)
from .potential import (
    ALPHA_DEFAULT,
    PhysicalParams,
    PotentialSample,
    Route,
    UnitSystem,
    convert_length,
    interaction_energy_atomic,
    potential_scale,
    total_potential,
    uehling_closed_ki024,
    uehling_closed_reduced,
    uehling_derivative_integral,
    uehling_integral,
    uehling_paper_constant_coeff,
)
from .quadrature import AccuracyConfig, QuadratureResult, integrate_decaying
from .specfun import SpecFunResult, bickley_ki, k0, k1, k_nu_derivative, ki_recurrence_next

__version__ = "0.1.0"
