"""Numerical laboratory for the Hardy operator -Laplace + beta/|x|^2 with a
boundary-point singularity on half-space-like domains.

Subsystems
----------
``params``          characteristic exponents and the Dirac weight c_beta
``fields``          closed-form kernels, cutoffs, test functions, operators
``supersolutions``  barrier families with certified parameter recipes
``quadrature``      graded midpoint rules for the singular weighted measures
``identities``      distributional-identity, trace and Hardy-quotient checks
``grid``/``solver`` half-box finite differences for the regularized operator
``experiments``     Dirac-coefficient extraction and boundary-data studies
``cli``             scenario runner emitting reproducible CSV artifacts

Environment flags: ``HARDY_NUMBA`` selects the jit/numpy kernel backend,
``HARDY_THREADS`` caps the CLI worker pool, ``HARDY_TIMING=0`` zeroes the CSV
wall-time column for byte-reproducible output.
"""

from ._kernels import backend_name
from .errors import (
    CollarUnresolved,
    ConfigInvalid,
    DegenerateRegion,
    DegenerateTestFunction,
    EvalAtSingularity,
    HardyLabError,
    LogBranchOutOfRange,
    MonotonicityViolated,
    NonFiniteIntegrand,
    NotPositiveDefinite,
    ParameterBelowCritical,
    RecipeDivergent,
    SolverDiverged,
    ZeroDenominator,
)
from .params import HardyParams, hardy_symbol, make_params, sphere_area
from .fields import (
    apply_L_beta,
    apply_L_beta_star,
    cutoff_eta0,
    cutoff_eta_n,
    cutoff_eta_r0,
    lambda_fund,
    lambda_small,
    lstar_radial,
)
from .supersolutions import (
    SupersolutionParams,
    choose_V_params,
    choose_W_params,
    supersolution_V,
    supersolution_V_residual,
    supersolution_W,
    supersolution_W_residual,
)
from .quadrature import QuadratureRule, build_rule, integrate, integrate_gamma, integrate_omega_beta
from .identities import (
    IdentityReport,
    b_N_constant,
    c_beta_surface,
    hardy_rayleigh,
    surface_flux_density,
    trace_constant,
    verify_fundamental_identity,
    verify_trace,
)
from .grid import DiscreteField, HalfBoxGrid, field_from_function, load_field, save_field
from .solver import (
    SolveConfig,
    assemble,
    dual_solve,
    epsilon_sweep,
    manufactured_errors,
    residual_identity_regularized,
    solve_regularized,
)
from .experiments import (
    blowup_experiment,
    extract_k,
    gamma_truncation_sweep,
    lambda_omega_construction,
    poisson_extension,
    verify_identity_g,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
