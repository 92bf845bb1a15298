"""Numerical laboratory for the 2D attractive fractional Gross-Pitaevskii
equation with a trapping potential: fractional free ground states,
normalized local-minimum and mountain-pass solutions on the mass sphere,
and the identities, thresholds, and order-to-1 asymptotics tying them
together."""

__version__ = "0.1.0"

from .errors import (
    ConfigurationError,
    ConvergenceError,
    FgpeError,
    GridMismatchError,
    NumericalConsistencyError,
    ResolutionError,
)
from .grid import (
    FractionalSymbol,
    Grid2D,
    ScalarField,
    frac_laplacian,
    frac_seminorm_sq,
    integral,
    l2_norm,
    load_field,
    make_grid,
    make_symbol,
    mass,
    save_field,
    spectral_mass,
)
from .functionals import (
    BoundaryGap,
    EnergyBreakdown,
    NONEXISTENCE_RHS,
    Potential,
    ProblemParams,
    TS_UNDEFINED_AT_S1,
    boundary_gap,
    energy,
    gn_constant,
    gn_quotient,
    hardy_constant,
    kinetic_ball_radius,
    lambda1_estimate,
    modulus_seminorm_check,
    nonexistence_gap,
    schwarz_rearrange,
    virial,
)
from .groundstate import GroundStateResult, n_star_curve, solve_ground_state
from .solvers import (
    MountainPassBracket,
    SolveReport,
    default_trap_init,
    dilate_field,
    dilation_path_profile,
    mountain_pass_bracket,
    seeded_initial_field,
    solve_local_min,
    solve_mountain_pass,
)
from .asymptotics import (
    SweepRecord,
    SweepResult,
    multiplier_limit_check,
    rescaled_profile,
    sweep,
)
