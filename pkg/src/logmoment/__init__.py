"""Moment problem for symmetric log-concave functions, with sharp
Khintchine-type constants for uniform distributions on lq-balls.

The package solves the truncated moment problem on the piecewise log-affine
extremal families (unique recovery of a function from finitely many power
moments), computes sharp envelopes for the next moment, evaluates the closed
forms behind the Khintchine constants, and ships the numerical verification
oracles used to check every inequality from an independent direction.
"""

from .chebyshev import EnvelopeOrientation, SignChangeReport, parity_rule, sign_changes
from .core import (
    CONSTANT_ONE,
    POINT_INDICATOR,
    PotentialSpec,
    Sign,
    SimpleClass,
    SimpleLogConcaveFn,
    canonicalize,
    distance,
    embed,
    eval_fn,
    eval_grid,
    fn_equal,
    fn_from_json,
    fn_to_json,
    jump_form,
    potential_from_json,
    potential_to_json,
    segments,
    support_bound,
)
from .envelope import (
    EnvelopeGridRow,
    EnvelopeResult,
    body_contains,
    envelope,
    envelope_grid,
    grid_csv_lines,
)
from .errors import (
    Diverges,
    DomainError,
    GridTooCoarse,
    IllConditioned,
    Infeasible,
    LogMomentError,
    NonConvergence,
    NotEmbeddable,
    UnresolvedBand,
)
from .extreal import INF
from .inverse import (
    Feasibility,
    FeasibilityReport,
    SolveReport,
    SolveStatus,
    SolverConfig,
    feasibility,
    match_moments,
    solve_pair,
)
from .khintchine import (
    ASYMPTOTIC,
    KhintchineConstants,
    beta_pqn,
    constants_asymptotic,
    constants_fixed_n,
    gamma_p,
    m_n_level,
    x_moment,
    y_moment,
)
from .moments import (
    ExponentTuple,
    MomentVector,
    moment,
    moment_map,
    moment_quadrature,
    moment_ratio_bound,
    power_exp_integral,
)
from .specfun import ln_gamma, reg_lower_inc_gamma
from .verify import (
    GridDensity,
    GridSpec,
    McEstimate,
    TestVerdict,
    check_density_interlace,
    check_edge,
    check_gauss_bound,
    check_h_convexity,
    check_monotone_psi,
    check_phi_criterion,
    check_schur_step,
    check_uniform_small_p,
    convolve,
    default_suite,
    grid_abs_moment,
    linear_form_moment,
    mc_ball_sample,
    mc_identity_check,
    simple_fn_density,
    y_density,
)

__version__ = "0.1.0"

__all__ = [
    "CONSTANT_ONE",
    "POINT_INDICATOR",
    "PotentialSpec",
    "Sign",
    "SimpleClass",
    "SimpleLogConcaveFn",
    "canonicalize",
    "distance",
    "embed",
    "eval_fn",
    "eval_grid",
    "fn_equal",
    "fn_from_json",
    "fn_to_json",
    "jump_form",
    "potential_from_json",
    "potential_to_json",
    "segments",
    "support_bound",
    "EnvelopeOrientation",
    "SignChangeReport",
    "parity_rule",
    "sign_changes",
    "EnvelopeGridRow",
    "EnvelopeResult",
    "body_contains",
    "envelope",
    "envelope_grid",
    "grid_csv_lines",
    "Diverges",
    "DomainError",
    "GridTooCoarse",
    "IllConditioned",
    "Infeasible",
    "LogMomentError",
    "NonConvergence",
    "NotEmbeddable",
    "UnresolvedBand",
    "INF",
    "Feasibility",
    "FeasibilityReport",
    "SolveReport",
    "SolveStatus",
    "SolverConfig",
    "feasibility",
    "match_moments",
    "solve_pair",
    "ASYMPTOTIC",
    "KhintchineConstants",
    "beta_pqn",
    "constants_asymptotic",
    "constants_fixed_n",
    "gamma_p",
    "m_n_level",
    "x_moment",
    "y_moment",
    "ExponentTuple",
    "MomentVector",
    "moment",
    "moment_map",
    "moment_quadrature",
    "moment_ratio_bound",
    "power_exp_integral",
    "ln_gamma",
    "reg_lower_inc_gamma",
    "GridDensity",
    "GridSpec",
    "McEstimate",
    "TestVerdict",
    "check_density_interlace",
    "check_edge",
    "check_gauss_bound",
    "check_h_convexity",
    "check_monotone_psi",
    "check_phi_criterion",
    "check_schur_step",
    "check_uniform_small_p",
    "convolve",
    "default_suite",
    "grid_abs_moment",
    "linear_form_moment",
    "mc_ball_sample",
    "mc_identity_check",
    "simple_fn_density",
    "y_density",
    "__version__",
]
