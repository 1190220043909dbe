"""Entropy-stable, bound-preserving Taylor-basis DG-P1 schemes for 2D scalar conservation laws."""

from .config import ConfigError, RunConfig, load_config, parse_config
from .dg import gauss_rules, project_initial_condition
from .diagnostics import global_range, l1_error, total_entropy, total_mass
from .limiters import Scheme, parse_scheme, vertex_slope_limit
from .mesh import GHOST, Mesh, build_uniform_mesh
from .problems import (
    ConservationLaw,
    buckley_leverett_problem,
    get_problem,
    kpp_problem,
    linear_advection_problem,
    max_wave_speed,
)
from .stepper import (
    BoundViolation,
    CFLViolation,
    NonFiniteState,
    RunState,
    Solver,
    SolverError,
    run,
    ssp_rk3_step,
)

__all__ = [
    "BoundViolation", "CFLViolation", "ConfigError", "ConservationLaw", "GHOST", "Mesh",
    "NonFiniteState", "RunConfig", "RunState", "Scheme", "Solver", "SolverError",
    "buckley_leverett_problem", "build_uniform_mesh", "gauss_rules", "get_problem",
    "global_range", "kpp_problem", "l1_error", "linear_advection_problem", "load_config",
    "max_wave_speed", "parse_config", "parse_scheme", "project_initial_condition", "run",
    "ssp_rk3_step", "total_entropy", "total_mass", "vertex_slope_limit",
]
