"""Numerical laboratory for an endogenous growth model with data as an input to innovation."""

__version__ = "0.1.0"

from .bgp import (  # noqa: E402
    BgpSolution,
    LaborShares,
    MisallocationCell,
    Regime,
    bgp_consumer_constrained,
    bgp_decentralized,
    bgp_firm_ownership,
    bgp_planner,
    data_overuse_ratio,
    labor_income_share,
    labor_share_decentralized,
    labor_share_planner,
    misallocation_grid,
)
from .errors import ConfigError, DomainError, SolverError  # noqa: E402
from .nonrivalry import (  # noqa: E402
    FixedPointReport,
    ResaleProblem,
    accumulation_equivalence,
    brute_force_roots,
    creative_destruction_crossover,
    fixed_point_decentralized,
    fixed_point_planner,
)
from .params import BgpLevels, ModelParams, ValidationReport, bgp_levels, validate_params  # noqa: E402
from .policy import (  # noqa: E402
    PolicyRates,
    data_tax_neutrality_check,
    optimal_labor_subsidy,
    optimal_profit_subsidy,
)
from .transition import (  # noqa: E402
    ShootingConfig,
    Trajectory,
    TransitionState,
    growth_trap_experiment,
    integrate_backward,
    ode_rhs,
    solve_transition,
    steady_state,
)
