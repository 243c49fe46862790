"""Structural parameters, existence checks and level formulas."""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True)
class ModelParams:
    """All structural parameters of the economy.

    Defaults are the calibration used for the transition experiments. ``s``
    may be ``math.inf`` to switch the data-provision constraint off.
    ``phi_cost`` is the exponent of the firm-side data-processing cost.
    """

    n: float = 0.02
    rho: float = 0.03
    gamma: float = 2.5
    sigma: float = 1.5
    xi: float = 0.5
    zeta: float = 0.85
    beta: float = 2.0 / 3.0
    psi: float = 1.0 / 3.0
    eta: float = 1.0
    s: float = 0.0
    theta: float = 0.0
    phi_cost: float = 4.0
    # nonrivalry block
    alpha: float = 0.5
    epsilon: float = 50.0
    c0: float = 0.2
    M: float = 1.0
    delta: float = 0.9

    def replace(self, **changes) -> "ModelParams":
        return dataclasses.replace(self, **changes)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "ModelParams":
        names = {f.name for f in dataclasses.fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise KeyError(f"unknown parameter(s): {', '.join(sorted(unknown))}")
        return cls(**{k: float(v) for k, v in data.items()})

    @staticmethod
    def field_names() -> list[str]:
        return [f.name for f in dataclasses.fields(ModelParams)]


@dataclass(frozen=True)
class Violation:
    """A named condition that failed, with the evaluated quantity and its bound."""

    name: str
    value: float
    bound: float
    detail: str = ""


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    violated_conditions: tuple[Violation, ...] = ()
    # soft warnings that do not invalidate the parameter set
    flags: tuple[Violation, ...] = ()

    def names(self) -> list[str]:
        return [v.name for v in self.violated_conditions]


def planner_growth_bound(p: ModelParams) -> float:
    """Upper limit on the planner's BGP growth rate (requires sigma > xi)."""
    if p.sigma <= p.xi:
        return math.inf
    return (p.n + p.xi * p.rho / (p.sigma - p.xi)) / (1.0 - p.zeta)


def zeta_upper_bound(p: ModelParams) -> float:
    """Largest spillover exponent for which a unique BGP exists."""
    if p.gamma >= 1.0:
        return 1.0 - (p.xi / p.sigma) * (1.0 - p.gamma)
    return 1.0 - (1.0 - p.gamma) * (p.n / p.rho + p.xi / p.sigma)


def validate_params(p: ModelParams) -> ValidationReport:
    """Check range invariants and the BGP existence conditions.

    Never raises: every failure is reported as a named violation so that
    parameter sweeps can record infeasible cells.
    """
    bad: list[Violation] = []

    def open_unit(name, value):
        if not (0.0 < value < 1.0):
            bad.append(Violation(f"{name}_in_unit_interval", value, 1.0, f"need 0 < {name} < 1"))

    def positive(name, value):
        if not value > 0.0:
            bad.append(Violation(f"{name}_positive", value, 0.0, f"need {name} > 0"))

    open_unit("xi", p.xi)
    open_unit("zeta", p.zeta)
    open_unit("beta", p.beta)
    open_unit("alpha", p.alpha)
    if not p.sigma > 1.0:
        bad.append(Violation("sigma_gt_1", p.sigma, 1.0, "need sigma > 1"))
    positive("gamma", p.gamma)
    positive("n", p.n)
    positive("psi", p.psi)
    positive("eta", p.eta)
    positive("M", p.M)
    if not p.rho > p.n:
        bad.append(Violation("rho_gt_n", p.rho, p.n, "need rho > n"))
    if p.theta < 0.0:
        bad.append(Violation("theta_nonnegative", p.theta, 0.0))
    if p.theta > 0.0 and not p.phi_cost > 1.0:
        bad.append(Violation("phi_cost_gt_1", p.phi_cost, 1.0, "need phi_cost > 1 when theta > 0"))
    if not p.epsilon > 1.0:
        bad.append(Violation("epsilon_gt_1", p.epsilon, 1.0))
    if p.c0 < 0.0:
        bad.append(Violation("c0_nonnegative", p.c0, 0.0))
    if not (0.0 < p.delta <= 1.0):
        bad.append(Violation("delta_in_unit_interval", p.delta, 1.0, "need 0 < delta <= 1"))
    if math.isnan(p.s):
        bad.append(Violation("s_defined", p.s, 0.0))

    # existence of a unique BGP; only meaningful once the ranges hold
    if p.sigma > 0 and p.rho > 0:
        upper = zeta_upper_bound(p)
        name = "existence_gamma_ge_1" if p.gamma >= 1.0 else "existence_gamma_lt_1"
        if not (0.0 < p.zeta < upper):
            bad.append(Violation(name, p.zeta, upper, "need 0 < zeta < upper bound"))

    # the planner bound is a soft flag, evaluated even when other checks fail
    flags: list[Violation] = []
    den = (1.0 - p.zeta) * p.sigma - p.xi * (1.0 - p.gamma)
    if 0.0 < p.gamma < 1.0 and p.sigma > p.xi and 0.0 < p.zeta < 1.0 and den > 0.0:
        bound = planner_growth_bound(p)
        g = p.sigma * p.n / den
        if g > bound:
            flags.append(Violation("planner_growth_bound", g, bound, "planner upper limit binds"))

    return ValidationReport(valid=not bad, violated_conditions=tuple(bad), flags=tuple(flags))


@dataclass(frozen=True)
class BgpLevels:
    p_x: float
    x_per_variety: float
    pi: float
    w: float
    Y: float
    V: float


def bgp_levels(p: ModelParams, N: float, L_E: float, r_star: float) -> BgpLevels:
    """Prices and quantities of the final and intermediate sectors.

    Raises DomainError when ``r_star <= n`` since the patent value diverges.
    """
    if not N > 0 or not L_E > 0:
        raise DomainError("N and L_E must be positive")
    if r_star <= p.n:
        raise DomainError(f"r_star={r_star} must exceed n={p.n} for a finite patent value")
    b = p.beta
    base = (1.0 - b) ** 2 / p.psi
    p_x = p.psi / (1.0 - b)
    x = base ** (1.0 / b) * L_E
    pi = p.psi ** (1.0 - 1.0 / b) * b / (1.0 - b) ** (1.0 - 2.0 / b) * L_E
    Y = base ** (1.0 / b - 1.0) * N * L_E
    w = b * base ** (1.0 / b - 1.0) * N
    return BgpLevels(p_x=p_x, x_per_variety=x, pi=pi, w=w, Y=Y, V=pi / (r_star - p.n))
