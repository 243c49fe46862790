"""Closed-form balanced-growth-path analytics."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .params import ModelParams, planner_growth_bound, validate_params


class Regime(str, enum.Enum):
    DECENTRALIZED = "DecentralizedConsumerOwned"
    PLANNER = "Planner"
    FIRM_OWNED = "FirmOwned"
    FIRM_OWNED_CONSTRAINED = "FirmOwnedConstrained"
    CONSUMER_OWNED_CONSTRAINED = "ConsumerOwnedConstrained"


@dataclass(frozen=True)
class BgpSolution:
    g_star: float
    g_phi_star: float
    g_mu_star: float
    r_star: float
    regime: Regime
    constraint_binding: bool = False
    feasible: bool = True
    # planner-only: the upper limit on g_star
    growth_bound: float | None = None
    note: str = ""

    def identity_residual(self, p: ModelParams) -> float:
        """(zeta-1) g + xi g_phi + n; zero on every consumer-owned BGP."""
        return (p.zeta - 1.0) * self.g_star + p.xi * self.g_phi_star + p.n


@dataclass(frozen=True)
class LaborShares:
    s_rd: float
    theta_aux: float
    regime: Regime
    valid: bool = True


def _growth_denominator(p: ModelParams) -> float:
    return (1.0 - p.zeta) * p.sigma - p.xi * (1.0 - p.gamma)


def growth_rate(p: ModelParams) -> float:
    """Common BGP growth rate of consumption, output and varieties."""
    den = _growth_denominator(p)
    if den <= 0.0:
        raise DomainError(f"growth denominator (1-zeta)sigma - xi(1-gamma) = {den} must be positive")
    return p.sigma * p.n / den


def _consumer_owned(p: ModelParams, regime: Regime) -> BgpSolution:
    g = growth_rate(p)
    g_phi = (1.0 - p.gamma) * p.n / _growth_denominator(p)
    g_mu = (p.sigma * (1.0 - p.zeta) - p.xi) / p.xi * g - p.sigma / p.xi * p.n
    return BgpSolution(g, g_phi, g_mu, p.gamma * g + p.rho, regime)


def bgp_decentralized(p: ModelParams) -> BgpSolution:
    """BGP of the market economy where consumers own their data."""
    return _consumer_owned(p, Regime.DECENTRALIZED)


def bgp_planner(p: ModelParams) -> BgpSolution:
    """Planner BGP; rates coincide with the market economy.

    Also evaluates the planner's upper limit on growth and flags it as
    binding when exceeded (only possible for gamma < 1).
    """
    if p.sigma <= p.xi:
        raise DomainError("planner bound needs sigma > xi")
    sol = _consumer_owned(p, Regime.PLANNER)
    bound = planner_growth_bound(p)
    return BgpSolution(
        sol.g_star, sol.g_phi_star, sol.g_mu_star, sol.r_star, Regime.PLANNER,
        constraint_binding=sol.g_star > bound, growth_bound=bound,
    )


def theta_decentralized(p: ModelParams, g: float) -> float:
    return (g * p.gamma + p.rho - p.n) / (g * (1.0 - p.xi) * (1.0 - p.beta))


def theta_planner(p: ModelParams, g: float) -> float:
    a = (p.sigma - p.xi) * p.n + p.xi * p.rho
    return a / (p.xi * (1.0 - p.xi) * g) - (p.sigma - p.xi) * (1.0 - p.zeta) / (p.xi * (1.0 - p.xi))


def labor_share_decentralized(p: ModelParams) -> LaborShares:
    """R&D labor share in the market economy.

    With zero growth (n = 0) the share collapses to zero.
    """
    g = growth_rate(p)
    if g == 0.0:
        return LaborShares(0.0, math.inf, Regime.DECENTRALIZED)
    if g < 0.0:
        raise DomainError(f"labor share undefined for negative growth g={g}")
    theta = theta_decentralized(p, g)
    return LaborShares(1.0 / (1.0 + theta), theta, Regime.DECENTRALIZED, valid=theta >= 0.0)


def labor_share_planner(p: ModelParams) -> LaborShares:
    """R&D labor share chosen by the planner; invalid when the growth bound fails."""
    if p.sigma <= p.xi:
        raise DomainError("planner share needs sigma > xi")
    g = growth_rate(p)
    if g == 0.0:
        return LaborShares(0.0, math.inf, Regime.PLANNER)
    if g < 0.0:
        raise DomainError(f"labor share undefined for negative growth g={g}")
    theta = theta_planner(p, g)
    valid = theta >= 0.0 and g <= planner_growth_bound(p)
    return LaborShares(1.0 / (1.0 + theta), theta, Regime.PLANNER, valid=valid)


def data_overuse_ratio(p: ModelParams) -> float:
    """Decentralized over planner data use at equal technology and population."""
    s_d = labor_share_decentralized(p)
    s_s = labor_share_planner(p)
    if not (s_d.valid and s_s.valid) or s_d.s_rd <= 0.0:
        raise DomainError("labor shares not computable for the overuse ratio")
    return (s_s.s_rd / s_d.s_rd) ** ((1.0 - p.xi) / p.xi)


@dataclass(frozen=True)
class MisallocationCell:
    xi: float
    zeta: float
    sigma: float
    s_rd_planner: float
    s_rd_decentralized: float
    gap: float
    overuse_ratio: float
    feasible: bool
    violations: tuple[str, ...] = ()


def grid_values(lo: float, hi: float, step: float) -> list[float]:
    """Inclusive arithmetic grid, rounded to kill accumulated float drift."""
    if step <= 0:
        raise ValueError("step must be positive")
    count = int(math.floor((hi - lo) / step + 1e-9)) + 1
    return [round(lo + i * step, 12) for i in range(max(count, 0))]


def misallocation_cell(p: ModelParams, xi: float, zeta: float, sigma: float) -> MisallocationCell:
    q = p.replace(xi=xi, zeta=zeta, sigma=sigma)
    report = validate_params(q)
    names = report.names()
    nan = math.nan
    if report.valid:
        try:
            sd = labor_share_decentralized(q)
            ss = labor_share_planner(q)
        except DomainError as exc:
            names.append(f"domain: {exc}")
        else:
            if not sd.valid:
                names.append("decentralized_share_invalid")
            if not ss.valid:
                names.append("planner_share_invalid")
            if not names:
                ratio = (ss.s_rd / sd.s_rd) ** ((1.0 - xi) / xi)
                return MisallocationCell(xi, zeta, sigma, ss.s_rd, sd.s_rd, ss.s_rd - sd.s_rd, ratio, True)
    return MisallocationCell(xi, zeta, sigma, nan, nan, nan, nan, False, tuple(names))


def misallocation_grid(p: ModelParams, xi_values, zeta_values, sigma_values) -> list[MisallocationCell]:
    """One cell per (sigma, xi, zeta) point; infeasible cells are kept and flagged."""
    return [
        misallocation_cell(p, xi, zeta, sigma)
        for sigma in sigma_values
        for xi in xi_values
        for zeta in zeta_values
    ]


@dataclass
class GapDiagnostics:
    """Share of feasible neighbour pairs where the gap moves in the expected direction."""

    increasing_in_sigma: float = math.nan
    increasing_in_xi: float = math.nan
    decreasing_in_zeta: float = math.nan
    pairs: dict = field(default_factory=dict)


def gap_monotonicity(cells: list[MisallocationCell]) -> GapDiagnostics:
    lookup = {(c.sigma, c.xi, c.zeta): c.gap for c in cells if c.feasible}
    sig = sorted({k[0] for k in lookup})
    xis = sorted({k[1] for k in lookup})
    zs = sorted({k[2] for k in lookup})

    def fraction(axis, values, sign):
        hits = total = 0
        for key, gap in lookup.items():
            i = values.index(key[axis])
            if i + 1 >= len(values):
                continue
            nxt = list(key)
            nxt[axis] = values[i + 1]
            other = lookup.get(tuple(nxt))
            if other is None:
                continue
            total += 1
            hits += (other - gap) * sign > 0
        return (hits / total if total else math.nan), total

    out = GapDiagnostics()
    out.increasing_in_sigma, n1 = fraction(0, sig, 1)
    out.increasing_in_xi, n2 = fraction(1, xis, 1)
    out.decreasing_in_zeta, n3 = fraction(2, zs, -1)
    out.pairs = {"sigma": n1, "xi": n2, "zeta": n3}
    return out


def labor_income_share(p: ModelParams, l_R) -> float | np.ndarray:
    """Labor income share implied by the R&D labor share ``l_R``.

    Accepts scalars or arrays; strictly decreasing in ``l_R``.
    """
    arr = np.asarray(l_R, dtype=float)
    if np.any(arr <= 0.0) or np.any(arr > 1.0):
        raise DomainError("l_R must lie in (0, 1]")
    out = (1.0 - p.xi) / p.xi / arr
    return float(out) if out.ndim == 0 else out


def bgp_firm_ownership(p: ModelParams) -> BgpSolution:
    """BGP when firms own data and pay a convex processing cost."""
    if not (p.theta > 0.0 and p.phi_cost > 1.0):
        raise DomainError("firm ownership needs theta > 0 and phi_cost > 1")
    nan = math.nan
    if 2.0 - p.zeta <= p.xi + p.phi_cost:
        den = p.phi_cost * (1.0 - p.zeta) - p.xi
        if den <= 0.0:
            return BgpSolution(nan, nan, nan, nan, Regime.FIRM_OWNED, feasible=False,
                               note=f"phi_cost(1-zeta) - xi = {den:.6g} <= 0")
        g = (p.xi + p.phi_cost) * p.n / den
        g_phi = (2.0 - p.zeta) * p.n / den
        return BgpSolution(g, g_phi, nan, p.gamma * g + p.rho, Regime.FIRM_OWNED)
    den = 1.0 - p.zeta - p.xi
    if den <= 0.0:
        return BgpSolution(nan, nan, nan, nan, Regime.FIRM_OWNED_CONSTRAINED, constraint_binding=True,
                           feasible=False, note=f"1 - zeta - xi = {den:.6g} <= 0")
    g = p.n / den
    return BgpSolution(g, g, nan, p.gamma * g + p.rho, Regime.FIRM_OWNED_CONSTRAINED, constraint_binding=True)


def consumer_constraint_threshold(p: ModelParams) -> float:
    """Tightness below which the data-provision constraint binds on the BGP."""
    return (1.0 - p.gamma - p.sigma) / _growth_denominator(p) * p.n


def bgp_consumer_constrained(p: ModelParams) -> BgpSolution:
    """Consumer-owned BGP with a (possibly binding) data-provision constraint.

    The constrained formula needs 1 - zeta - xi > 0; when that fails the
    result is flagged infeasible before the threshold is consulted.
    """
    nan = math.nan
    den = 1.0 - p.zeta - p.xi
    if den <= 0.0:
        return BgpSolution(nan, nan, nan, nan, Regime.CONSUMER_OWNED_CONSTRAINED, constraint_binding=True,
                           feasible=False, note=f"1 - zeta - xi = {den:.6g} <= 0")
    if not p.s < consumer_constraint_threshold(p):
        return bgp_decentralized(p)
    g = (p.xi * p.s + p.n) / den
    return BgpSolution(g, g + p.s, nan, p.gamma * g + p.rho, Regime.CONSUMER_OWNED_CONSTRAINED,
                       constraint_binding=True)
