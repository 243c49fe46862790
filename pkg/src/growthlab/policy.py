"""Optimal R&D subsidies and the data-tax neutrality check."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bgp import bgp_decentralized, growth_rate, theta_decentralized, theta_planner
from .errors import DomainError
from .params import ModelParams

# "share_matching" equalizes the subsidized market share with the planner
# share; "unscaled" is the closed form without the 1/xi factor, kept for
# comparison because the two differ whenever xi != 1.
VARIANTS = ("share_matching", "unscaled")


@dataclass(frozen=True)
class PolicyRates:
    tau_labor: float = math.nan
    tau_profit: float = math.nan
    valid: bool = False
    variant: str = "share_matching"
    notes: tuple[str, ...] = ()


def _unscaled_rate(p: ModelParams) -> float:
    if not p.sigma > p.xi:
        raise DomainError("subsidy formulas need sigma > xi")
    g = growth_rate(p)
    num = (1.0 - p.beta) * ((p.sigma - p.xi) * p.n + p.xi * p.rho - (p.sigma - p.xi) * (1.0 - p.zeta) * g)
    return num / (p.gamma * g + p.rho - p.n)


def _labor_rate(p: ModelParams, variant: str) -> float:
    if variant not in VARIANTS:
        raise ValueError(f"unknown subsidy variant {variant!r}")
    tau = _unscaled_rate(p)
    return tau / p.xi if variant == "share_matching" else tau


_NOTES = ("denominator uses gamma*g + rho - n",)


def optimal_labor_subsidy(p: ModelParams, variant: str = "share_matching") -> PolicyRates:
    """Gross rate on R&D wages that moves the market labor share to the planner's."""
    tau = _labor_rate(p, variant)
    return PolicyRates(tau_labor=tau, valid=0.0 < tau < 1.0, variant=variant, notes=_NOTES)


def optimal_profit_subsidy(p: ModelParams, variant: str = "share_matching") -> PolicyRates:
    """Gross rate on intermediate profits; the reciprocal of the wage subsidy."""
    tau = 1.0 / _labor_rate(p, variant)
    return PolicyRates(tau_profit=tau, valid=tau > 1.0, variant=variant, notes=_NOTES)


def optimal_subsidies(p: ModelParams, variant: str = "share_matching") -> PolicyRates:
    lab = optimal_labor_subsidy(p, variant)
    prof = optimal_profit_subsidy(p, variant)
    return PolicyRates(lab.tau_labor, prof.tau_profit, lab.valid and prof.valid, variant, _NOTES)


def theta_subsidized(p: ModelParams, tau: float) -> float:
    """Market Theta term when R&D firms pay ``tau`` times the wage."""
    g = growth_rate(p)
    return tau * (p.gamma + (p.rho - p.n) / g) / ((1.0 - p.xi) * (1.0 - p.beta))


def policy_report(p: ModelParams, variant: str = "share_matching") -> dict:
    rates = optimal_subsidies(p, variant)
    g = growth_rate(p)
    th_sub = theta_subsidized(p, rates.tau_labor)
    th_s = theta_planner(p, g)
    return {
        "tau_labor": rates.tau_labor,
        "tau_profit": rates.tau_profit,
        "theta_d_subsidized": th_sub,
        "theta_s": th_s,
        "share_gap_after_subsidy": 1.0 / (1.0 + th_s) - 1.0 / (1.0 + th_sub),
        "valid": rates.valid,
        "variant": variant,
    }


def taxed_growth_rates(p: ModelParams, g_tau: float) -> tuple[float, float]:
    """Solve the two BGP growth identities when the data tax grows at ``g_tau``.

    Returns (g, g_phi). With a constant tax (g_tau = 0) this reproduces the
    untaxed rates.
    """
    A = np.array([[p.zeta - 1.0, p.xi], [p.zeta - p.gamma, p.xi - p.sigma]])
    b = np.array([-p.n, g_tau - p.n])
    g, g_phi = np.linalg.solve(A, b)
    return float(g), float(g_phi)


def required_tax_growth(p: ModelParams) -> float:
    """Tax growth implied by the untaxed BGP rates; zero when a constant tax is consistent."""
    sol = bgp_decentralized(p)
    return (p.zeta - p.gamma) * sol.g_star + (p.xi - p.sigma) * sol.g_phi_star + p.n


@dataclass
class NeutralityReport:
    rows: list[dict] = field(default_factory=list)
    max_deviation: float = 0.0
    required_tax_growth: float = 0.0


def data_tax_neutrality_check(p: ModelParams, tax_rates) -> NeutralityReport:
    """Confirm constant data taxes leave (g, g_phi, s_D) unchanged.

    The tax level cancels out of the labor free-entry route because the
    product tax * N / (phi * p_phi) is constant on the BGP, so the recomputed
    share uses only the recomputed growth rate.
    """
    base = bgp_decentralized(p)
    s_base = 1.0 / (1.0 + theta_decentralized(p, base.g_star))
    out = NeutralityReport(required_tax_growth=required_tax_growth(p))
    for tau in tax_rates:
        if not tau > 0:
            raise DomainError("tax rates must be positive")
        g, g_phi = taxed_growth_rates(p, 0.0)
        s_d = 1.0 / (1.0 + theta_decentralized(p, g))
        dev = max(abs(g - base.g_star), abs(g_phi - base.g_phi_star), abs(s_d - s_base))
        out.rows.append({"tax_rate": tau, "g_star": g, "g_phi_star": g_phi, "s_rd": s_d, "deviation": dev})
        out.max_deviation = max(out.max_deviation, dev)
    return out
