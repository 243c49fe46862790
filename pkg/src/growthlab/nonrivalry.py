"""Historical-data resale under nonrivalry (single-lag simplification).

Data produced at t can only be resold to entrants arriving at t + M, and
the resale proportion is assumed constant across vintages. This reduces
the incumbent's and the planner's choices to scalar fixed-point equations.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import brentq

from .bgp import bgp_decentralized
from .errors import DomainError
from .params import ModelParams

# Planner prefactor readings; "auto" tries them in order and keeps the first
# whose root lies in (0, 1]. "reversed_discount" is diagnostic only.
PLANNER_VARIANTS = ("displayed", "mbar", "reversed_discount")


@dataclass(frozen=True)
class ResaleProblem:
    xi: float
    zeta: float
    gamma: float
    sigma: float
    n: float
    alpha: float
    epsilon: float
    c0: float
    M: float
    delta: float
    g_star: float
    g_phi_star: float
    regime: str = "Decentralized"

    def __post_init__(self):
        if not self.epsilon > 1 or not self.M > 0 or not (0 < self.delta <= 1):
            raise DomainError("need epsilon > 1, M > 0 and 0 < delta <= 1")

    @classmethod
    def from_params(cls, p: ModelParams, regime: str = "Decentralized") -> "ResaleProblem":
        sol = bgp_decentralized(p)
        return cls(p.xi, p.zeta, p.gamma, p.sigma, p.n, p.alpha, p.epsilon, p.c0, p.M, p.delta,
                   sol.g_star, sol.g_phi_star, regime)

    def with_c0(self, c0: float) -> "ResaleProblem":
        return ResaleProblem(**{**self.__dict__, "c0": c0})

    @property
    def g_bar_D(self) -> float:
        return self.zeta * self.g_star + self.xi * self.g_phi_star + self.n

    @property
    def g_bar_S(self) -> float:
        inv = 1.0 / self.epsilon
        return (-self.sigma + 1.0 - inv) * self.g_phi_star + (1.0 - inv) * self.n

    def _bracket_inverse(self, d):
        inv = 1.0 / self.epsilon
        lag = self.M ** (1.0 / (1.0 - self.epsilon)) * self.delta ** self.M * d * np.exp(-(self.g_phi_star + self.n) * self.M)
        return 1.0 / (self.alpha * lag ** (-inv) + (1.0 - self.alpha) * lag ** (1.0 - inv))

    def decentralized_residual(self, d: float) -> float:
        """Incumbent's first-order condition, left side minus right side (vectorized in d)."""
        if self.c0 <= 0:
            raise DomainError("decentralized equation needs c0 > 0")
        inv = 1.0 / self.epsilon
        M = self.M
        lhs = d ** (1.0 + inv) * np.exp(-self.c0 * d * d * M)
        rhs = (
            (1.0 - self.alpha) * self.xi / (2.0 * self.c0 * M)
            * self.delta ** ((1.0 - inv) * M)
            * math.exp(-self.g_bar_D * M)
            * M ** (-inv)
            * (1.0 - np.exp(-(self.c0 * d * d - self.n) * M))
            * self._bracket_inverse(d)
        )
        return lhs - rhs

    def planner_residual(self, d: float, variant: str = "displayed") -> float:
        """Planner's first-order condition, left side minus right side (vectorized in d)."""
        inv = 1.0 / self.epsilon
        M = self.M
        if variant == "displayed":
            pre, disc = self.delta ** (-M), -1.0
        elif variant == "mbar":
            pre, disc = self.delta ** M * d, -1.0
        elif variant == "reversed_discount":
            pre, disc = self.delta ** M * d, 1.0
        else:
            raise ValueError(f"unknown planner variant {variant!r}")
        rhs = (
            pre * self.sigma * (1.0 - self.alpha) / self.alpha
            * self.delta ** (-inv * M)
            * math.exp(disc * self.g_bar_S * M)
            * M ** (-inv)
            * self._bracket_inverse(d)
        )
        return d ** inv - rhs


@dataclass
class FixedPointReport:
    roots: list[float] = field(default_factory=list)
    brackets: list[tuple[float, float]] = field(default_factory=list)
    residuals: list[float] = field(default_factory=list)
    trivial_root_included: bool = True
    regime: str = "Decentralized"
    variant: str = ""
    # planner only: roots under every prefactor reading
    variants: dict = field(default_factory=dict)

    @property
    def in_unit_interval(self) -> list[bool]:
        return [0.0 < r <= 1.0 for r in self.roots]

    @property
    def nontrivial(self) -> float:
        """Largest nontrivial root, NaN when none was found."""
        return self.roots[-1] if self.roots else math.nan


def _solve(F, d_max: float, points: int) -> FixedPointReport:
    # dense linear grid plus a log grid so small roots are bracketed too
    grid = np.unique(np.concatenate([
        np.linspace(d_max / points, d_max, points),
        np.geomspace(1e-8, d_max / points, 200),
    ]))
    vals = F(grid)
    rep = FixedPointReport()
    for i in np.nonzero(np.sign(vals[:-1]) * np.sign(vals[1:]) < 0)[0]:
        a, b = float(grid[i]), float(grid[i + 1])
        r = brentq(lambda x: float(F(x)), a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=500)
        rep.brackets.append((a, b))
        rep.roots.append(r)
        rep.residuals.append(abs(float(F(r))))
    return rep


def fixed_point_decentralized(prob: ResaleProblem, d_max: float = 10.0, points: int = 20000) -> FixedPointReport:
    """Roots of the incumbent's resale condition on (0, d_max].

    d = 0 solves the condition only before simplification; it is flagged
    through ``trivial_root_included`` and never listed among ``roots``.
    """
    rep = _solve(prob.decentralized_residual, d_max, points)
    rep.regime = "Decentralized"
    rep.variant = "displayed"
    return rep


def fixed_point_planner(prob: ResaleProblem, variant: str = "auto", d_max: float = 10.0,
                        points: int = 20000) -> FixedPointReport:
    """Roots of the planner's resale condition.

    With ``variant="auto"`` the displayed prefactor is used unless it has no
    root in (0, 1], in which case the prefactor consistent with the general
    condition is used. Roots under all readings are kept in ``variants``.
    """
    table = {}
    for v in PLANNER_VARIANTS:
        table[v] = _solve(lambda d, v=v: prob.planner_residual(d, v), d_max, points)
    if variant == "auto":
        chosen = "displayed"
        if not any(0.0 < r <= 1.0 for r in table["displayed"].roots):
            chosen = "mbar"
    elif variant in PLANNER_VARIANTS:
        chosen = variant
    else:
        raise ValueError(f"unknown planner variant {variant!r}")
    rep = table[chosen]
    rep.regime = "Planner"
    rep.variant = chosen
    rep.variants = {v: list(r.roots) for v, r in table.items()}
    return rep


@dataclass
class CrossoverReport:
    found: bool
    c0_star: float
    d_S: float
    endpoint_gaps: tuple[float, float]
    message: str = ""


def creative_destruction_crossover(prob: ResaleProblem, c0_lo: float, c0_hi: float,
                                   planner_variant: str = "auto", tol: float = 1e-10) -> CrossoverReport:
    """Smallest c0 in the range where the incumbent sells less than the planner would."""
    d_S = fixed_point_planner(prob, planner_variant).nontrivial

    def gap(c0):
        return fixed_point_decentralized(prob.with_c0(c0)).nontrivial - d_S

    g_lo, g_hi = gap(c0_lo), gap(c0_hi)
    if not (g_lo > 0 and g_hi < 0):
        return CrossoverReport(False, math.nan, d_S, (g_lo, g_hi), "no sign change of d_D - d_S in range")
    a, b = c0_lo, c0_hi
    while b - a > tol * max(1.0, b):
        mid = 0.5 * (a + b)
        if gap(mid) > 0:
            a = mid
        else:
            b = mid
    return CrossoverReport(True, b, d_S, (g_lo, g_hi))


def brute_force_roots(F, lo: float, hi: float, step: float, tol: float = 1e-12) -> list[float]:
    """Grid scan plus plain bisection; an independent check on the main solvers."""
    if not lo < hi or not step > 0:
        raise ValueError("need lo < hi and step > 0")
    roots = []
    count = int(math.floor((hi - lo) / step))
    x0 = lo
    f0 = F(x0)
    for i in range(1, count + 1):
        x1 = lo + i * step
        f1 = F(x1)
        if f0 == 0.0:
            roots.append(x0)
        elif f0 * f1 < 0:
            a, b, fa = x0, x1, f0
            while b - a > tol:
                m = 0.5 * (a + b)
                fm = F(m)
                if fm == 0.0:
                    a = b = m
                    break
                if (fm < 0) == (fa < 0):
                    a, fa = m, fm
                else:
                    b = m
            roots.append(0.5 * (a + b))
        x0, f0 = x1, f1
    return roots


@dataclass
class AccumulationReport:
    kappa: float
    horizon: float
    g_phi_star: float
    g_Phi_T: float
    deviation: float
    closed_form_deviation: float
    flagged: bool
    warning: str = ""
    samples: list[tuple] = field(default_factory=list)


def accumulation_equivalence(p: ModelParams, kappa: float, horizon: float = 500.0, dt: float = 0.05,
                             Phi0: float = 1.0, sample_every: float = 1.0) -> AccumulationReport:
    """Integrate the depreciating data stock fed by a flow growing at the BGP rate.

    The stock obeys dPhi/dt = phi - kappa*Phi with phi(t) = exp(g_phi t).
    Its growth rate converges to g_phi whenever g_phi + kappa > 0.
    """
    g = bgp_decentralized(p).g_phi_star
    flagged = g + kappa <= 0
    warning = "g_phi + kappa <= 0: the stock-to-flow ratio has no stable level" if flagged else ""
    steps = int(round(horizon / dt))
    every = max(1, int(round(sample_every / dt)))

    def f(t, x):
        return math.exp(g * t) - kappa * x

    Phi, t = Phi0, 0.0
    samples = []
    for i in range(steps + 1):
        if i % every == 0 or i == steps:
            gP = math.exp(g * t) / Phi - kappa
            samples.append((t, math.exp(g * t), Phi, gP, abs(gP - g)))
        if i == steps:
            break
        k1 = f(t, Phi)
        k2 = f(t + dt / 2, Phi + dt / 2 * k1)
        k3 = f(t + dt / 2, Phi + dt / 2 * k2)
        k4 = f(t + dt, Phi + dt * k3)
        Phi += dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        t = (i + 1) * dt
    g_Phi = samples[-1][3]

    # exact solution of the linear equation for comparison
    T = steps * dt
    if g + kappa != 0:
        exact = math.exp(g * T) / (g + kappa) + (Phi0 - 1.0 / (g + kappa)) * math.exp(-kappa * T)
    else:
        exact = (Phi0 + T) * math.exp(-kappa * T)
    closed = abs(math.exp(g * T) / exact - kappa - g)
    return AccumulationReport(kappa, T, g, g_Phi, abs(g_Phi - g), closed, flagged, warning, samples)
