"""Planner transitional dynamics by reverse shooting.

The state is (g_N, g_mu, l_E). Internally the integrator carries the R&D
share l_R = 1 - l_E instead of l_E: near-zero-growth starts push l_E to
within 1e-12 of one, where 1 - l_E would lose most of its digits.
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass, field

import numpy as np

from .bgp import growth_rate, labor_share_planner
from .errors import DomainError, SolverError
from .params import ModelParams


@dataclass(frozen=True)
class TransitionState:
    g_N: float
    g_mu: float
    l_E: float
    t: float = 0.0


@dataclass(frozen=True)
class RhsResult:
    dot_g_N: float
    dot_g_mu: float
    dot_l_E: float
    g_phi: float
    g_c: float
    binding: bool


@dataclass(frozen=True)
class ShootingConfig:
    """Controls for one reverse-shooting solve.

    ``target_g_N`` is the required starting value of g_N; the backward run
    stops once it is reached. ``le_guard`` bounds l_E away from 0 and 1 and
    ``g_N_floor`` bounds g_N away from zero during the backward run.
    """

    dt: float = 0.1
    horizon: float = 1000.0
    perturbation_scale: float = 1e-6
    target_g_N: float = 1e-6
    tolerance: float = 1e-6
    le_guard: float = 1e-6
    g_N_floor: float = 1e-9
    chatter_limit: int = 100

    def __post_init__(self):
        if not self.dt > 0 or not self.tolerance > 0:
            raise ValueError("dt and tolerance must be positive")
        if self.perturbation_scale < 0 or self.horizon <= 0:
            raise ValueError("perturbation_scale must be >= 0 and horizon > 0")


class _System:
    """Right-hand side of the three-variable system with cached parameters."""

    def __init__(self, p: ModelParams):
        if not p.sigma > p.xi:
            raise DomainError("transition dynamics need sigma > xi")
        self.n, self.rho, self.gam = p.n, p.rho, p.gamma
        self.sig, self.xi, self.zeta = p.sigma, p.xi, p.zeta
        self.k = p.xi / (p.sigma - p.xi)

    def unconstrained(self, gN, gmu, lR):
        n, xi, zeta, gam, k = self.n, self.xi, self.zeta, self.gam, self.k
        lE = 1.0 - lR
        a = (k * (1.0 - xi) - xi) / lR
        b = gam / lE
        den = a - b
        if abs(den) <= 1e-14 * (abs(a) + b):
            raise SolverError(f"singular l_E denominator at g_N={gN}, g_mu={gmu}, l_E={lE}")
        ldot = ((gam + zeta - 1.0 + k * zeta) * gN + (1.0 + k) * gmu + (1.0 + k) * n) / den
        gphi = (gmu + zeta * gN - (1.0 - xi) * ldot / lR + n) / (self.sig - xi)
        return ldot, gphi

    def binding(self, gN, gmu, lR, s):
        # data FOC replaced by g_phi = g_c + s; l_E rate re-solved from the labor condition
        n, xi, zeta, gam = self.n, self.xi, self.zeta, self.gam
        lE = 1.0 - lR
        ldot = ((1.0 - zeta - gam - xi) * gN - gmu - xi * s - n) / (xi / lR + (gam + xi) / lE)
        return ldot, gN + ldot / lE + s

    def is_binding(self, gN, gmu, lR, s):
        if s == math.inf:
            return False
        ldot, gphi = self.unconstrained(gN, gmu, lR)
        return gphi > gN + ldot / (1.0 - lR) + s

    def rates(self, gN, gmu, lR, ldot, gphi):
        n, xi, zeta = self.n, self.xi, self.zeta
        lE = 1.0 - lR
        c = 1.0 - xi - zeta
        dgmu = (gmu - self.rho + n) * (
            (zeta - 1.0) * gN + xi * gphi + xi * ldot / lR + n + c * ldot / (zeta + c * lE)
        )
        dgN = gN * ((zeta - 1.0) * gN + xi * gphi - (1.0 - xi) * ldot / lR + n)
        return dgN, dgmu

    def field(self, y, s):
        """Time derivative of (g_N, g_mu, l_R); ``s`` is None for the unconstrained regime."""
        gN, gmu, lR = y
        ldot, gphi = self.unconstrained(gN, gmu, lR) if s is None else self.binding(gN, gmu, lR, s)
        dgN, dgmu = self.rates(gN, gmu, lR, ldot, gphi)
        return (dgN, dgmu, -ldot)

    def manifold_g_mu(self, gN, lR):
        """g_mu on the invariant surface that contains the steady state."""
        return self.rho - self.n - gN * (self.zeta + (1.0 - self.xi - self.zeta) * (1.0 - lR)) / lR


def _rk4(f, y, h):
    k1 = f(y)
    k2 = f(tuple(a + 0.5 * h * b for a, b in zip(y, k1)))
    k3 = f(tuple(a + 0.5 * h * b for a, b in zip(y, k2)))
    k4 = f(tuple(a + h * b for a, b in zip(y, k3)))
    return tuple(a + h / 6.0 * (b1 + 2.0 * b2 + 2.0 * b3 + b4) for a, b1, b2, b3, b4 in zip(y, k1, k2, k3, k4))


def steady_state(p: ModelParams) -> TransitionState:
    """Closed-form steady state of the planner system."""
    if not p.n > 0:
        raise DomainError("steady state needs n > 0")
    g = growth_rate(p)
    g_mu = (p.sigma * (1.0 - p.zeta) - p.xi) / p.xi * g - p.sigma / p.xi * p.n
    share = labor_share_planner(p)
    if not share.valid:
        raise DomainError("planner labor share invalid for these parameters")
    return TransitionState(g, g_mu, 1.0 - share.s_rd)


def _steady_vector(p: ModelParams):
    g = growth_rate(p)
    g_mu = (p.sigma * (1.0 - p.zeta) - p.xi) / p.xi * g - p.sigma / p.xi * p.n
    return (g, g_mu, labor_share_planner(p).s_rd)


def ode_rhs(state: TransitionState, p: ModelParams, binding_s: float | None = None) -> RhsResult:
    """Evaluate the system at ``state``.

    ``binding_s=None`` uses the unconstrained regime; a number forces the
    binding regime with that tightness.
    """
    if not (0.0 < state.l_E < 1.0):
        raise DomainError("l_E must be strictly inside (0, 1)")
    sys_ = _System(p)
    lR = 1.0 - state.l_E
    if binding_s is None:
        ldot, gphi = sys_.unconstrained(state.g_N, state.g_mu, lR)
    else:
        ldot, gphi = sys_.binding(state.g_N, state.g_mu, lR, binding_s)
    dgN, dgmu = sys_.rates(state.g_N, state.g_mu, lR, ldot, gphi)
    return RhsResult(dgN, dgmu, ldot, gphi, state.g_N + ldot / state.l_E, binding_s is not None)


def select_binding(state: TransitionState, p: ModelParams, s: float) -> bool:
    """True when the unconstrained data growth would exceed consumption growth plus ``s``."""
    return _System(p).is_binding(state.g_N, state.g_mu, 1.0 - state.l_E, s)


def jacobian(p: ModelParams, rel_step: float = 1e-7) -> np.ndarray:
    """Central-difference Jacobian of the unconstrained field at the steady state, in (g_N, g_mu, l_R)."""
    sys_ = _System(p)
    y0 = np.array(_steady_vector(p))
    J = np.empty((3, 3))
    for j in range(3):
        h = rel_step * max(abs(y0[j]), 1e-3)
        e = np.zeros(3)
        e[j] = h
        J[:, j] = (np.array(sys_.field(tuple(y0 + e), None)) - np.array(sys_.field(tuple(y0 - e), None))) / (2 * h)
    return J


def stable_direction(p: ModelParams) -> tuple[np.ndarray, np.ndarray]:
    """Unit eigenvector of the most negative eigenvalue, oriented so g_N increases along it.

    Returns (direction, eigenvalues). Stepping from the steady state
    against this direction reaches the low-growth branch.
    """
    vals, vecs = np.linalg.eig(jacobian(p))
    i = int(np.argmin(vals.real))
    v = vecs[:, i].real
    v = v / np.linalg.norm(v)
    if v[0] < 0:
        v = -v
    return v, np.sort(vals.real)


@dataclass
class Trajectory:
    t: np.ndarray
    g_N: np.ndarray
    g_mu: np.ndarray
    l_E: np.ndarray
    l_R: np.ndarray
    g_c: np.ndarray
    g_phi: np.ndarray
    dot_l_E: np.ndarray
    phi_level: np.ndarray
    phi_cumulative: np.ndarray
    binding: np.ndarray
    s: float = math.inf
    converged: bool = True
    stop_reason: str = "target"
    chattering: bool = False
    diagnostics: dict = field(default_factory=dict)

    COLUMNS = ("t", "g_N", "g_mu", "l_E", "g_c", "g_phi", "phi_level", "phi_cumulative", "binding")

    def __len__(self):
        return len(self.t)

    def state(self, i: int) -> TransitionState:
        return TransitionState(float(self.g_N[i]), float(self.g_mu[i]), float(self.l_E[i]), float(self.t[i]))

    def column(self, name: str) -> np.ndarray:
        if name not in self.COLUMNS and name not in ("l_R", "dot_l_E"):
            raise KeyError(f"unknown trajectory column: {name}")
        return getattr(self, name)

    def time_to_band(self, g_star: float, frac: float = 0.01) -> float:
        """Time after which g_N stays within ``frac`` of ``g_star``, linearly interpolated."""
        dev = np.abs(self.g_N - g_star) - frac * abs(g_star)
        outside = np.nonzero(dev > 0)[0]
        if len(outside) == 0:
            return float(self.t[0])
        i = int(outside[-1])
        if i + 1 >= len(self.t):
            return math.inf
        w = dev[i] / (dev[i] - dev[i + 1])
        return float(self.t[i] + w * (self.t[i + 1] - self.t[i]))


def _start_point(sys_: _System, p: ModelParams, scale: float):
    ss = _steady_vector(p)
    info = {"steady_state": list(ss)}
    if scale == 0.0:
        info.update(direction=[0.0, 0.0, 0.0], eigenvalues=[])
        return ss, info
    v, vals = stable_direction(p)
    gN = ss[0] - scale * v[0]
    lR = ss[2] - scale * v[2]
    y = (gN, sys_.manifold_g_mu(gN, lR), lR)
    info.update(direction=v.tolist(), eigenvalues=vals.tolist())
    return y, info


def integrate_backward(p: ModelParams, cfg: ShootingConfig = ShootingConfig(), s: float = math.inf) -> Trajectory:
    """Reverse-shoot from the perturbed steady state to the target starting g_N.

    The start is displaced by ``cfg.perturbation_scale`` against the stable
    eigenvector and projected onto the invariant surface through the
    steady state. The system is integrated backward with fixed-step RK4;
    the final step is shortened so the run lands exactly on the target.
    Regime selection (binding or not) happens once per step.
    """
    sys_ = _System(p)
    y, info = _start_point(sys_, p, cfg.perturbation_scale)
    ss = info["steady_state"]
    lo, hi = cfg.le_guard, 1.0 - cfg.le_guard

    def back(regime):
        return lambda z: tuple(-d for d in sys_.field(z, regime))

    def regime_at(z):
        return s if sys_.is_binding(z[0], z[1], z[2], s) else None

    states = [y]
    steps: list[float] = []
    elapsed = 0.0
    reason = "horizon"
    switches = 0
    chatter = False
    prev = regime_at(y)
    nmax = int(math.ceil(cfg.horizon / cfg.dt - 1e-9))
    for _ in range(nmax):
        regime = regime_at(y)
        if (regime is None) != (prev is None):
            switches += 1
            chatter = chatter or switches > cfg.chatter_limit
        else:
            switches = 0
        prev = regime
        f = back(regime)
        h = min(cfg.dt, cfg.horizon - elapsed)
        yn = _rk4(f, y, h)
        if yn[0] <= cfg.target_g_N:
            # shorten the last step so g_N lands on the target
            a, b = 0.0, h
            for _ in range(200):
                mid = 0.5 * (a + b)
                if _rk4(f, y, mid)[0] > cfg.target_g_N:
                    a = mid
                else:
                    b = mid
                if b - a <= 1e-15 * h:
                    break
            h = b
            yn = _rk4(f, y, h)
            states.append(yn)
            steps.append(h)
            elapsed += h
            reason = "target"
            break
        if not (lo < 1.0 - yn[2] < hi):
            reason = "l_E_guard"
            break
        if yn[0] <= cfg.g_N_floor:
            reason = "g_N_floor"
            break
        if not all(math.isfinite(c) for c in yn):
            reason = "non_finite"
            break
        y = yn
        states.append(y)
        steps.append(h)
        elapsed += h

    arr = np.array(states[::-1])
    t = np.concatenate([[0.0], np.cumsum(steps[::-1])])
    start_err = abs(arr[0, 0] - cfg.target_g_N)
    converged = reason == "target" and start_err <= cfg.tolerance * max(1.0, cfg.target_g_N)
    info.update(
        stop_reason=reason,
        backward_time=elapsed,
        steps=len(steps),
        start_g_N=float(arr[0, 0]),
        start_error=start_err,
        terminal_distance=float(np.max(np.abs(arr[-1] - np.array(ss)))),
        derivative_norm_at_perturbed_point=float(max(abs(d) for d in sys_.field(tuple(arr[-1]), None))),
    )
    return _assemble(sys_, arr, t, s, converged, reason, chatter, info)


def _assemble(sys_, arr, t, s, converged, reason, chatter, info) -> Trajectory:
    m = len(t)
    gN, gmu, lR = arr[:, 0], arr[:, 1], arr[:, 2]
    lE = 1.0 - lR
    g_c = np.empty(m)
    g_phi = np.empty(m)
    ldot = np.empty(m)
    binding = np.zeros(m, dtype=bool)
    for i in range(m):
        b = sys_.is_binding(gN[i], gmu[i], lR[i], s)
        ld, gp = sys_.binding(gN[i], gmu[i], lR[i], s) if b else sys_.unconstrained(gN[i], gmu[i], lR[i])
        ldot[i], g_phi[i], binding[i] = ld, gp, b
        g_c[i] = gN[i] + ld / lE[i]
    phi = np.ones(m)
    for i in range(1, m):
        phi[i] = phi[i - 1] * math.exp(g_phi[i - 1] * (t[i] - t[i - 1]))
    cum = np.concatenate([[0.0], np.cumsum(0.5 * (phi[1:] + phi[:-1]) * np.diff(t))])
    return Trajectory(t, gN.copy(), gmu.copy(), lE, lR.copy(), g_c, g_phi, ldot, phi, cum, binding,
                      s=s, converged=converged, stop_reason=reason, chattering=chatter, diagnostics=info)


def solve_transition(p: ModelParams, cfg: ShootingConfig = ShootingConfig(), constrained: bool = False) -> Trajectory:
    """Transition path; constrained runs use the tightness ``p.s``."""
    return integrate_backward(p, cfg, s=p.s if constrained else math.inf)


def observed_order(p: ModelParams, cfg: ShootingConfig = ShootingConfig(), span: float = 200.0) -> float:
    """Empirical convergence order of the integrator from dt, dt/2 and dt/4 runs.

    Each run integrates the unconstrained system backward for ``span`` time
    units from the same perturbed start.
    """
    sys_ = _System(p)
    y0, _ = _start_point(sys_, p, cfg.perturbation_scale)
    f = lambda z: tuple(-d for d in sys_.field(z, None))  # noqa: E731

    def run(h):
        y = y0
        for _ in range(int(round(span / h))):
            y = _rk4(f, y, h)
        return np.array(y)

    a, b, c = run(cfg.dt), run(cfg.dt / 2), run(cfg.dt / 4)
    return math.log2(np.max(np.abs(a - b)) / np.max(np.abs(b - c)))


@dataclass(frozen=True)
class TrapCell:
    start: float
    s: float
    arrival: float
    converged: bool
    binding_time: float


@dataclass
class TrapReport:
    g_star: float
    cells: list[TrapCell]
    delays: dict
    partial_catch_up: dict | None
    trajectories: dict = field(default_factory=dict, repr=False)

    def arrival(self, start: float, s: float) -> float:
        for c in self.cells:
            if c.start == start and c.s == s:
                return c.arrival
        raise KeyError((start, s))


def growth_trap_experiment(p: ModelParams, starts, s_values, cfg: ShootingConfig = ShootingConfig()) -> TrapReport:
    """Compare arrival times at the BGP across starting points and constraint tightness.

    Arrival is the time after which g_N stays within 1% of its BGP value.
    Delays are reported per tightness for every ordered pair of starts.
    """
    g = growth_rate(p)
    cells, trajs = [], {}
    for start in starts:
        run_cfg = dataclasses.replace(cfg, target_g_N=start)
        for s in s_values:
            tr = integrate_backward(p, run_cfg, s=s)
            arrival = tr.time_to_band(g) if tr.converged else math.nan
            dt = np.diff(tr.t)
            bind_time = float(np.sum(dt[tr.binding[:-1]])) if len(dt) else 0.0
            cells.append(TrapCell(start, s, arrival, tr.converged, bind_time))
            trajs[(start, s)] = tr
    delays = {}
    for s in s_values:
        for a in starts:
            for b in starts:
                if a < b:
                    ta = next(c.arrival for c in cells if c.start == a and c.s == s)
                    tb = next(c.arrival for c in cells if c.start == b and c.s == s)
                    delays[(a, b, s)] = ta - tb
    catch = None
    if len(starts) >= 2 and 0.0 in s_values and math.inf in s_values:
        lag, lead = min(starts), max(starts)
        look = {(c.start, c.s): c.arrival for c in cells}
        t_lag0, t_lag_inf, t_lead0 = look[(lag, 0.0)], look[(lag, math.inf)], look[(lead, 0.0)]
        catch = {
            "lagging_start": lag,
            "leading_start": lead,
            "unbounded_faster_than_tight": t_lag_inf < t_lag0,
            "still_behind_leader": t_lag_inf > t_lead0,
            "holds": t_lag_inf < t_lag0 and t_lag_inf > t_lead0,
        }
    return TrapReport(g, cells, delays, catch, trajs)
