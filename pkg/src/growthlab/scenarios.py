"""Experiment dispatch and artifact writing."""

from __future__ import annotations

import hashlib
import io
import json
import math
import os
from dataclasses import asdict

import numpy as np

from . import __version__
from .bgp import (
    bgp_consumer_constrained,
    bgp_decentralized,
    bgp_firm_ownership,
    bgp_planner,
    data_overuse_ratio,
    gap_monotonicity,
    grid_values,
    labor_share_decentralized,
    labor_share_planner,
    misallocation_grid,
)
from .config import SHOOTING_KEYS, ScenarioConfig, params_to_manifest
from .errors import ConfigError, DomainError, SolverError
from .nonrivalry import (
    ResaleProblem,
    accumulation_equivalence,
    brute_force_roots,
    creative_destruction_crossover,
    fixed_point_decentralized,
    fixed_point_planner,
)
from .params import validate_params
from .policy import data_tax_neutrality_check, policy_report
from .transition import ShootingConfig, Trajectory, growth_trap_experiment, integrate_backward

EXIT_OK, EXIT_INVALID, EXIT_NONCONVERGED = 0, 2, 3

GRID_COLUMNS = ("xi", "zeta", "sigma", "s_rd_planner", "s_rd_decentralized", "gap", "overuse_ratio", "feasible")


class NonConvergence(Exception):
    """Raised when a solve inside a scenario fails to converge."""


def fmt(x) -> str:
    """Render one CSV cell; floats carry 12 significant digits."""
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, str):
        return x
    if isinstance(x, int):
        return str(x)
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    return format(x, ".12g")


def emit_plot_data(columns, rows) -> str:
    """CSV text with the given header and rows; an empty row list gives a header-only file."""
    buf = io.StringIO()
    buf.write(",".join(columns) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) for v in row) + "\n")
    return buf.getvalue()


def trajectory_csv(tr: Trajectory, columns=Trajectory.COLUMNS) -> str:
    data = [tr.column(c) for c in columns]
    return emit_plot_data(columns, zip(*data))


def _json(obj) -> str:
    def clean(v):
        if isinstance(v, float):
            if math.isinf(v):
                return "unbounded" if v > 0 else "-inf"
            if math.isnan(v):
                return "nan"
            return v
        if isinstance(v, dict):
            return {str(k): clean(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [clean(x) for x in v]
        if hasattr(v, "item"):
            return clean(v.item())
        return v

    return json.dumps(clean(obj), indent=2, sort_keys=True) + "\n"


def _columns(cfg: ScenarioConfig, allowed, default):
    if "columns" not in cfg.options:
        return tuple(default)
    cols = tuple(c.strip() for c in cfg.options["columns"].split(",") if c.strip())
    for c in cols:
        if c not in allowed:
            raise ConfigError(f"unknown column '{c}'; choose from {', '.join(allowed)}")
    return cols


def _shooting(cfg: ScenarioConfig) -> ShootingConfig:
    kw = {}
    for key in SHOOTING_KEYS:
        if key in cfg.options:
            v = cfg.number(key, 0.0)
            kw[key] = int(v) if key == "chatter_limit" else v
    try:
        return ShootingConfig(**kw)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None


def _s_label(s: float) -> str:
    return "unconstrained" if s == math.inf else f"s{fmt(s)}"


def _bgp(cfg):
    p = cfg.params
    sols = [bgp_decentralized(p), bgp_planner(p), bgp_consumer_constrained(p)]
    if p.theta > 0:
        sols.append(bgp_firm_ownership(p))
    cols = ("regime", "g_star", "g_phi_star", "g_mu_star", "r_star", "constraint_binding", "feasible")
    rows = [(s.regime.value, s.g_star, s.g_phi_star, s.g_mu_star, s.r_star, s.constraint_binding, s.feasible)
            for s in sols]
    sd, ss = labor_share_decentralized(p), labor_share_planner(p)
    shares = emit_plot_data(("regime", "s_rd", "theta_aux", "valid"),
                            [(x.regime.value, x.s_rd, x.theta_aux, x.valid) for x in (sd, ss)])
    summary = {"overuse_ratio": data_overuse_ratio(p), "planner_growth_bound": sols[1].growth_bound,
               "identity_residual": sols[0].identity_residual(p)}
    return {"bgp.csv": emit_plot_data(cols, rows), "shares.csv": shares, "summary.json": _json(summary)}


def _grid(cfg):
    xs = grid_values(cfg.number("xi_min", 0.3), cfg.number("xi_max", 0.8), cfg.number("xi_step", 0.05))
    zs = grid_values(cfg.number("zeta_min", 0.5), cfg.number("zeta_max", 0.95), cfg.number("zeta_step", 0.05))
    sig = cfg.numbers("sigma_values", [1.5, 2.5])
    cols = _columns(cfg, GRID_COLUMNS, GRID_COLUMNS)
    cells = misallocation_grid(cfg.params, xs, zs, sig)
    rows = [tuple(getattr(c, k) for k in cols) for c in cells]
    diag = gap_monotonicity(cells)
    summary = {
        "cells": len(cells),
        "feasible": sum(c.feasible for c in cells),
        "planner_share_exceeds_market_everywhere": all(c.gap > 0 for c in cells if c.feasible),
        "gap_monotonicity": asdict(diag),
        "infeasible": [{"xi": c.xi, "zeta": c.zeta, "sigma": c.sigma, "violations": list(c.violations)}
                       for c in cells if not c.feasible],
    }
    return {"grid.csv": emit_plot_data(cols, rows), "summary.json": _json(summary)}


def _transition(cfg):
    allowed = Trajectory.COLUMNS + ("l_R", "dot_l_E")
    cols = _columns(cfg, allowed, Trajectory.COLUMNS)
    sc = _shooting(cfg)
    files = {}
    for s in cfg.numbers("s_values", [math.inf, 0.0]):
        tr = integrate_backward(cfg.params, sc, s=s)
        if not tr.converged:
            raise NonConvergence(f"s={fmt(s)}: stopped by {tr.stop_reason} before reaching g_N={sc.target_g_N}")
        label = _s_label(s)
        files[f"trajectory_{label}.csv"] = trajectory_csv(tr, cols)
        diag = dict(tr.diagnostics, s=s, chattering=tr.chattering, binding_samples=int(tr.binding.sum()))
        files[f"diagnostics_{label}.json"] = _json(diag)
    return files


def _trap(cfg):
    sc = _shooting(cfg)
    starts = cfg.numbers("starts", [1e-16, 1e-13])
    s_values = cfg.numbers("s_values", [0.0, 0.078, math.inf])
    rep = growth_trap_experiment(cfg.params, starts, s_values, sc)
    bad = [c for c in rep.cells if not c.converged]
    if bad:
        raise NonConvergence(f"{len(bad)} trap cell(s) did not converge: "
                             + "; ".join(f"start={fmt(c.start)} s={fmt(c.s)}" for c in bad))
    files = {"trap.csv": emit_plot_data(("start", "s", "arrival", "converged", "binding_time"),
                                        [(c.start, c.s, c.arrival, c.converged, c.binding_time) for c in rep.cells])}
    delays = [{"lagging_start": a, "leading_start": b, "s": s, "delay": d} for (a, b, s), d in rep.delays.items()]
    files["trap.json"] = _json({"g_star": rep.g_star, "delays": delays, "partial_catch_up": rep.partial_catch_up})
    for i, start in enumerate(starts):
        for s in s_values:
            files[f"trajectory_start{i + 1}_{_s_label(s)}.csv"] = trajectory_csv(rep.trajectories[(start, s)])
    return files


def _policy(cfg):
    variant = cfg.text("variant", "share_matching")
    try:
        main = policy_report(cfg.params, variant)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    cols = ("tau_labor", "tau_profit", "theta_d_subsidized", "theta_s", "share_gap_after_subsidy")
    neutral = data_tax_neutrality_check(cfg.params, cfg.numbers("tax_rates", [0.5, 1.0, 2.0]))
    meta = {
        "variant": variant,
        "valid": main["valid"],
        "denominator": "gamma*g + rho - n",
        "variants": {v: policy_report(cfg.params, v) for v in ("share_matching", "unscaled")},
        "required_tax_growth": neutral.required_tax_growth,
        "neutrality_max_deviation": neutral.max_deviation,
    }
    ncols = ("tax_rate", "g_star", "g_phi_star", "s_rd", "deviation")
    return {
        "policy.csv": emit_plot_data(cols, [tuple(main[c] for c in cols)]),
        "neutrality.csv": emit_plot_data(ncols, [tuple(r[c] for c in ncols) for r in neutral.rows]),
        "policy.json": _json(meta),
    }


def _nonrivalry(cfg):
    base = ResaleProblem.from_params(cfg.params)
    variant = cfg.text("planner_variant", "auto")
    d_max = cfg.number("d_max", 10.0)
    step = cfg.number("oracle_step", 1e-3)
    rows, agreement = [], 0.0
    try:
        planner = fixed_point_planner(base, variant, d_max=d_max)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    for c0 in cfg.numbers("c0_values", [0.2, 4.0, 14.0]):
        prob = base.with_c0(c0)
        dec = fixed_point_decentralized(prob, d_max=d_max)
        oracle = brute_force_roots(prob.decentralized_residual, step, d_max, step)
        if len(oracle) == len(dec.roots):
            agreement = max([agreement] + [abs(a - b) for a, b in zip(oracle, dec.roots)])
        else:
            agreement = math.inf
        for r, ok, res in zip(dec.roots, dec.in_unit_interval, dec.residuals):
            rows.append(("decentralized", c0, r, ok, res))
        for r, ok, res in zip(planner.roots, planner.in_unit_interval, planner.residuals):
            rows.append(("planner", c0, r, ok, res))
    lo, hi = cfg.number("crossover_lo", 4.0), cfg.number("crossover_hi", 30.0)
    cross = creative_destruction_crossover(base, lo, hi, variant)
    meta = {
        "planner_variant_used": planner.variant,
        "planner_roots_by_variant": planner.variants,
        "trivial_root_flagged": True,
        "crossover": asdict(cross),
        "oracle_max_abs_difference": agreement,
        "g_bar_D": base.g_bar_D,
        "g_bar_S": base.g_bar_S,
    }
    vrows = []
    for v, roots in planner.variants.items():
        for r in roots:
            vrows.append((v, r, 0.0 < r <= 1.0, abs(float(base.planner_residual(r, v)))))
    return {
        "nonrivalry.csv": emit_plot_data(("regime", "c0", "root", "in_unit_interval", "residual"), rows),
        "planner_variants.csv": emit_plot_data(("variant", "root", "in_unit_interval", "residual"), vrows),
        "nonrivalry.json": _json(meta),
    }


def _accumulation(cfg):
    rep = accumulation_equivalence(cfg.params, cfg.number("kappa", 0.1), cfg.number("horizon", 500.0),
                                   dt=cfg.number("dt", 0.05), Phi0=cfg.number("Phi0", 1.0))
    meta = {k: v for k, v in asdict(rep).items() if k != "samples"}
    return {
        "accumulation.csv": emit_plot_data(("t", "phi", "Phi", "g_Phi", "deviation"), rep.samples),
        "accumulation.json": _json(meta),
    }


DISPATCH = {
    "bgp": _bgp,
    "grid": _grid,
    "transition": _transition,
    "trap": _trap,
    "policy": _policy,
    "nonrivalry": _nonrivalry,
    "accumulation": _accumulation,
}


def compute(cfg: ScenarioConfig) -> dict[str, str]:
    """Run the experiment in memory and return file name -> text."""
    return DISPATCH[cfg.experiment](cfg)


def write_artifacts(cfg: ScenarioConfig, files: dict[str, str], out_dir: str) -> str:
    """Write outputs plus manifest.json into ``out_dir``; returns the manifest path."""
    os.makedirs(out_dir, exist_ok=True)
    sums = {}
    for name in sorted(files):
        if os.path.basename(name) != name:
            raise ValueError(f"refusing to write outside the output directory: {name}")
        data = files[name].encode("utf-8")
        with open(os.path.join(out_dir, name), "wb") as fh:
            fh.write(data)
        sums[name] = hashlib.sha256(data).hexdigest()
    manifest = {
        "scenario": cfg.name,
        "experiment": cfg.experiment,
        "version": __version__,
        "params": params_to_manifest(cfg.params),
        "options": dict(sorted(cfg.options.items())),
        "files": sums,
    }
    path = os.path.join(out_dir, "manifest.json")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
    return path


def run_config(cfg: ScenarioConfig, out_dir: str, err=None) -> int:
    """Validate, compute and write; returns the process exit status."""
    import sys

    err = err or sys.stderr
    report = validate_params(cfg.params)
    if not report.valid:
        for v in report.violated_conditions:
            print(f"invalid parameters: {v.name} (value {fmt(v.value)}, bound {fmt(v.bound)})", file=err)
        return EXIT_INVALID
    try:
        files = compute(cfg)
    except ConfigError as exc:
        print(f"config error: {exc}", file=err)
        return EXIT_INVALID
    except DomainError as exc:
        print(f"invalid parameters: {exc}", file=err)
        return EXIT_INVALID
    except (NonConvergence, SolverError) as exc:
        print(f"solver did not converge: {exc}", file=err)
        return EXIT_NONCONVERGED
    write_artifacts(cfg, files, out_dir)
    return EXIT_OK
