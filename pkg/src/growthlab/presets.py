"""Built-in scenarios reproducing the model's headline figures and numbers."""

from __future__ import annotations

_TRANSITION = """\
[scenario]
name = {name}
experiment = transition

[params]
sigma = {sigma}

[options]
s_values = unbounded, 0
"""

PRESETS: dict[str, tuple[str, str]] = {
    "figure1-grid": (
        "R&D labor-share gap between planner and market over (xi, zeta, sigma)",
        """\
[scenario]
name = figure1-grid
experiment = grid

[options]
xi_min = 0.3
xi_max = 0.8
xi_step = 0.05
zeta_min = 0.5
zeta_max = 0.95
zeta_step = 0.05
sigma_values = 1.5, 2.5
""",
    ),
    "figure3-trap": (
        "Arrival at the BGP from a near-zero and a later start under s = 0, 0.078, unbounded",
        """\
[scenario]
name = figure3-trap
experiment = trap

[options]
starts = 1e-16, 1e-13
s_values = 0, 0.078, unbounded
horizon = 3000
le_guard = 1e-200
g_N_floor = 1e-30
""",
    ),
    "figureEC3-levels": (
        "Flow and cumulative data provision along the constrained path (sigma = 1.5, s = 0)",
        """\
[scenario]
name = figureEC3-levels
experiment = transition

[options]
s_values = 0
columns = t, g_phi, phi_level, phi_cumulative, binding
""",
    ),
    "policy-subsidies": (
        "Optimal wage and profit subsidies and the data-tax neutrality check",
        """\
[scenario]
name = policy-subsidies
experiment = policy

[options]
tax_rates = 0.5, 1, 2
""",
    ),
    "nonrivalry-table": (
        "Resale-proportion roots for market and planner, plus the creative-destruction crossover",
        """\
[scenario]
name = nonrivalry-table
experiment = nonrivalry

[options]
c0_values = 0.2, 4, 14
crossover_lo = 4
crossover_hi = 30
""",
    ),
    "accumulation-check": (
        "Growth of a depreciating data stock converges to the flow's BGP rate",
        """\
[scenario]
name = accumulation-check
experiment = accumulation

[options]
kappa = 0.1
horizon = 500
""",
    ),
}

for _sigma in ("1.5", "2.0", "2.5", "3.0"):
    _name = f"figure2-sigma{_sigma}"
    PRESETS[_name] = (
        f"Transition with and without the data-provision constraint, sigma = {_sigma}",
        _TRANSITION.format(name=_name, sigma=_sigma),
    )


def list_presets() -> list[tuple[str, str]]:
    return [(name, PRESETS[name][0]) for name in sorted(PRESETS)]


def preset_text(name: str) -> str:
    try:
        return PRESETS[name][1]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; try `growthlab list`") from None
