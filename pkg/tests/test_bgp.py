import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from growthlab import (
    DomainError,
    ModelParams,
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
from growthlab.bgp import gap_monotonicity, grid_values, misallocation_cell

from oracles import DEFAULTS, bgp as exact_bgp, firm_owned

EXACT = exact_bgp(**DEFAULTS)
P = ModelParams()


def test_decentralized_rates_match_exact_oracle():
    sol = bgp_decentralized(P)
    assert sol.g_star == pytest.approx(float(EXACT["g"]), abs=1e-15)
    assert sol.g_phi_star == pytest.approx(float(EXACT["g_phi"]), abs=1e-15)
    assert sol.g_mu_star == pytest.approx(float(EXACT["g_mu"]), abs=1e-15)
    assert sol.r_star == pytest.approx(float(DEFAULTS["gamma"] * EXACT["g"] + DEFAULTS["rho"]), abs=1e-15)
    assert sol.regime is Regime.DECENTRALIZED


def test_frozen_default_values():
    sol = bgp_decentralized(P)
    assert sol.g_star == pytest.approx(0.0307692, abs=1e-7)
    assert sol.g_phi_star == pytest.approx(-0.0307692, abs=1e-7)
    assert sol.g_mu_star == pytest.approx(-0.0769231, abs=1e-7)


def test_zero_population_growth_gives_zero_rates():
    sol = bgp_decentralized(P.replace(n=0.0))
    assert sol.g_star == 0.0 and sol.g_phi_star == 0.0
    assert labor_share_decentralized(P.replace(n=0.0)).s_rd == 0.0


def test_unit_curvature_limit():
    g = bgp_decentralized(P.replace(gamma=1.0 + 1e-6)).g_star
    assert abs(g - 0.02 / 0.15) < 1e-6


def test_negative_denominator_raises():
    with pytest.raises(DomainError):
        bgp_decentralized(P.replace(zeta=0.999, gamma=0.1, sigma=1.01))


def test_planner_rates_and_bound():
    sol = bgp_planner(P)
    dec = bgp_decentralized(P)
    assert (sol.g_star, sol.g_phi_star, sol.g_mu_star) == (dec.g_star, dec.g_phi_star, dec.g_mu_star)
    assert sol.growth_bound == pytest.approx(float(EXACT["bound"]), rel=1e-14)
    assert sol.growth_bound == pytest.approx(0.23333, abs=1e-5)
    assert not sol.constraint_binding


def test_planner_bound_diverges_as_sigma_approaches_xi():
    sol = bgp_planner(P.replace(sigma=0.5 + 1e-9, xi=0.5))
    assert sol.growth_bound > 1e6
    assert math.isfinite(sol.g_star)


def test_labor_shares_match_exact_oracle():
    sd, ss = labor_share_decentralized(P), labor_share_planner(P)
    assert sd.theta_aux == pytest.approx(float(EXACT["theta_d"]), rel=1e-13)
    assert ss.theta_aux == pytest.approx(float(EXACT["theta_s"]), rel=1e-13)
    assert sd.s_rd == pytest.approx(0.05571, abs=1e-5)
    assert ss.s_rd == pytest.approx(0.20202, abs=1e-5)
    assert ss.s_rd > sd.s_rd


def test_share_ignores_innovation_efficiency():
    assert labor_share_decentralized(P.replace(eta=2.0)).s_rd == labor_share_decentralized(P).s_rd


def test_overuse_ratio_defaults():
    r = data_overuse_ratio(P)
    exact = EXACT["s_s"] / EXACT["s_d"]  # exponent is one at xi = 1/2
    assert r == pytest.approx(float(exact), rel=1e-13)
    assert r == pytest.approx(3.626, abs=1e-3)


def test_misallocation_cell_values():
    assert misallocation_cell(P, 0.5, 0.85, 1.5).gap == pytest.approx(0.14631, abs=1e-5)
    assert misallocation_cell(P, 0.5, 0.85, 2.5).gap == pytest.approx(0.15289, abs=1e-5)


def test_grid_empty_and_flags():
    assert misallocation_grid(P, [], [0.5], [1.5]) == []
    cells = misallocation_grid(P, [0.5], [0.0, 0.85], [1.5])
    assert [c.feasible for c in cells] == [False, True]
    assert "zeta_in_unit_interval" in cells[0].violations


def test_grid_values_inclusive():
    assert grid_values(0.3, 0.8, 0.05) == [round(0.3 + 0.05 * i, 12) for i in range(11)]


def test_gap_increases_with_sigma_over_region():
    xs, zs = grid_values(0.4, 0.7, 0.05), grid_values(0.6, 0.9, 0.05)
    cells = misallocation_grid(P, xs, zs, [1.5, 2.0, 2.5])
    assert all(c.feasible for c in cells)
    assert gap_monotonicity(cells).increasing_in_sigma == 1.0
    assert all(c.overuse_ratio > 1 for c in cells)


def test_labor_income_share():
    assert labor_income_share(P, 0.05571) == pytest.approx(17.95, abs=5e-3)
    assert labor_income_share(P, 1.0) == pytest.approx(1.0)
    vals = labor_income_share(P, np.linspace(0.01, 1, 50))
    assert np.all(np.diff(vals) < 0)
    with pytest.raises(DomainError):
        labor_income_share(P, 0.0)


def test_firm_ownership_exact():
    q = P.replace(theta=1.0, phi_cost=4.0)
    sol = bgp_firm_ownership(q)
    g, gp = firm_owned(Fraction(1, 50), Fraction(1, 2), Fraction(17, 20), 4)
    assert abs(sol.g_star - float(g)) <= 1e-12 and abs(sol.g_phi_star - float(gp)) <= 1e-12
    assert sol.g_star > sol.g_phi_star > 0
    assert sol.regime is Regime.FIRM_OWNED


def test_firm_ownership_infeasible_and_constrained():
    bad = bgp_firm_ownership(P.replace(theta=1.0, phi_cost=2.0))
    assert not bad.feasible
    # 2 - zeta > xi + phi_cost triggers the constrained branch
    con = bgp_firm_ownership(P.replace(theta=1.0, phi_cost=1.1, zeta=0.3, xi=0.4))
    assert con.regime is Regime.FIRM_OWNED_CONSTRAINED
    assert con.g_star == con.g_phi_star == pytest.approx(0.02 / 0.3)


def test_consumer_constrained_cases():
    assert not bgp_consumer_constrained(P).feasible
    q = P.replace(zeta=0.3, xi=0.4, s=-0.05)
    sol = bgp_consumer_constrained(q)
    assert sol.constraint_binding and sol.g_star == pytest.approx(0.0, abs=1e-15)
    assert sol.g_phi_star == pytest.approx(sol.g_star + q.s)
    loose = P.replace(zeta=0.3, xi=0.4, s=0.5)
    assert bgp_consumer_constrained(loose) == bgp_decentralized(loose)


@st.composite
def valid_params(draw):
    xi = draw(st.floats(0.2, 0.8))
    sigma = draw(st.floats(1.1, 3.0))
    gamma = draw(st.floats(1.05, 4.0))
    zeta = draw(st.floats(0.05, 0.95))
    n = draw(st.floats(0.005, 0.04))
    rho = n + draw(st.floats(0.002, 0.05))
    return P.replace(xi=xi, sigma=sigma, gamma=gamma, zeta=zeta, n=n, rho=rho)


@settings(max_examples=200, deadline=None)
@given(valid_params())
def test_free_entry_identity_holds(p):
    for sol in (bgp_decentralized(p), bgp_planner(p)):
        assert abs(sol.identity_residual(p)) <= 1e-12 * max(1.0, abs(sol.g_star))
        assert sol.g_star > 0 and sol.g_phi_star < 0


@settings(max_examples=200, deadline=None)
@given(valid_params())
def test_shares_are_fractions(p):
    sd = labor_share_decentralized(p)
    assert 0 < sd.s_rd < 1
    assert sd.s_rd == pytest.approx(1 / (1 + sd.theta_aux))
