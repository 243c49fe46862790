import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from growthlab import (
    ModelParams,
    bgp_decentralized,
    data_tax_neutrality_check,
    labor_share_decentralized,
    labor_share_planner,
    optimal_labor_subsidy,
    optimal_profit_subsidy,
    validate_params,
)
from growthlab.policy import policy_report, required_tax_growth, taxed_growth_rates, theta_subsidized

from oracles import DEFAULTS, bgp as exact_bgp, unscaled_wage_subsidy

P = ModelParams()


def test_unscaled_rate_matches_exact_oracle():
    tau = optimal_labor_subsidy(P, "unscaled").tau_labor
    assert tau == pytest.approx(float(unscaled_wage_subsidy(**DEFAULTS)), abs=1e-15)
    assert tau == pytest.approx(0.116519, abs=1e-6)


def test_share_matching_rate_equalizes_shares():
    ex = exact_bgp(**DEFAULTS)
    rates = optimal_labor_subsidy(P)
    assert rates.valid and 0 < rates.tau_labor < 1
    assert rates.tau_labor == pytest.approx(float(ex["theta_s"] / ex["theta_d"]), abs=1e-15)
    assert theta_subsidized(P, rates.tau_labor) == pytest.approx(labor_share_planner(P).theta_aux, abs=1e-10)


def test_unscaled_rate_misses_planner_share_by_xi():
    tau = optimal_labor_subsidy(P, "unscaled").tau_labor
    th_s = labor_share_planner(P).theta_aux
    assert theta_subsidized(P, tau) == pytest.approx(P.xi * th_s, rel=1e-12)


def test_subsidized_theta_is_scaled_market_theta():
    assert theta_subsidized(P, 0.4) == pytest.approx(0.4 * labor_share_decentralized(P).theta_aux, rel=1e-13)


def test_profit_subsidy_reciprocal():
    lab, prof = optimal_labor_subsidy(P), optimal_profit_subsidy(P)
    assert prof.valid and prof.tau_profit > 1
    assert lab.tau_labor * prof.tau_profit == pytest.approx(1.0, abs=1e-12)
    pub = optimal_profit_subsidy(P, "unscaled").tau_profit
    assert pub == pytest.approx(8.5823, abs=1e-4)


def test_report_row():
    row = policy_report(P)
    assert row["share_gap_after_subsidy"] == pytest.approx(0.0, abs=1e-12)


@st.composite
def feasible(draw):
    xi = draw(st.floats(0.2, 0.8))
    q = P.replace(xi=xi, sigma=draw(st.floats(1.1, 3.0)), gamma=draw(st.floats(1.05, 4.0)),
                  zeta=draw(st.floats(0.3, 0.95)), beta=draw(st.floats(0.2, 0.8)))
    assume(validate_params(q).valid)
    return q


@settings(max_examples=100, deadline=None)
@given(feasible())
def test_reciprocity_over_random_sample(q):
    lab, prof = optimal_labor_subsidy(q), optimal_profit_subsidy(q)
    assert lab.tau_labor * prof.tau_profit == pytest.approx(1.0, abs=1e-12)
    assert theta_subsidized(q, lab.tau_labor) == pytest.approx(labor_share_planner(q).theta_aux, rel=1e-10, abs=1e-10)


def test_data_tax_neutrality():
    rep = data_tax_neutrality_check(P, [0.5, 1.0, 2.0])
    assert rep.max_deviation <= 1e-12
    assert len(rep.rows) == 3
    assert abs(rep.required_tax_growth) <= 1e-15


def test_growing_tax_shifts_growth():
    g0, _ = taxed_growth_rates(P, 0.0)
    g1, _ = taxed_growth_rates(P, 0.01)
    assert g0 == pytest.approx(bgp_decentralized(P).g_star, abs=1e-15)
    assert abs(g1 - g0) > 1e-4


def test_bad_variant():
    with pytest.raises(ValueError):
        optimal_labor_subsidy(P, "nope")


def test_required_tax_growth_zero_everywhere():
    for sigma in (1.5, 2.0, 3.0):
        assert abs(required_tax_growth(P.replace(sigma=sigma))) < 1e-15
