import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from growthlab import DomainError, ModelParams, bgp_levels, validate_params
from growthlab.params import zeta_upper_bound

P = ModelParams()


def test_defaults_are_valid():
    rep = validate_params(P)
    assert rep.valid and rep.violated_conditions == ()


def test_low_curvature_existence_condition():
    rep = validate_params(P.replace(gamma=0.5, zeta=0.99))
    assert not rep.valid
    (v,) = [v for v in rep.violated_conditions if v.name == "existence_gamma_lt_1"]
    assert v.bound == pytest.approx(0.5, abs=1e-15)


def test_zero_spillover_rejected():
    assert not validate_params(P.replace(zeta=0.0)).valid


def test_range_violations_are_named():
    rep = validate_params(P.replace(rho=0.01, xi=1.2, sigma=0.9))
    names = set(rep.names())
    assert {"rho_gt_n", "xi_in_unit_interval", "sigma_gt_1"} <= names
    assert rep.valid is (len(rep.violated_conditions) == 0)


def test_processing_cost_exponent_checked_only_with_cost():
    assert validate_params(P.replace(phi_cost=0.5)).valid
    assert "phi_cost_gt_1" in validate_params(P.replace(theta=1.0, phi_cost=0.5)).names()


def test_planner_bound_is_reported_as_flag():
    q = P.replace(gamma=0.5, zeta=0.8, xi=0.5, sigma=1.5)
    rep = validate_params(q)
    assert [f.name for f in rep.flags] == ["planner_growth_bound"]
    assert "planner_growth_bound" not in rep.names()


@settings(max_examples=300, deadline=None)
@given(st.floats(0.01, 0.99), st.floats(0.01, 0.99), st.floats(0.01, 0.99), st.floats(1.01, 5.0),
       st.floats(0.001, 0.05), st.floats(1e-4, 0.1))
def test_existence_condition_implies_planner_bound(gamma, zeta, xi, sigma, n, gap):
    rep = validate_params(P.replace(gamma=gamma, zeta=zeta, xi=xi, sigma=sigma, n=n, rho=n + gap))
    if rep.valid:
        assert rep.flags == ()


@settings(max_examples=200, deadline=None)
@given(st.floats(0.01, 0.98), st.floats(0.01, 0.98), st.floats(0.2, 4.0))
def test_validation_monotone_in_zeta(z1, z2, gamma):
    lo, hi = sorted((z1, z2))
    if validate_params(P.replace(gamma=gamma, zeta=hi)).valid:
        assert validate_params(P.replace(gamma=gamma, zeta=lo)).valid


def test_zeta_upper_bound_default():
    assert zeta_upper_bound(P) == pytest.approx(1 - (0.5 / 1.5) * (1 - 2.5))


def test_level_formulas():
    lv = bgp_levels(P, N=2.0, L_E=1.0, r_star=0.1)
    assert lv.p_x == pytest.approx(1.0, abs=1e-15)
    q = P.replace(beta=2 / 3, psi=1 / 3)
    assert bgp_levels(q, 1.0, 1.0, 0.1).x_per_variety == pytest.approx((1 / 3) ** 1.5, rel=1e-12)
    assert lv.V == pytest.approx(lv.pi / (0.1 - P.n))


@settings(max_examples=100, deadline=None)
@given(st.floats(0.1, 0.9), st.floats(0.05, 2.0), st.floats(0.1, 10.0), st.floats(0.1, 10.0))
def test_level_identities(beta, psi, N, L_E):
    q = P.replace(beta=beta, psi=psi)
    lv = bgp_levels(q, N, L_E, 0.1)
    w_slope = lv.w / N
    assert lv.Y == pytest.approx(w_slope * L_E / beta * N, rel=1e-10)
    assert lv.pi == pytest.approx((1 - beta) * lv.w * L_E / N, rel=1e-10)
    assert lv.Y / (N * L_E) == pytest.approx(bgp_levels(q, 1.0, 1.0, 0.1).Y, rel=1e-10)
    assert lv.p_x == pytest.approx(psi / (1 - beta))


def test_patent_value_requires_rate_above_growth():
    with pytest.raises(DomainError):
        bgp_levels(P, 1.0, 1.0, r_star=P.n)


def test_dict_round_trip():
    q = P.replace(s=math.inf, sigma=2.0)
    assert ModelParams.from_dict(q.to_dict()) == q
    with pytest.raises(KeyError):
        ModelParams.from_dict({"bogus": 1})
