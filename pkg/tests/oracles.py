"""Exact-rational reference evaluations used as independent test oracles."""

from fractions import Fraction as F

DEFAULTS = dict(n=F(1, 50), rho=F(3, 100), gamma=F(5, 2), sigma=F(3, 2), xi=F(1, 2), zeta=F(17, 20), beta=F(2, 3))


def bgp(n, rho, gamma, sigma, xi, zeta, beta):
    den = (1 - zeta) * sigma - xi * (1 - gamma)
    g = sigma * n / den
    g_phi = (1 - gamma) * n / den
    g_mu = (sigma * (1 - zeta) - xi) / xi * g - sigma / xi * n
    theta_d = (g * gamma + rho - n) / (g * (1 - xi) * (1 - beta))
    theta_s = ((sigma - xi) * n + xi * rho) / (xi * (1 - xi) * g) - (sigma - xi) * (1 - zeta) / (xi * (1 - xi))
    return {
        "g": g,
        "g_phi": g_phi,
        "g_mu": g_mu,
        "theta_d": theta_d,
        "theta_s": theta_s,
        "s_d": 1 / (1 + theta_d),
        "s_s": 1 / (1 + theta_s),
        "bound": (n + xi * rho / (sigma - xi)) / (1 - zeta),
    }


def unscaled_wage_subsidy(n, rho, gamma, sigma, xi, zeta, beta):
    g = bgp(n, rho, gamma, sigma, xi, zeta, beta)["g"]
    return (1 - beta) * ((sigma - xi) * n + xi * rho - (sigma - xi) * (1 - zeta) * g) / (gamma * g + rho - n)


def firm_owned(n, xi, zeta, phi_cost):
    den = phi_cost * (1 - zeta) - xi
    return (xi + phi_cost) * n / den, (2 - zeta) * n / den
