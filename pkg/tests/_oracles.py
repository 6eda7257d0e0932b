"""Independent reference computations for the test suite.

Nothing here imports the package's pricing code. Prices are expectations
of payoffs integrated numerically against the Gaussian law of log S_T,
with jump counts mixed by plain Poisson(lambda T) weights.
"""

import math

from scipy import integrate, stats


def gaussian_cdf(x):
    val, _ = integrate.quad(lambda t: math.exp(-0.5 * t * t) / math.sqrt(2 * math.pi),
                            -40.0, x, epsabs=1e-14, epsrel=1e-13, limit=200)
    return val


def log_moments(spot, rate, vol, maturity, lam=0.0, alpha=0.0, delta=0.0, n=0, exact=True):
    """Mean and variance of log S_T given n jumps."""
    mu_j = -lam * (math.exp(alpha + 0.5 * delta**2) - 1.0) if exact else -lam * alpha
    mean = math.log(spot) + (rate + mu_j - 0.5 * vol**2) * maturity + n * alpha
    var = vol**2 * maturity + n * delta**2
    return mean, var


def expect(fn, mean, var, kinks=()):
    """E[fn(S_T)] for log S_T ~ N(mean, var), by quadrature in log space."""
    sd = math.sqrt(var)
    lo, hi = mean - 12 * sd, mean + 12 * sd
    pts = sorted(p for p in (math.log(k) for k in kinks if k > 0) if lo < p < hi)
    dens = stats.norm(mean, sd).pdf
    val, _ = integrate.quad(lambda x: fn(math.exp(x)) * dens(x), lo, hi, points=pts or None,
                            epsabs=1e-13, epsrel=1e-12, limit=400)
    return val


def option_price(kind, spot, strike, rate, vol, maturity, lam=0.0, alpha=0.0, delta=0.0,
                 weights=None, exact=True):
    """Discounted payoff expectation, mixing over jump counts with ``weights``."""
    if weights is None:
        weights = poisson_weights(lam * maturity)
    if kind == "call":
        pay = lambda s: max(s - strike, 0.0)
    else:
        pay = lambda s: max(strike - s, 0.0)
    total = 0.0
    for n, w in weights.items():
        m, v = log_moments(spot, rate, vol, maturity, lam, alpha, delta, n, exact)
        total += w * expect(pay, m, v, kinks=(strike,))
    return math.exp(-rate * maturity) * total


def poisson_weights(mean, n_max=40):
    return {n: stats.poisson.pmf(n, mean) for n in range(n_max + 1)}


def psi_buffer(r, l1, g1, p2, f2):
    return -p2 * max(l1 - r, 0.0) + f2 * max(r - g1, 0.0)


def psi_floor(r, l1, p1, g1, f2):
    return -p1 * max(-r, 0.0) + p1 * max(l1 - r, 0.0) + f2 * max(r - g1, 0.0)


def psi_floor_cap(r, l1, g1, p1, f1):
    return (-p1 * max(-r, 0.0) + p1 * max(l1 - r, 0.0)
            + f1 * max(r, 0.0) - f1 * max(r - g1, 0.0))


def hedge_value(psi, spot, rate, vol, maturity, kinks):
    """H(0) = e^{-rT} E[-psi(R_T)] under Black-Scholes."""
    m, v = log_moments(spot, rate, vol, maturity)
    val = expect(lambda s: -psi(s / spot - 1.0), m, v, kinks=[spot * (1 + k) for k in kinks])
    return math.exp(-rate * maturity) * val


def partial_growth(spot, rate, vol, maturity, l_hat, lam=0.0, alpha=0.0, delta=0.0,
                   weights=None, exact=True):
    """E[(S_T/S_0) 1{R_T <= l_hat}] mixed over jump counts."""
    if weights is None:
        weights = poisson_weights(lam * maturity)
    cut = spot * (1.0 + l_hat)
    total = 0.0
    for n, w in weights.items():
        m, v = log_moments(spot, rate, vol, maturity, lam, alpha, delta, n, exact)
        total += w * expect(lambda s: (s / spot) * (s <= cut), m, v, kinks=(cut,))
    return total
