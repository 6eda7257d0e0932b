"""Monte Carlo oracle for terminal values, option prices, default
adjustments and after-hedge cash flows.

Only the terminal state matters for every payoff here, so each path draws
(Z, N, Y_1..Y_N, default uniform) and sets
S_T = S_0 exp((r + mu_J - sigma^2/2) T + sigma sqrt(T) Z + sum Y_i).
Default is a Bernoulli(1 - e^{-gamma T}) indicator independent of S_T.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .bs_pricing import MarketParams
from .eps_payoff import EpsSpec
from .errors import ValidationError
from .bs_pricing import bs_price
from .default_model import default_probability
from .hedging import (
    HedgePortfolio,
    conditional_loss_term,
    defaulted_cash_flow,
    first_protection_level,
    hedged_cash_flow,
)
from .jump_pricing import JumpParams, compensator, conditional_n_price, series_weights

CONDITIONINGS = ("unconditional", "exactly_n", "at_most_one")
MAX_POISSON_MEAN = 100.0


@dataclass(frozen=True)
class SimConfig:
    paths: int = 10**6
    seed: int = 0
    conditioning: str = "unconditional"
    n_jumps: int = 0
    antithetic: bool = False
    block_size: int = 1 << 17
    backend: str | None = None

    def __post_init__(self):
        if int(self.paths) != self.paths or self.paths < 1000:
            raise ValidationError("path count must be an integer of at least 1000")
        if not 0 <= int(self.seed) < 2**64:
            raise ValidationError("seed must fit in 64 unsigned bits")
        if self.conditioning not in CONDITIONINGS:
            raise ValidationError(f"conditioning must be one of {CONDITIONINGS}")
        if not 0 <= self.n_jumps <= kernels.MAX_JUMPS:
            raise ValidationError(f"n_jumps must lie in [0, {kernels.MAX_JUMPS}]")
        if self.antithetic and (self.paths % 2 or self.block_size % 2):
            raise ValidationError("antithetic sampling needs even path and block counts")
        if self.block_size < 2:
            raise ValidationError("block_size must be at least 2")


@dataclass(frozen=True)
class Estimate:
    value: float
    stderr: float

    def __iter__(self):
        return iter((self.value, self.stderr))

    def z_score(self, target: float) -> float:
        if self.stderr == 0.0:
            return 0.0 if self.value == target else math.copysign(math.inf, self.value - target)
        return (self.value - target) / self.stderr


@dataclass(frozen=True)
class SimResult:
    spot_t: np.ndarray
    jumps: np.ndarray
    default_uniforms: np.ndarray
    discounted_mean: Estimate
    paths: int
    seed: int
    backend: str


@dataclass(frozen=True)
class DAEstimate:
    growth_weighted: Estimate
    shortfall: Estimate


@dataclass(frozen=True)
class CashFlowSummary:
    mean: Estimate
    quantiles: dict
    minimum: float
    maximum: float
    default_rate: float


def poisson_cdf_table(mean):
    p = math.exp(-mean)
    table = [p]
    for n in range(1, kernels.MAX_JUMPS + 1):
        if table[-1] >= 1.0 - 1e-16:
            break
        p *= mean / n
        table.append(table[-1] + p)
    return np.array(table)


def _blocks(mkt: MarketParams, jp: JumpParams | None, cfg: SimConfig):
    """Yield (log S_T/S_0, jump counts, default uniforms) block by block."""
    jp = jp or JumpParams(0.0, 0.0, 0.0)
    lt = jp.intensity * mkt.maturity
    if lt > MAX_POISSON_MEAN:
        raise ValidationError("lambda T too large for the sampler")
    drift = (mkt.rate + compensator(jp) - 0.5 * mkt.vol**2) * mkt.maturity
    vol = mkt.vol * math.sqrt(mkt.maturity)
    mode = {"unconditional": kernels.MODE_POISSON, "exactly_n": kernels.MODE_FIXED,
            "at_most_one": kernels.MODE_AT_MOST_ONE}[cfg.conditioning]
    table = poisson_cdf_table(lt)
    sampler = kernels.get_sampler(cfg.backend)
    for start in range(0, cfg.paths, cfg.block_size):
        count = min(cfg.block_size, cfg.paths - start)
        yield sampler(int(cfg.seed), start, count, drift, vol, jp.jump_mean, jp.jump_std,
                      mode, table, int(cfg.n_jumps), 1.0 / (1.0 + lt), bool(cfg.antithetic))


class _Moments:
    """Streaming mean and variance (pairwise merge of block moments)."""

    def __init__(self):
        self.n, self.mean, self.m2 = 0, 0.0, 0.0

    def add(self, values):
        k = values.size
        if k == 0:
            return
        mean = float(values.mean())
        m2 = float(((values - mean) ** 2).sum())
        delta = mean - self.mean
        total = self.n + k
        self.mean += delta * k / total
        self.m2 += m2 + delta * delta * self.n * k / total
        self.n = total

    def estimate(self) -> Estimate:
        var = self.m2 / (self.n - 1) if self.n > 1 else 0.0
        return Estimate(self.mean, math.sqrt(max(var, 0.0) / self.n))


def _paired(values, antithetic):
    # antithetic pairs are adjacent; average them so the error bar is honest
    return 0.5 * (values[0::2] + values[1::2]) if antithetic else values


def _estimate(mkt, jp, cfg, fn):
    acc = _Moments()
    for x, n, u_def in _blocks(mkt, jp, cfg):
        acc.add(_paired(fn(x, n, u_def), cfg.antithetic))
    return acc.estimate()


def simulate_terminal(mkt: MarketParams, jp: JumpParams | None, cfg: SimConfig) -> SimResult:
    xs, ns, us = [], [], []
    acc = _Moments()
    disc = math.exp(-mkt.rate * mkt.maturity)
    for x, n, u_def in _blocks(mkt, jp, cfg):
        s_t = mkt.spot * np.exp(x)
        acc.add(_paired(disc * s_t, cfg.antithetic))
        xs.append(s_t)
        ns.append(n)
        us.append(u_def)
    return SimResult(np.concatenate(xs), np.concatenate(ns), np.concatenate(us),
                     acc.estimate(), cfg.paths, int(cfg.seed), cfg.backend or kernels.BACKEND)


def mc_option_price(mkt: MarketParams, jp: JumpParams | None, cfg: SimConfig,
                    strike: float, kind: str) -> Estimate:
    if kind not in ("call", "put"):
        raise ValidationError("kind must be 'call' or 'put'")
    disc = math.exp(-mkt.rate * mkt.maturity)
    sign = 1.0 if kind == "call" else -1.0

    def payoff(x, n, u_def):
        return disc * np.maximum(sign * (mkt.spot * np.exp(x) - strike), 0.0)

    return _estimate(mkt, jp, cfg, payoff)


def _default_mask(u_def, gamma, maturity):
    return u_def < -math.expm1(-gamma * maturity)


def mc_default_adjustment(mkt: MarketParams, jp: JumpParams | None, gamma_c: float,
                          spec: EpsSpec, cfg: SimConfig) -> DAEstimate:
    """Both severities: the partial expectation of S_T/S_0 below l_hat
    (``growth_weighted``) and the expected shortfall (l_hat - R_T)^+ (``shortfall``)."""
    l_hat, p_hat = first_protection_level(spec)
    t = mkt.maturity
    acc_p, acc_s = _Moments(), _Moments()
    for x, n, u_def in _blocks(mkt, jp, cfg):
        hit = _default_mask(u_def, gamma_c, t) * p_hat
        growth = np.exp(x)
        ret = growth - 1.0
        acc_p.add(_paired(hit * growth * (ret <= l_hat), cfg.antithetic))
        acc_s.add(_paired(hit * np.maximum(l_hat - ret, 0.0), cfg.antithetic))
    return DAEstimate(acc_p.estimate(), acc_s.estimate())


QUANTILE_LEVELS = (0.01, 0.05, 0.5, 0.95, 0.99)


def mc_hedged_cashflow_distribution(spec: EpsSpec, port: HedgePortfolio, premium: float,
                                    mkt: MarketParams, jp: JumpParams | None,
                                    gamma_c: float, cfg: SimConfig,
                                    h0: float) -> CashFlowSummary:
    """Terminal cash flow per path: hedged if the put seller survives,
    defaulted otherwise. ``h0`` is the hedge cost actually paid."""
    flows = []
    acc = _Moments()
    defaults = 0
    for x, n, u_def in _blocks(mkt, jp, cfg):
        ret = np.expm1(x)
        hit = _default_mask(u_def, gamma_c, mkt.maturity)
        alive = hedged_cash_flow(spec, port, premium, ret, mkt, h0)
        dead = defaulted_cash_flow(spec, port, premium, ret, mkt, h0)
        cf = np.where(hit, dead, alive)
        acc.add(_paired(cf, cfg.antithetic))
        flows.append(cf)
        defaults += int(hit.sum())
    cf = np.concatenate(flows)
    qs = np.quantile(cf, QUANTILE_LEVELS)
    return CashFlowSummary(acc.estimate(), dict(zip(QUANTILE_LEVELS, map(float, qs))),
                           float(cf.min()), float(cf.max()), defaults / cfg.paths)


def jump_count_weights(mkt: MarketParams, jp: JumpParams | None, cfg: SimConfig) -> dict:
    """Law of the jump count that ``cfg`` simulates, as {n: probability}."""
    lt = 0.0 if jp is None else jp.intensity * mkt.maturity
    if cfg.conditioning == "exactly_n":
        return {cfg.n_jumps: 1.0}
    if cfg.conditioning == "at_most_one":
        return {0: 1.0 / (1.0 + lt), 1: lt / (1.0 + lt)}
    if jp is None:
        return {0: 1.0}
    return dict(enumerate(map(float, series_weights(lt, jp.n_max, jp.tail_tol))))


def matched_option_price(mkt: MarketParams, jp: JumpParams | None, cfg: SimConfig,
                         strike: float, kind: str) -> float:
    """Closed-form expectation of the payoff under the simulated law.

    With the exact compensator this coincides with the series and
    one-jump formulas; with the approximate one it does not.
    """
    if jp is None:
        return bs_price(mkt, strike, kind)
    return sum(w * conditional_n_price(mkt, jp, strike, n, kind)
               for n, w in jump_count_weights(mkt, jp, cfg).items())


def matched_default_adjustment(mkt: MarketParams, jp: JumpParams | None, gamma_c: float,
                               spec: EpsSpec, cfg: SimConfig) -> float:
    l_hat, p_hat = first_protection_level(spec)
    pd = default_probability(gamma_c, mkt.maturity)
    severity = sum(w * conditional_loss_term(mkt, jp, n, l_hat)
                   for n, w in jump_count_weights(mkt, jp, cfg).items())
    return pd * p_hat * severity
