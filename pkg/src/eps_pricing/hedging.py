"""Static hedge of an EPS with vanilla options, hedge costs under several
pricing engines, cash flows after hedging and default-adjusted premiums.

The hedge holds (p_{i+1} - p_i)/S_0 puts struck at S_0(1 + l_i) and
-(f_{j+1} - f_j)/S_0 calls struck at S_0(1 + g_j), so its terminal value
is exactly -psi(R_T).
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .bs_pricing import MarketParams, bs_price, std_normal_cdf
from .default_model import DefaultParams, default_probability, survival_probability
from .eps_payoff import EpsSpec, adjusted_return
from .errors import ConfigError, DomainError, NotApplicableError, ValidationError
from .jump_pricing import (
    JumpParams,
    at_most_one_jump_price,
    exactly_one_jump_price,
    merton_price,
    series_weights,
    term_rate,
    term_vol,
)

BASE_MODELS = ("vanilla", "merton", "exactly_one_jump", "at_most_one_jump")
ENGINE_TAGS = BASE_MODELS + tuple(f"{m}_with_default" for m in BASE_MODELS) + ("random_time",)
JUMP_MODES = ("none", "at_most_one", "exactly_one", "full")
ENGINE_JUMP_MODE = {
    "vanilla": "none",
    "merton": "full",
    "exactly_one_jump": "exactly_one",
    "at_most_one_jump": "at_most_one",
}


@dataclass(frozen=True)
class HedgeLeg:
    kind: str
    strike: float
    quantity: float


@dataclass(frozen=True)
class HedgePortfolio:
    legs: tuple
    spot: float

    def puts(self):
        return tuple(leg for leg in self.legs if leg.kind == "put")


def build_hedge(spec: EpsSpec, spot: float = 100.0) -> HedgePortfolio:
    """Replicating portfolio per unit nominal.

    Costs scale out of ``spot``; it only fixes the strikes in the listing.
    """
    if not spot > 0.0:
        raise ValidationError("spot must be positive")
    legs = []
    prev = 0.0
    for level, rate in zip(spec.protection_levels, spec.protection_rates):
        q = (rate - prev) / spot
        if q != 0.0:
            legs.append(HedgeLeg("put", spot * (1.0 + level), q))
        prev = rate
    prev = 0.0
    for level, rate in zip(spec.fee_levels, spec.fee_rates):
        q = -(rate - prev) / spot
        if q != 0.0:
            legs.append(HedgeLeg("call", spot * (1.0 + level), q))
        prev = rate
    return HedgePortfolio(tuple(legs), float(spot))


def hedge_payoff(port: HedgePortfolio, r_t):
    """H(T) per unit nominal for terminal return(s) r_t."""
    r = np.asarray(r_t, dtype=float)
    if np.any(r <= -1.0):
        raise DomainError("return must exceed -1")
    s_t = port.spot * (1.0 + r)
    total = np.zeros_like(r)
    for leg in port.legs:
        if leg.kind == "put":
            total = total + leg.quantity * np.maximum(leg.strike - s_t, 0.0)
        else:
            total = total + leg.quantity * np.maximum(s_t - leg.strike, 0.0)
    return float(total) if r.ndim == 0 else total


@dataclass(frozen=True)
class Engine:
    """Pricing regime for hedge legs.

    With default discounting, long legs lose value at the counterparty
    intensity and short legs gain at the provider intensity. Only puts
    are exposed unless ``all_legs`` is set (the random-time regime).
    """

    tag: str
    model: str
    mkt: MarketParams
    jumps: JumpParams | None = None
    defaults: DefaultParams | None = None
    all_legs: bool = False

    def base_price(self, kind: str, strike: float) -> float:
        if self.model == "vanilla" or self.jumps is None:
            return bs_price(self.mkt, strike, kind)
        fn = {
            "merton": merton_price,
            "exactly_one_jump": exactly_one_jump_price,
            "at_most_one_jump": at_most_one_jump_price,
        }[self.model]
        return fn(self.mkt, self.jumps, strike, kind)

    def leg_value(self, leg: HedgeLeg) -> float:
        value = leg.quantity * self.base_price(leg.kind, leg.strike)
        if self.defaults is None or (leg.kind == "call" and not self.all_legs):
            return value
        gamma = (self.defaults.gamma_counterparty if leg.quantity > 0.0
                 else self.defaults.gamma_provider)
        return value * survival_probability(gamma, self.mkt.maturity)


def make_engine(tag: str, mkt: MarketParams, jumps: JumpParams | None = None,
                defaults: DefaultParams | None = None) -> Engine:
    if tag not in ENGINE_TAGS:
        raise ConfigError(f"unknown engine {tag!r}; expected one of {', '.join(ENGINE_TAGS)}")
    if tag == "random_time":
        return Engine(tag, "vanilla", mkt, None, defaults or DefaultParams(), True)
    model = tag.removesuffix("_with_default")
    if model != "vanilla" and jumps is None:
        raise ConfigError(f"engine {tag!r} needs jump parameters")
    use_defaults = (defaults or DefaultParams()) if tag.endswith("_with_default") else None
    return Engine(tag, model, mkt, jumps, use_defaults)


def hedge_cost(port: HedgePortfolio, engine: Engine, protection_only: bool = False) -> float:
    """H(0) per unit nominal. ``protection_only`` keeps the put book only."""
    legs = port.puts() if protection_only else port.legs
    return sum((engine.leg_value(leg) for leg in legs), 0.0)


def _accrual(mkt: MarketParams) -> float:
    return math.exp(mkt.rate * mkt.maturity)


def hedged_cash_flow(spec: EpsSpec, port: HedgePortfolio, premium: float, r_t,
                     mkt: MarketParams, h0: float):
    """(c - H(0)) e^{rT} + H(T) + psi(R_T), scaled by the nominal."""
    value = (premium - h0) * _accrual(mkt) + hedge_payoff(port, r_t) + adjusted_return(spec, r_t)
    return spec.nominal * value


def first_protection_level(spec: EpsSpec) -> tuple:
    """(l_hat, p_hat): the upper end of the first loss band with positive rate."""
    for level, rate in zip(spec.protection_levels, spec.protection_rates):
        if rate > 0.0:
            return level, rate
    raise NotApplicableError("product has no positive protection participation")


def defaulted_cash_flow(spec: EpsSpec, port: HedgePortfolio, premium: float, r_t,
                        mkt: MarketParams, h0: float):
    """Cash flow after the put seller defaults: the long puts pay nothing.

    For products with a single long put this equals the hedged cash flow
    with that put removed.
    """
    r = np.asarray(r_t, dtype=float)
    if np.any(r <= -1.0):
        raise DomainError("return must exceed -1")
    value = (premium - h0) * _accrual(mkt)
    if spec.has_protection:
        l_hat, p_hat = first_protection_level(spec)
        value = value - p_hat * np.maximum(l_hat - r, 0.0)
    value = spec.nominal * value
    return float(value) if np.ndim(value) == 0 else value


def conditional_loss_term(mkt: MarketParams, jp: JumpParams | None, n: int,
                          l_hat: float) -> float:
    """e^{r_n T} N((ln(1+l_hat) - (r_n + sigma_n^2/2)T) / (sigma_n sqrt T))."""
    t = mkt.maturity
    if jp is None:
        rn, sn = mkt.rate, mkt.vol
    else:
        rn, sn = term_rate(mkt, jp, n), term_vol(mkt, jp, n)
    d = (math.log1p(l_hat) - (rn + 0.5 * sn * sn) * t) / (sn * math.sqrt(t))
    return math.exp(rn * t) * std_normal_cdf(d)


def default_adjustment(spec: EpsSpec, mkt: MarketParams, jp: JumpParams | None,
                       gamma_c: float, jump_mode: str) -> float:
    """Expected after-hedge default loss term DA.

    Note the severity is the partial expectation E[(S_T/S_0) 1{R_T <= l_hat}]
    rather than the expected shortfall; see the Monte Carlo oracle for both.
    """
    if jump_mode not in JUMP_MODES:
        raise ConfigError(f"jump_mode must be one of {JUMP_MODES}")
    if not spec.has_protection:
        return 0.0
    l_hat, p_hat = first_protection_level(spec)
    if 1.0 + l_hat <= 0.0:
        raise DomainError("1 + l_hat must be positive")
    pd = default_probability(gamma_c, mkt.maturity)
    if jump_mode == "none" or jp is None:
        return pd * p_hat * conditional_loss_term(mkt, None, 0, l_hat)
    lt = jp.intensity * mkt.maturity
    if jump_mode == "exactly_one":
        severity = conditional_loss_term(mkt, jp, 1, l_hat)
    elif jump_mode == "at_most_one":
        severity = (conditional_loss_term(mkt, jp, 0, l_hat)
                    + lt * conditional_loss_term(mkt, jp, 1, l_hat)) / (1.0 + lt)
    else:
        weights = series_weights(lt, jp.n_max, jp.tail_tol)
        severity = sum(float(w) * conditional_loss_term(mkt, jp, n, l_hat)
                       for n, w in enumerate(weights))
    return pd * p_hat * severity


@dataclass(frozen=True)
class PremiumReport:
    engine: str
    hedge_cost: float
    fair_premium: float
    vanilla_premium: float
    default_adjustment: float
    default_adjusted_premium: float
    super_hedging_premium: float
    l_hat: float
    p_hat: float

    def as_dict(self) -> dict:
        return asdict(self)


def premium_report(spec: EpsSpec, mkt: MarketParams, jp: JumpParams | None,
                   defaults: DefaultParams | None, engine: str = "vanilla",
                   spot: float | None = None) -> PremiumReport:
    """Premiums for one engine.

    ``hedge_cost`` is priced under ``engine`` with long puts discounted at
    the counterparty intensity (and short puts at the provider intensity).
    ``vanilla_premium`` is the plain Black-Scholes cost with no default.
    """
    if engine not in BASE_MODELS:
        raise ConfigError(f"premium engine must be one of {BASE_MODELS}")
    defaults = defaults or DefaultParams()
    l_hat, p_hat = first_protection_level(spec)
    port = build_hedge(spec, mkt.spot if spot is None else spot)
    h0 = hedge_cost(port, make_engine(f"{engine}_with_default", mkt, jp, defaults))
    van = hedge_cost(port, make_engine("vanilla", mkt))
    gamma_c = defaults.gamma_counterparty
    da = default_adjustment(spec, mkt, jp, gamma_c, ENGINE_JUMP_MODE[engine])
    disc = math.exp(-mkt.rate * mkt.maturity)
    pd = default_probability(gamma_c, mkt.maturity)
    return PremiumReport(
        engine=engine,
        hedge_cost=h0,
        fair_premium=h0,
        vanilla_premium=van,
        default_adjustment=da,
        default_adjusted_premium=h0 + disc * da,
        super_hedging_premium=h0 + disc * p_hat * (1.0 + l_hat) * pd,
        l_hat=l_hat,
        p_hat=p_hat,
    )
