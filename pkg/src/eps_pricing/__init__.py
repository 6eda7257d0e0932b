"""Pricing and static hedging of equity protection swaps under Merton
jumps and independent counterparty default, with a Monte Carlo oracle."""

from .bs_pricing import MarketParams, bs_call, bs_price, bs_put, std_normal_cdf
from .default_model import (
    DefaultParams,
    IntensitySchedule,
    default_probability,
    defaultable_price,
    survival_probability,
)
from .eps_payoff import (
    EpsSpec,
    adjusted_return,
    fee_leg,
    make_buffer,
    make_floor,
    make_floor_cap,
    protection_leg,
)
from .errors import (
    ConfigError,
    DomainError,
    EpsError,
    NotApplicableError,
    NumericalError,
    ValidationError,
)
from .hedging import (
    HedgeLeg,
    HedgePortfolio,
    PremiumReport,
    build_hedge,
    default_adjustment,
    defaulted_cash_flow,
    first_protection_level,
    hedge_cost,
    hedge_payoff,
    hedged_cash_flow,
    make_engine,
    premium_report,
)
from .jump_pricing import (
    NO_JUMPS,
    JumpParams,
    at_most_one_jump_price,
    characteristic_function,
    compensator,
    conditional_n_price,
    exactly_one_jump_price,
    merton_price,
    parity_gap,
    series_weights,
    terminal_mean,
)
from .mc_oracle import (
    SimConfig,
    matched_default_adjustment,
    matched_option_price,
    mc_default_adjustment,
    mc_hedged_cashflow_distribution,
    mc_option_price,
    simulate_terminal,
)

__version__ = "0.1.0"
