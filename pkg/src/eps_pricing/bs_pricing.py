"""Black-Scholes prices at time zero."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError, ValidationError

_SQRT2 = math.sqrt(2.0)


@dataclass(frozen=True)
class MarketParams:
    spot: float
    rate: float
    vol: float
    maturity: float

    def __post_init__(self):
        for name in ("spot", "rate", "vol", "maturity"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise ValidationError(f"{name} must be a finite number")
            object.__setattr__(self, name, float(v))
        if self.spot <= 0.0:
            raise ValidationError("spot must be positive")
        if self.vol <= 0.0:
            raise ValidationError("vol must be positive")
        if self.maturity <= 0.0:
            raise ValidationError("maturity must be positive")

    @classmethod
    def from_dict(cls, data: dict) -> "MarketParams":
        missing = [k for k in ("spot", "rate", "vol", "maturity") if k not in data]
        if missing:
            raise ValidationError(f"market section missing keys: {', '.join(missing)}")
        return cls(data["spot"], data["rate"], data["vol"], data["maturity"])

    def to_dict(self) -> dict:
        return {"spot": self.spot, "rate": self.rate, "vol": self.vol, "maturity": self.maturity}


def std_normal_cdf(x: float) -> float:
    """N(x) via erfc, which keeps full relative accuracy in both tails."""
    if not math.isfinite(x):
        raise DomainError("normal cdf needs a finite argument")
    return 0.5 * math.erfc(-x / _SQRT2)


def _check(spot, strike, vol, maturity):
    if not (spot > 0.0 and strike > 0.0 and vol > 0.0 and maturity > 0.0):
        raise DomainError("spot, strike, vol and maturity must all be positive")


def bs_kernel(spot, strike, rate, vol, maturity, kind):
    """Plain Black-Scholes price with explicit parameters.

    Used directly by the jump series, where rate and vol vary per term.
    """
    _check(spot, strike, vol, maturity)
    sd = vol * math.sqrt(maturity)
    d1 = (math.log(spot / strike) + (rate + 0.5 * vol * vol) * maturity) / sd
    d2 = d1 - sd
    disc_k = strike * math.exp(-rate * maturity)
    if kind == "call":
        return spot * std_normal_cdf(d1) - disc_k * std_normal_cdf(d2)
    if kind == "put":
        return disc_k * std_normal_cdf(-d2) - spot * std_normal_cdf(-d1)
    raise ValidationError(f"kind must be 'call' or 'put', got {kind!r}")


def bs_call(mkt: MarketParams, strike: float) -> float:
    return bs_kernel(mkt.spot, strike, mkt.rate, mkt.vol, mkt.maturity, "call")


def bs_put(mkt: MarketParams, strike: float) -> float:
    return bs_kernel(mkt.spot, strike, mkt.rate, mkt.vol, mkt.maturity, "put")


def bs_price(mkt: MarketParams, strike: float, kind: str) -> float:
    return bs_kernel(mkt.spot, strike, mkt.rate, mkt.vol, mkt.maturity, kind)
