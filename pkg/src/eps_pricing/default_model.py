"""Independent random-time default with zero recovery.

A claim paying X_T only if no default occurs before T is worth
e^{-Gamma(T)} times its default-free value, where Gamma is the integrated
intensity. Intensities are constants or piecewise-constant schedules.
"""

from __future__ import annotations

import bisect
import math
from dataclasses import dataclass

from .errors import DomainError, ValidationError


@dataclass(frozen=True)
class DefaultParams:
    gamma_counterparty: float = 0.0
    gamma_provider: float = 0.0

    def __post_init__(self):
        for name in ("gamma_counterparty", "gamma_provider"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v) or v < 0.0:
                raise ValidationError(f"{name} must be a finite non-negative number")
            object.__setattr__(self, name, float(v))

    @classmethod
    def from_dict(cls, data: dict) -> "DefaultParams":
        unknown = set(data) - {"gamma_counterparty", "gamma_provider"}
        if unknown:
            raise ValidationError(f"unknown default keys: {', '.join(sorted(unknown))}")
        return cls(data.get("gamma_counterparty", 0.0), data.get("gamma_provider", 0.0))

    def to_dict(self) -> dict:
        return {"gamma_counterparty": self.gamma_counterparty,
                "gamma_provider": self.gamma_provider}


@dataclass(frozen=True)
class IntensitySchedule:
    """Piecewise-constant intensity: rates[i] applies on (times[i-1], times[i]].

    The last rate continues past the final breakpoint.
    """

    times: tuple
    rates: tuple

    def __post_init__(self):
        times = tuple(float(t) for t in self.times)
        rates = tuple(float(g) for g in self.rates)
        if len(rates) != len(times):
            raise ValidationError("need one rate per breakpoint")
        if not times or any(b <= a for a, b in zip((0.0,) + times, times)):
            raise ValidationError("breakpoints must be positive and increasing")
        if any(not math.isfinite(g) or g < 0.0 for g in rates):
            raise ValidationError("intensities must be non-negative")
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "rates", rates)

    def integrated(self, t: float) -> float:
        total, prev = 0.0, 0.0
        i = bisect.bisect_left(self.times, t)
        for k in range(min(i, len(self.times))):
            total += self.rates[k] * (self.times[k] - prev)
            prev = self.times[k]
        last = self.rates[min(i, len(self.rates) - 1)]
        return total + last * (t - prev)


def _hazard(gamma, t):
    if not math.isfinite(t) or t < 0.0:
        raise DomainError("time must be finite and non-negative")
    if isinstance(gamma, IntensitySchedule):
        return gamma.integrated(t)
    if not math.isfinite(gamma) or gamma < 0.0:
        raise DomainError("intensity must be finite and non-negative")
    return gamma * t


def survival_probability(gamma, t: float) -> float:
    """P(tau > t). ``gamma`` is a constant intensity or an IntensitySchedule."""
    return math.exp(-_hazard(gamma, t))


def default_probability(gamma, maturity: float) -> float:
    return -math.expm1(-_hazard(gamma, maturity))


def defaultable_price(base_price: float, gamma, maturity: float) -> float:
    if not math.isfinite(base_price) or base_price < 0.0:
        raise DomainError("base price must be finite and non-negative")
    return survival_probability(gamma, maturity) * base_price
