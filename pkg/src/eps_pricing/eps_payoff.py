"""Adjusted-return payoff of a standard equity protection swap.

The provider's cash flow at maturity is psi(R_T), a continuous,
non-decreasing piecewise-linear function of the simple return R_T with
psi(0) = 0. Losses are shared through the protection leg (levels
0 = l_0 > l_1 > ... > l_n with rates p_1..p_{n+1}) and gains through the
fee leg (levels 0 = g_0 < g_1 < ... < g_m with rates f_1..f_{m+1}).
Rate p_{i+1} applies on (l_{i+1}, l_i) and f_{j+1} on (g_j, g_{j+1}); the
last rate of each leg extends to the end of the return axis.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError, ValidationError

KINDS = ("buffer", "floor", "floor_cap", "general")


def _as_tuple(values, name):
    try:
        out = tuple(float(v) for v in values)
    except TypeError as exc:
        raise ValidationError(f"{name} must be a list of numbers") from exc
    if not all(np.isfinite(out)):
        raise ValidationError(f"{name} contains non-finite values")
    return out


@dataclass(frozen=True)
class EpsSpec:
    protection_levels: tuple
    protection_rates: tuple
    fee_levels: tuple
    fee_rates: tuple
    nominal: float = 1.0
    kind: str = "general"
    # cumulative leg values at each level, filled in by __post_init__
    _p_knots: np.ndarray = field(init=False, repr=False, compare=False)
    _f_knots: np.ndarray = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        pl = _as_tuple(self.protection_levels, "protection_levels")
        pr = _as_tuple(self.protection_rates, "protection_rates")
        fl = _as_tuple(self.fee_levels, "fee_levels")
        fr = _as_tuple(self.fee_rates, "fee_rates")
        object.__setattr__(self, "protection_levels", pl)
        object.__setattr__(self, "protection_rates", pr)
        object.__setattr__(self, "fee_levels", fl)
        object.__setattr__(self, "fee_rates", fr)
        object.__setattr__(self, "nominal", float(self.nominal))

        if self.kind not in KINDS:
            raise ValidationError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not pl or pl[0] != 0.0:
            raise ValidationError("protection_levels must start at 0")
        if not fl or fl[0] != 0.0:
            raise ValidationError("fee_levels must start at 0")
        if len(pr) != len(pl):
            raise ValidationError("need one protection rate per protection level")
        if len(fr) != len(fl):
            raise ValidationError("need one fee rate per fee level")
        if any(b >= a for a, b in zip(pl, pl[1:])):
            raise ValidationError("protection_levels must be strictly decreasing")
        if any(b <= a for a, b in zip(fl, fl[1:])):
            raise ValidationError("fee_levels must be strictly increasing")
        if pl[-1] <= -1.0:
            raise ValidationError("protection levels must exceed -1")
        if any(not 0.0 <= x <= 1.0 for x in pr + fr):
            raise ValidationError("participation rates must lie in [0, 1]")
        if not self.nominal > 0.0:
            raise ValidationError("nominal must be positive")

        # Leg value at each knot: psi^p(l_i) = sum_{k<i} p_{k+1} (l_{k+1} - l_k).
        lv = np.asarray(pl)
        pk = np.concatenate(([0.0], np.cumsum(np.asarray(pr[:-1]) * np.diff(lv))))
        gv = np.asarray(fl)
        fk = np.concatenate(([0.0], np.cumsum(np.asarray(fr[:-1]) * np.diff(gv))))
        object.__setattr__(self, "_p_knots", pk)
        object.__setattr__(self, "_f_knots", fk)
        self._check_kind()

    def _check_kind(self):
        pr, fr = self.protection_rates, self.fee_rates
        two = len(pr) == 2 and len(fr) == 2
        if self.kind == "buffer" and not (two and pr[0] == 0.0 and fr[0] == 0.0):
            raise ValidationError("buffer needs one level per leg and p_1 = f_1 = 0")
        if self.kind == "floor" and not (two and pr[1] == 0.0 and fr[0] == 0.0):
            raise ValidationError("floor needs one level per leg, p_2 = 0 and f_1 = 0")
        if self.kind == "floor_cap" and not (two and pr[1] == 0.0 and fr[1] == 0.0):
            raise ValidationError("floor_cap needs one level per leg and p_2 = f_2 = 0")

    @property
    def has_protection(self) -> bool:
        return any(p > 0.0 for p in self.protection_rates)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "protection_levels": list(self.protection_levels),
            "protection_rates": list(self.protection_rates),
            "fee_levels": list(self.fee_levels),
            "fee_rates": list(self.fee_rates),
            "nominal": self.nominal,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "EpsSpec":
        required = ("protection_levels", "protection_rates", "fee_levels", "fee_rates")
        missing = [k for k in required if k not in data]
        if missing:
            raise ValidationError(f"eps section missing keys: {', '.join(missing)}")
        unknown = set(data) - set(required) - {"nominal", "kind"}
        if unknown:
            raise ValidationError(f"unknown eps keys: {', '.join(sorted(unknown))}")
        return cls(
            protection_levels=data["protection_levels"],
            protection_rates=data["protection_rates"],
            fee_levels=data["fee_levels"],
            fee_rates=data["fee_rates"],
            nominal=data.get("nominal", 1.0),
            kind=data.get("kind", "general"),
        )


def _check_return(r_t):
    r = np.asarray(r_t, dtype=float)
    if np.any(~np.isfinite(r)):
        raise DomainError("return must be finite")
    if np.any(r <= -1.0):
        raise DomainError("return must exceed -1")
    return r


def _out(r, values):
    return float(values) if r.ndim == 0 else values


def _protection(spec, r):
    # levels are decreasing; flip them so searchsorted can locate the segment
    lv = np.asarray(spec.protection_levels)
    rates = np.asarray(spec.protection_rates)
    i = len(lv) - np.searchsorted(lv[::-1], r, side="left")
    i = np.clip(i - 1, 0, len(lv) - 1)
    val = spec._p_knots[i] + rates[i] * (r - lv[i])
    return np.where(r < 0.0, val, 0.0)


def _fee(spec, r):
    gv = np.asarray(spec.fee_levels)
    rates = np.asarray(spec.fee_rates)
    j = np.clip(np.searchsorted(gv, r, side="right") - 1, 0, len(gv) - 1)
    val = spec._f_knots[j] + rates[j] * (r - gv[j])
    return np.where(r > 0.0, val, 0.0)


def protection_leg(spec: EpsSpec, r_t):
    """psi^p(r_t), the loss-sharing part of the payoff (never positive)."""
    r = _check_return(r_t)
    return _out(r, _protection(spec, r))


def fee_leg(spec: EpsSpec, r_t):
    """psi^f(r_t), the gain-sharing part of the payoff (never negative)."""
    r = _check_return(r_t)
    return _out(r, _fee(spec, r))


def adjusted_return(spec: EpsSpec, r_t):
    """psi(r_t) per unit nominal. Accepts a scalar or an array of returns."""
    r = _check_return(r_t)
    return _out(r, _protection(spec, r) + _fee(spec, r))


def _check_rate(x, name):
    if not 0.0 < x <= 1.0:
        raise ValidationError(f"{name} must lie in (0, 1]")


def _check_levels(l_1, g_1):
    if not -1.0 < l_1 < 0.0:
        raise ValidationError("l_1 must lie in (-1, 0)")
    if not g_1 > 0.0:
        raise ValidationError("g_1 must be positive")


def make_buffer(l_1, g_1, p_2, f_2, nominal=1.0) -> EpsSpec:
    """Buffer product: no protection until l_1, no fee until g_1."""
    _check_levels(l_1, g_1)
    _check_rate(p_2, "p_2")
    _check_rate(f_2, "f_2")
    return EpsSpec((0.0, l_1), (0.0, p_2), (0.0, g_1), (0.0, f_2), nominal, "buffer")


def make_floor(l_1, p_1, g_1, f_2, nominal=1.0) -> EpsSpec:
    """Floor product: protection from 0 down to l_1, buffered fee above g_1."""
    _check_levels(l_1, g_1)
    _check_rate(p_1, "p_1")
    _check_rate(f_2, "f_2")
    return EpsSpec((0.0, l_1), (p_1, 0.0), (0.0, g_1), (0.0, f_2), nominal, "floor")


def make_floor_cap(l_1, g_1, p_1, f_1, nominal=1.0) -> EpsSpec:
    """Floor-cap product: protection floored at l_1, fee capped at g_1."""
    _check_levels(l_1, g_1)
    _check_rate(p_1, "p_1")
    _check_rate(f_1, "f_1")
    return EpsSpec((0.0, l_1), (p_1, 0.0), (0.0, g_1), (f_1, 0.0), nominal, "floor_cap")
