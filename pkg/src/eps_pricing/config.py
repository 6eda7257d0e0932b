"""Run configuration for the command-line tool.

A config is one JSON document with optional sections ``market``,
``jump``, ``default``, ``eps`` and ``mc`` plus a few scalar keys.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .bs_pricing import MarketParams
from .default_model import DefaultParams
from .eps_payoff import EpsSpec
from .errors import ConfigError, EpsError
from .jump_pricing import JumpParams

TOP_LEVEL_KEYS = {"market", "jump", "default", "eps", "mc", "engine", "output", "grid",
                  "strikes", "premium", "reference", "compensator_mode", "spot"}


@dataclass(frozen=True)
class RunConfig:
    market: MarketParams | None = None
    jump: JumpParams | None = None
    default: DefaultParams | None = None
    eps: EpsSpec | None = None
    engine: str | None = None
    output: str | None = None
    grid: int = 200
    strikes: tuple = ()
    premium: float | None = None
    mc: dict = field(default_factory=dict)
    reference: str | None = None
    compensator_mode: str = "best"

    def require(self, *sections):
        for name in sections:
            if getattr(self, name) is None:
                raise ConfigError(f"config is missing the '{name}' section")


def _section(data, key, cls):
    if key not in data or data[key] is None:
        return None
    if not isinstance(data[key], dict):
        raise ConfigError(f"section '{key}' must be an object")
    try:
        return cls.from_dict(data[key])
    except EpsError as exc:
        raise ConfigError(f"section '{key}': {exc}") from exc


def parse_config(data: dict) -> RunConfig:
    if not isinstance(data, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(data) - TOP_LEVEL_KEYS
    if unknown:
        raise ConfigError(f"unknown config keys: {', '.join(sorted(unknown))}")
    grid = data.get("grid", 200)
    if not isinstance(grid, int) or grid < 2:
        raise ConfigError("grid must be an integer of at least 2")
    mc = data.get("mc", {})
    if not isinstance(mc, dict):
        raise ConfigError("section 'mc' must be an object")
    market = _section(data, "market", MarketParams)
    strikes = data.get("strikes")
    if strikes is None:
        strikes = [market.spot] if market is not None else []
    try:
        strikes = tuple(float(k) for k in strikes)
    except (TypeError, ValueError) as exc:
        raise ConfigError("strikes must be a list of numbers") from exc
    return RunConfig(
        market=market,
        jump=_section(data, "jump", JumpParams),
        default=_section(data, "default", DefaultParams),
        eps=_section(data, "eps", EpsSpec),
        engine=data.get("engine"),
        output=data.get("output"),
        grid=grid,
        strikes=strikes,
        premium=data.get("premium"),
        mc=mc,
        reference=data.get("reference"),
        compensator_mode=data.get("compensator_mode", "best"),
    )


def load_config(path: str) -> RunConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config is not valid JSON: {exc}") from exc
    return parse_config(data)
