"""Command-line front end.

Every subcommand prints a table rounded to four decimals and, with
``--out``, writes the same rows as CSV at full precision.

Exit codes: 0 success, 1 tolerance failure, 2 configuration error,
3 numerical error.
"""

from __future__ import annotations

import argparse
import csv
import math
import sys

import numpy as np

from . import kernels
from .bs_pricing import bs_price
from .default_model import DefaultParams, defaultable_price
from .eps_payoff import adjusted_return, fee_leg, protection_leg
from .errors import ConfigError, DomainError, EpsError, NotApplicableError, NumericalError
from .hedging import (
    ENGINE_TAGS,
    build_hedge,
    defaulted_cash_flow,
    hedge_cost,
    hedge_payoff,
    hedged_cash_flow,
    make_engine,
    premium_report,
)
from .jump_pricing import at_most_one_jump_price, exactly_one_jump_price, merton_price
from .config import RunConfig, load_config, parse_config
from .mc_oracle import (
    SimConfig,
    matched_default_adjustment,
    matched_option_price,
    mc_default_adjustment,
    mc_option_price,
    simulate_terminal,
)
from . import tables

EXIT_OK, EXIT_TOLERANCE, EXIT_CONFIG, EXIT_NUMERICAL = 0, 1, 2, 3


class Result:
    def __init__(self, fields, rows, code=EXIT_OK, notes=()):
        self.fields = fields
        self.rows = rows
        self.code = code
        self.notes = list(notes)


# ---- price ---------------------------------------------------------------

_PRICE_ENGINES = {
    "exactly_one_jump": exactly_one_jump_price,
    "at_most_one_jump": at_most_one_jump_price,
    "merton": merton_price,
}


def cmd_price(cfg: RunConfig, engine: str | None = None) -> Result:
    cfg.require("market")
    mkt = cfg.market
    engines = ["vanilla"]
    if cfg.jump is not None:
        engines += list(_PRICE_ENGINES)
    if cfg.default is not None:
        engines.append("vanilla_with_default")
    if engine is not None:
        if engine not in engines:
            raise ConfigError(f"engine {engine!r} not available for this config")
        engines = [engine]
    rows = []
    for tag in engines:
        for kind in ("call", "put"):
            for strike in cfg.strikes:
                if tag == "vanilla":
                    value = bs_price(mkt, strike, kind)
                elif tag == "vanilla_with_default":
                    value = defaultable_price(bs_price(mkt, strike, kind),
                                              cfg.default.gamma_counterparty, mkt.maturity)
                else:
                    value = _PRICE_ENGINES[tag](mkt, cfg.jump, strike, kind)
                rows.append({"engine": tag, "kind": kind, "strike": strike, "price": value})
    return Result(["engine", "kind", "strike", "price"], rows)


# ---- hedge ---------------------------------------------------------------

_HEDGE_COLUMNS = (("van", "vanilla"), ("le1j", "at_most_one_jump"),
                  ("1j", "exactly_one_jump"), ("jd", "merton"))


def _rt_defaults(cfg):
    if cfg.default is not None:
        return cfg.default
    if cfg.jump is not None:
        lam = cfg.jump.intensity
        return DefaultParams(lam, lam)
    return None


def cmd_hedge(cfg: RunConfig, engine: str | None = None,
              protection_only: bool = False) -> Result:
    cfg.require("market", "eps")
    mkt = cfg.market
    port = build_hedge(cfg.eps, mkt.spot)
    rows = [{"section": "leg", "name": leg.kind, "strike": leg.strike,
             "quantity": leg.quantity, "value": math.nan} for leg in port.legs]
    costs = []
    for name, tag in _HEDGE_COLUMNS:
        if tag == "vanilla" or cfg.jump is not None:
            costs.append((name, make_engine(tag, mkt, cfg.jump)))
    rt = _rt_defaults(cfg)
    if rt is not None:
        costs.append(("rt", make_engine("random_time", mkt, None, rt)))
    if engine is not None:
        costs.append((engine, make_engine(engine, mkt, cfg.jump, cfg.default)))
    for name, eng in costs:
        rows.append({"section": "cost", "name": name, "strike": math.nan,
                     "quantity": math.nan, "value": hedge_cost(port, eng, protection_only)})
    notes = ["protection leg only (diagnostic)"] if protection_only else []
    return Result(["section", "name", "strike", "quantity", "value"], rows, notes=notes)


# ---- premium -------------------------------------------------------------

_PREMIUM_FIELDS = ["engine", "fair_premium", "vanilla_premium", "default_adjustment",
                   "default_adjusted_premium", "super_hedging_premium", "l_hat", "p_hat"]


def cmd_premium(cfg: RunConfig, engine: str | None = None) -> Result:
    cfg.require("market", "eps")
    if not cfg.eps.has_protection:
        raise NotApplicableError("premium needs a product with positive protection")
    engines = ["vanilla"]
    if cfg.jump is not None:
        engines += ["at_most_one_jump", "exactly_one_jump", "merton"]
    if engine is not None:
        engines = [engine]
    rows = []
    for tag in engines:
        rep = premium_report(cfg.eps, cfg.market, cfg.jump, cfg.default, tag)
        d = rep.as_dict()
        rows.append({k: d[k] for k in _PREMIUM_FIELDS})
    return Result(_PREMIUM_FIELDS, rows)


# ---- payoff --------------------------------------------------------------

def cmd_payoff(cfg: RunConfig, engine: str | None = None, grid: int | None = None) -> Result:
    cfg.require("market", "eps")
    mkt, spec = cfg.market, cfg.eps
    port = build_hedge(spec, mkt.spot)
    h0 = hedge_cost(port, make_engine(engine or "vanilla", mkt, cfg.jump, cfg.default))
    premium = h0 if cfg.premium is None else float(cfg.premium)
    r = np.linspace(-0.99, 1.0, grid or cfg.grid)
    cols = {
        "r_t": r,
        "psi": adjusted_return(spec, r),
        "psi_p": protection_leg(spec, r),
        "psi_f": fee_leg(spec, r),
        "hedge_t": hedge_payoff(port, r),
        "cf_hedged": hedged_cash_flow(spec, port, premium, r, mkt, h0),
        "cf_defaulted": defaulted_cash_flow(spec, port, premium, r, mkt, h0),
    }
    if np.ndim(cols["cf_defaulted"]) == 0:
        cols["cf_defaulted"] = np.full_like(r, cols["cf_defaulted"])
    fields = list(cols)
    rows = [{k: float(cols[k][i]) for k in fields} for i in range(len(r))]
    return Result(fields, rows)


# ---- tables --------------------------------------------------------------

def cmd_tables(cfg: RunConfig) -> Result:
    cells = tables.load_reference(cfg.reference)
    report = tables.build_report(cells, cfg.compensator_mode)
    rows = list(tables.report_rows(report))
    bad = tables.failures(report)
    notes = []
    summary = {}
    for r in report:
        summary.setdefault((r.table, r.status), 0)
        summary[(r.table, r.status)] += 1
    for (t, status), n in sorted(summary.items()):
        notes.append(f"table {t}: {n} {status}")
    for key, mode in sorted(tables.mode_summary(report).items()):
        if mode != "n/a":
            notes.append(f"mode table {key[0]} {key[1]} {key[2]}: {mode}")
    for r in bad:
        notes.append(f"FAIL table {r.table} {r.product} row {r.row} {r.column}: "
                     f"model {r.model:.4f} reference {r.reference:.4f} "
                     f"residual {r.residual:+.4f} tolerance {r.tolerance:g}")
    return Result(tables.REPORT_FIELDS, rows, EXIT_TOLERANCE if bad else EXIT_OK, notes)


# ---- mc ------------------------------------------------------------------

def _sim_config(cfg: RunConfig, seed, paths) -> SimConfig:
    mc = cfg.mc
    allowed = {"paths", "seed", "conditioning", "n_jumps", "antithetic", "quantity",
               "strike", "kind", "gamma_counterparty"}
    unknown = set(mc) - allowed
    if unknown:
        raise ConfigError(f"unknown mc keys: {', '.join(sorted(unknown))}")
    try:
        return SimConfig(
            paths=paths if paths is not None else int(mc.get("paths", 10**6)),
            seed=seed if seed is not None else int(mc.get("seed", 0)),
            conditioning=mc.get("conditioning", "unconditional"),
            n_jumps=int(mc.get("n_jumps", 0)),
            antithetic=bool(mc.get("antithetic", False)),
        )
    except EpsError as exc:
        raise ConfigError(f"section 'mc': {exc}") from exc


def cmd_mc(cfg: RunConfig, seed=None, paths=None) -> Result:
    cfg.require("market")
    sim = _sim_config(cfg, seed, paths)
    mkt, jp = cfg.market, cfg.jump
    quantity = cfg.mc.get("quantity", "option")
    rows = []

    def row(name, est, target):
        rows.append({"quantity": name, "estimate": est.value, "stderr": est.stderr,
                     "closed_form": target, "z": est.z_score(target), "paths": sim.paths,
                     "seed": sim.seed, "backend": kernels.BACKEND})

    if quantity == "option":
        strike = float(cfg.mc.get("strike", mkt.spot))
        kinds = [cfg.mc["kind"]] if "kind" in cfg.mc else ["call", "put"]
        for kind in kinds:
            row(f"{kind} K={strike:g}", mc_option_price(mkt, jp, sim, strike, kind),
                matched_option_price(mkt, jp, sim, strike, kind))
    elif quantity == "default_adjustment":
        cfg.require("eps")
        gamma = (cfg.default.gamma_counterparty if cfg.default is not None
                 else float(cfg.mc.get("gamma_counterparty", 0.0)))
        est = mc_default_adjustment(mkt, jp, gamma, cfg.eps, sim)
        row("da_growth", est.growth_weighted, matched_default_adjustment(mkt, jp, gamma, cfg.eps, sim))
        rows.append({"quantity": "da_shortfall", "estimate": est.shortfall.value,
                     "stderr": est.shortfall.stderr, "closed_form": math.nan, "z": math.nan,
                     "paths": sim.paths, "seed": sim.seed, "backend": kernels.BACKEND})
    elif quantity == "terminal_mean":
        res = simulate_terminal(mkt, jp, sim)
        target = matched_option_price(mkt, jp, sim, 1e-12, "call")
        row("discounted S_T", res.discounted_mean, target)
    else:
        raise ConfigError("mc quantity must be option, default_adjustment or terminal_mean")
    fields = ["quantity", "estimate", "stderr", "closed_form", "z", "paths", "seed", "backend"]
    return Result(fields, rows)


# ---- output --------------------------------------------------------------

def _fmt(value):
    if isinstance(value, float):
        return "" if math.isnan(value) else f"{value:.4f}"
    return "" if value is None else str(value)


def print_table(result: Result, stream=None):
    stream = stream or sys.stdout
    cells = [[_fmt(row.get(f)) for f in result.fields] for row in result.rows]
    widths = [max([len(f)] + [len(c[i]) for c in cells]) for i, f in enumerate(result.fields)]
    print("  ".join(f.rjust(w) for f, w in zip(result.fields, widths)), file=stream)
    for c in cells:
        print("  ".join(v.rjust(w) for v, w in zip(c, widths)), file=stream)
    for note in result.notes:
        print(note, file=stream)


def _csv_value(value):
    if value is None:
        return ""
    if isinstance(value, float):
        return "" if math.isnan(value) else repr(value)
    return value


def write_csv(result: Result, path: str):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(result.fields)
        for row in result.rows:
            writer.writerow([_csv_value(row.get(f)) for f in result.fields])


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="eps-pricing", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name in ("price", "hedge", "premium", "payoff", "tables", "mc"):
        p = sub.add_parser(name)
        p.add_argument("--config", required=name != "tables")
        p.add_argument("--out")
        p.add_argument("--engine")
        if name == "mc":
            p.add_argument("--seed", type=int)
            p.add_argument("--paths", type=int)
        if name == "payoff":
            p.add_argument("--grid", type=int)
        if name == "hedge":
            p.add_argument("--protection-only", action="store_true")
    return parser


def run(args) -> Result:
    cfg = load_config(args.config) if args.config else parse_config({})
    if args.engine is not None and args.engine not in ENGINE_TAGS:
        raise ConfigError(f"unknown engine {args.engine!r}")
    if args.command == "price":
        return cmd_price(cfg, args.engine)
    if args.command == "hedge":
        return cmd_hedge(cfg, args.engine, args.protection_only)
    if args.command == "premium":
        return cmd_premium(cfg, args.engine)
    if args.command == "payoff":
        return cmd_payoff(cfg, args.engine, args.grid)
    if args.command == "tables":
        return cmd_tables(cfg)
    return cmd_mc(cfg, args.seed, args.paths)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        result = run(args)
    except (NumericalError, ArithmeticError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (ConfigError, NotApplicableError, DomainError, EpsError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    print_table(result)
    out = args.out
    if out:
        write_csv(result, out)
    return result.code


if __name__ == "__main__":
    sys.exit(main())
