import math

import numpy as np
import pytest

import _oracles as oracle
from eps_pricing import (
    ConfigError,
    DefaultParams,
    EpsSpec,
    JumpParams,
    NotApplicableError,
    build_hedge,
    default_adjustment,
    default_probability,
    defaulted_cash_flow,
    first_protection_level,
    hedge_cost,
    hedge_payoff,
    hedged_cash_flow,
    make_buffer,
    make_engine,
    make_floor,
    make_floor_cap,
    premium_report,
)
from eps_pricing.hedging import ENGINE_TAGS

GRID = np.linspace(-0.99, 2.0, 5001)
PRODUCTS = {
    "buffer": (make_buffer(-0.05, 0.05, 0.8, 0.5),
               lambda r: oracle.psi_buffer(r, -0.05, 0.05, 0.8, 0.5), (-0.05, 0.05)),
    "floor": (make_floor(-0.10, 0.8, 0.10, 0.5),
              lambda r: oracle.psi_floor(r, -0.10, 0.8, 0.10, 0.5), (-0.10, 0.0, 0.10)),
    "floor_cap": (make_floor_cap(-0.10, 0.10, 0.8, 0.5),
                  lambda r: oracle.psi_floor_cap(r, -0.10, 0.10, 0.8, 0.5), (-0.10, 0.0, 0.10)),
}


def _legs(spec):
    return [(leg.kind, round(leg.strike, 10), round(leg.quantity, 12))
            for leg in build_hedge(spec).legs]


def test_buffer_legs():
    assert _legs(PRODUCTS["buffer"][0]) == [("put", 95.0, 0.008), ("call", 105.0, -0.005)]


def test_floor_legs():
    assert _legs(PRODUCTS["floor"][0]) == [
        ("put", 100.0, 0.008), ("put", 90.0, -0.008), ("call", 110.0, -0.005)]


def test_floor_cap_legs():
    assert _legs(PRODUCTS["floor_cap"][0]) == [
        ("put", 100.0, 0.008), ("put", 90.0, -0.008),
        ("call", 100.0, -0.005), ("call", 110.0, 0.005)]


def test_legs_scale_with_spot():
    spec = PRODUCTS["floor"][0]
    a, b = build_hedge(spec, 100.0), build_hedge(spec, 40.0)
    for x, y in zip(a.legs, b.legs):
        assert x.strike / 100.0 == pytest.approx(y.strike / 40.0)
        assert x.quantity * 100.0 == pytest.approx(y.quantity * 40.0)


@pytest.mark.parametrize("name", PRODUCTS)
def test_static_replication(name):
    spec = PRODUCTS[name][0]
    port = build_hedge(spec)
    assert np.max(np.abs(hedge_payoff(port, GRID) + _psi(spec))) < 1e-12


def _psi(spec):
    from eps_pricing import adjusted_return
    return adjusted_return(spec, GRID)


def test_replication_multi_level():
    spec = EpsSpec((0, -0.05, -0.15, -0.3), (0.2, 0.5, 1.0, 0.4), (0, 0.1, 0.3), (0.1, 0.6, 0.0))
    assert np.max(np.abs(hedge_payoff(build_hedge(spec), GRID) + _psi(spec))) < 1e-12


@pytest.mark.parametrize("name", PRODUCTS)
def test_vanilla_cost_against_quadrature(mkt, name):
    spec, psi, kinks = PRODUCTS[name]
    ref = oracle.hedge_value(psi, 100, 0.015, 0.2, 1.0, kinks)
    assert hedge_cost(build_hedge(spec), make_engine("vanilla", mkt)) == pytest.approx(ref, abs=1e-9)


def test_buffer_cost_value(mkt):
    cost = hedge_cost(build_hedge(PRODUCTS["buffer"][0]), make_engine("vanilla", mkt))
    assert cost == pytest.approx(0.0069, abs=5e-4)


def test_floor_cap_protection_only(mkt):
    port = build_hedge(make_floor_cap(-0.10, 0.10, 0.8, 0.5))
    eng = make_engine("vanilla", mkt)
    assert hedge_cost(port, eng, protection_only=True) == pytest.approx(0.0322, abs=5e-4)
    ref = oracle.hedge_value(lambda r: oracle.psi_floor_cap(r, -0.10, 0.10, 0.8, 0.5),
                             100, 0.015, 0.2, 1.0, (-0.10, 0.0, 0.10))
    assert hedge_cost(port, eng) == pytest.approx(ref, abs=1e-9)


@pytest.mark.parametrize("name", PRODUCTS)
def test_cash_flow_vanishes_at_fair_premium(mkt, name):
    spec = PRODUCTS[name][0]
    port = build_hedge(spec)
    h0 = hedge_cost(port, make_engine("vanilla", mkt))
    assert np.max(np.abs(hedged_cash_flow(spec, port, h0, GRID, mkt, h0))) < 1e-12


def test_cash_flow_scales_with_nominal(mkt):
    spec = make_buffer(-0.05, 0.05, 0.8, 0.5, nominal=1e6)
    port = build_hedge(spec)
    cf = hedged_cash_flow(spec, port, 0.01, -0.2, mkt, 0.0069)
    assert cf == pytest.approx(1e6 * 0.0031 * math.exp(0.015), rel=1e-12)


def test_defaulted_cash_flow_examples(mkt):
    buffer = PRODUCTS["buffer"][0]
    assert defaulted_cash_flow(buffer, build_hedge(buffer), 0.02, -0.30, mkt, 0.02) == \
        pytest.approx(-0.2, abs=1e-15)
    floor = PRODUCTS["floor"][0]
    assert defaulted_cash_flow(floor, build_hedge(floor), 0.02, -0.30, mkt, 0.02) == \
        pytest.approx(-0.24, abs=1e-15)
    assert defaulted_cash_flow(floor, build_hedge(floor), 0.02, 0.50, mkt, 0.02) == 0.0


@pytest.mark.parametrize("name", ["buffer", "floor", "floor_cap"])
def test_default_loss_bound(mkt, name):
    spec = PRODUCTS[name][0]
    port = build_hedge(spec)
    l_hat, p_hat = first_protection_level(spec)
    cf = defaulted_cash_flow(spec, port, 0.01, GRID, mkt, 0.01)
    assert cf.min() >= -p_hat * (1 + l_hat) - 1e-12
    assert cf.max() <= 1e-15


def test_single_put_default_matches_dropping_the_put(mkt):
    spec = PRODUCTS["buffer"][0]
    port = build_hedge(spec)
    kept = type(port)(tuple(l for l in port.legs if l.kind == "call"), port.spot)
    truth = hedged_cash_flow(spec, kept, 0.01, GRID, mkt, 0.01)
    assert np.max(np.abs(defaulted_cash_flow(spec, port, 0.01, GRID, mkt, 0.01) - truth)) < 1e-12


@pytest.mark.parametrize("l_hat", [-0.05, -0.10, -0.20])
def test_default_adjustment_against_quadrature(mkt, row1_jumps, l_hat):
    spec = make_buffer(l_hat, 0.05, 0.8, 0.5)
    pd = default_probability(0.05, 1.0)
    ref_none = pd * 0.8 * oracle.partial_growth(100, 0.015, 0.2, 1.0, l_hat, weights={0: 1.0})
    assert default_adjustment(spec, mkt, None, 0.05, "none") == pytest.approx(ref_none, abs=1e-10)
    ref = pd * 0.8 * oracle.partial_growth(100, 0.015, 0.2, 1.0, l_hat, lam=0.1, alpha=-0.2,
                                           delta=0.1)
    assert default_adjustment(spec, mkt, row1_jumps, 0.05, "full") == pytest.approx(ref, abs=1e-10)


def test_default_adjustment_monotone_in_intensity(mkt, row1_jumps):
    spec = make_buffer(-0.05, 0.10, 0.8, 0.5)
    vals = [default_adjustment(spec, mkt, row1_jumps, g, "full") for g in np.linspace(0, 1, 21)]
    assert vals[0] == 0.0
    assert all(b > a for a, b in zip(vals, vals[1:]))


def test_default_adjustment_reference(mkt, row1_jumps):
    spec = make_buffer(-0.05, 0.10, 0.8, 0.5)
    assert default_adjustment(spec, mkt, None, 0.05, "none") == pytest.approx(0.0132, abs=1e-3)
    assert default_adjustment(spec, mkt, row1_jumps, 0.05, "exactly_one") == pytest.approx(
        0.0216, abs=1e-3)


def test_default_adjustment_needs_protection(mkt):
    spec = EpsSpec((0.0,), (0.0,), (0.0, 0.1), (0.0, 0.5))
    assert default_adjustment(spec, mkt, None, 0.05, "none") == 0.0
    with pytest.raises(NotApplicableError):
        first_protection_level(spec)


def test_counterparty_and_provider_directions(mkt, row1_jumps):
    port = build_hedge(make_floor(-0.10, 0.8, 0.10, 0.5))

    def cost(gc, gp):
        return hedge_cost(port, make_engine("merton_with_default", mkt, row1_jumps,
                                            DefaultParams(gc, gp)))

    base = cost(0.0, 0.0)
    assert base == pytest.approx(hedge_cost(port, make_engine("merton", mkt, row1_jumps)))
    assert cost(0.2, 0.0) < base
    assert cost(0.0, 0.2) > base


def test_calls_unaffected_by_put_seller_default(mkt):
    port = build_hedge(PRODUCTS["buffer"][0])
    plain = make_engine("vanilla", mkt)
    risky = make_engine("vanilla_with_default", mkt, defaults=DefaultParams(0.3, 0.3))
    call = [leg for leg in port.legs if leg.kind == "call"][0]
    assert risky.leg_value(call) == plain.leg_value(call)
    rt = make_engine("random_time", mkt, defaults=DefaultParams(0.3, 0.3))
    assert rt.leg_value(call) == pytest.approx(plain.leg_value(call) * math.exp(-0.3))


@pytest.mark.parametrize("engine", ["vanilla", "merton", "exactly_one_jump", "at_most_one_jump"])
def test_premium_ordering(mkt, row1_jumps, engine):
    rep = premium_report(make_buffer(-0.05, 0.10, 0.8, 0.5), mkt, row1_jumps,
                         DefaultParams(0.05, 0.0), engine)
    assert rep.super_hedging_premium >= rep.default_adjusted_premium >= rep.hedge_cost
    assert rep.l_hat == -0.05 and rep.p_hat == 0.8
    assert set(rep.as_dict()) >= {"hedge_cost", "default_adjustment", "super_hedging_premium"}


def test_premium_reference_values(mkt):
    rep = premium_report(make_buffer(-0.05, 0.10, 0.8, 0.5), mkt, None, DefaultParams(0.05, 0.0))
    assert rep.default_adjustment == pytest.approx(0.0132, abs=1e-3)
    assert rep.default_adjusted_premium - rep.hedge_cost == pytest.approx(
        math.exp(-0.015) * rep.default_adjustment, rel=1e-14)


def test_engine_validation(mkt):
    with pytest.raises(ConfigError):
        make_engine("heston", mkt)
    with pytest.raises(ConfigError):
        make_engine("merton", mkt)
    for tag in ENGINE_TAGS:
        make_engine(tag, mkt, JumpParams(0.1, -0.2, 0.1), DefaultParams(0.1, 0.1))
