import json

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import _oracles as oracle
from eps_pricing import (
    DomainError,
    EpsSpec,
    ValidationError,
    adjusted_return,
    fee_leg,
    make_buffer,
    make_floor,
    make_floor_cap,
    protection_leg,
)

GRID = np.linspace(-0.999, 3.0, 10_001)


def test_buffer_zero_at_origin():
    assert adjusted_return(make_buffer(-0.05, 0.05, 0.8, 0.5), 0.0) == 0.0


@pytest.mark.parametrize("spec,r,expected", [
    (make_buffer(-0.05, 0.05, 0.8, 0.5), -0.15, -0.08),
    (make_floor(-0.10, 0.8, 0.10, 0.5), -0.25, -0.08),
    (make_floor_cap(-0.10, 0.10, 0.8, 0.5), 0.30, 0.05),
])
def test_named_product_values(spec, r, expected):
    assert adjusted_return(spec, r) == pytest.approx(expected, abs=1e-15)


def test_protection_leg_examples():
    assert protection_leg(make_buffer(-0.05, 0.05, 0.8, 0.5), 0.10) == 0.0
    assert protection_leg(make_floor(-0.10, 0.8, 0.10, 0.5), -0.05) == pytest.approx(-0.04)
    two_level = EpsSpec((0, -0.05, -0.15), (0.0, 0.5, 1.0), (0, 0.1), (0, 0.5))
    assert protection_leg(two_level, -0.20) == pytest.approx(-0.10, abs=1e-15)


def test_fee_leg_examples():
    assert fee_leg(make_buffer(-0.05, 0.05, 0.8, 0.5), -0.10) == 0.0
    assert fee_leg(make_buffer(-0.05, 0.05, 0.8, 0.5), 0.25) == pytest.approx(0.10)
    assert fee_leg(make_floor_cap(-0.10, 0.10, 0.8, 0.5), 0.07) == pytest.approx(0.035)


def test_buffer_kinks():
    spec = make_buffer(-0.05, 0.05, 0.8, 0.5)
    assert adjusted_return(spec, -0.05) == 0.0
    assert adjusted_return(spec, 0.05) == 0.0


def test_floor_minimum():
    psi = adjusted_return(make_floor(-0.15, 0.8, 0.10, 0.5), GRID)
    assert psi.min() == pytest.approx(-0.12, abs=1e-14)
    assert np.allclose(psi[GRID <= -0.15], -0.12, atol=1e-14)


def test_floor_cap_maximum():
    psi = adjusted_return(make_floor_cap(-0.15, 0.10, 0.8, 0.5), GRID)
    assert psi.max() == pytest.approx(0.05, abs=1e-14)
    assert np.allclose(psi[GRID >= 0.10], 0.05, atol=1e-14)


@pytest.mark.parametrize("l1,g1", [(-0.05, 0.05), (-0.10, 0.10), (-0.20, 0.15)])
def test_named_products_match_definitions(l1, g1):
    cases = [
        (make_buffer(l1, g1, 0.8, 0.5), lambda r: oracle.psi_buffer(r, l1, g1, 0.8, 0.5)),
        (make_floor(l1, 0.8, g1, 0.5), lambda r: oracle.psi_floor(r, l1, 0.8, g1, 0.5)),
        (make_floor_cap(l1, g1, 0.8, 0.5), lambda r: oracle.psi_floor_cap(r, l1, g1, 0.8, 0.5)),
    ]
    for spec, ref in cases:
        expected = np.array([ref(r) for r in GRID])
        assert np.max(np.abs(adjusted_return(spec, GRID) - expected)) < 1e-12


@st.composite
def specs(draw):
    n = draw(st.integers(1, 4))
    m = draw(st.integers(1, 4))
    cuts = sorted(draw(st.lists(st.floats(0.01, 0.95), min_size=n, max_size=n, unique=True)))
    gains = sorted(draw(st.lists(st.floats(0.01, 2.0), min_size=m, max_size=m, unique=True)))
    rate = st.floats(0.0, 1.0)
    return EpsSpec(
        (0.0,) + tuple(-c for c in cuts),
        tuple(draw(st.lists(rate, min_size=n + 1, max_size=n + 1))),
        (0.0,) + tuple(gains),
        tuple(draw(st.lists(rate, min_size=m + 1, max_size=m + 1))),
    )


@settings(max_examples=60, deadline=None)
@given(specs())
def test_shape_invariants(spec):
    psi = adjusted_return(spec, GRID)
    p = protection_leg(spec, GRID)
    f = fee_leg(spec, GRID)
    assert adjusted_return(spec, 0.0) == 0.0
    assert np.all(np.diff(psi) >= -1e-15)
    assert np.all(p <= 0.0) and np.all(f >= 0.0)
    assert np.array_equal(psi, p + f)
    assert psi.min() >= -1.0
    # continuity: no jump bigger than slope times spacing
    assert np.max(np.abs(np.diff(psi))) <= np.diff(GRID).max() * 1.0 + 1e-12


def test_scalar_and_array_inputs_agree():
    spec = make_floor(-0.10, 0.8, 0.10, 0.5)
    r = np.array([-0.3, -0.05, 0.2])
    assert list(adjusted_return(spec, r)) == [adjusted_return(spec, x) for x in r]
    assert isinstance(adjusted_return(spec, 0.1), float)


@pytest.mark.parametrize("bad", [-1.0, -1.5, float("nan")])
def test_return_domain(bad):
    with pytest.raises(DomainError):
        adjusted_return(make_buffer(-0.05, 0.05, 0.8, 0.5), bad)


@pytest.mark.parametrize("kwargs", [
    dict(protection_levels=(0, 0.05), protection_rates=(0, 1), fee_levels=(0, 1), fee_rates=(0, 1)),
    dict(protection_levels=(-0.1,), protection_rates=(1,), fee_levels=(0,), fee_rates=(0,)),
    dict(protection_levels=(0, -0.1), protection_rates=(0, 1.2), fee_levels=(0,), fee_rates=(0,)),
    dict(protection_levels=(0, -1.0), protection_rates=(0, 1), fee_levels=(0,), fee_rates=(0,)),
    dict(protection_levels=(0, -0.1), protection_rates=(0,), fee_levels=(0,), fee_rates=(0,)),
    dict(protection_levels=(0,), protection_rates=(0,), fee_levels=(0, 0.2, 0.1),
         fee_rates=(0, 1, 1)),
])
def test_invalid_specs(kwargs):
    with pytest.raises(ValidationError):
        EpsSpec(**kwargs)


def test_kind_must_match_structure():
    with pytest.raises(ValidationError):
        EpsSpec((0, -0.1), (0.8, 0.0), (0, 0.1), (0, 0.5), kind="buffer")
    with pytest.raises(ValidationError):
        make_buffer(0.05, 0.05, 0.8, 0.5)
    with pytest.raises(ValidationError):
        make_floor(-0.1, 0.0, 0.1, 0.5)


def test_config_round_trip():
    spec = make_floor_cap(-0.15, 0.10, 0.8, 0.5, nominal=2.0)
    again = EpsSpec.from_dict(json.loads(json.dumps(spec.to_dict())))
    assert again == spec
    assert np.array_equal(adjusted_return(again, GRID), adjusted_return(spec, GRID))


def test_from_dict_rejects_unknown_keys():
    data = make_buffer(-0.05, 0.05, 0.8, 0.5).to_dict()
    data["participation"] = 1
    with pytest.raises(ValidationError):
        EpsSpec.from_dict(data)
