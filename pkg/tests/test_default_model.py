import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from eps_pricing import (
    DefaultParams,
    DomainError,
    IntensitySchedule,
    ValidationError,
    default_probability,
    defaultable_price,
    survival_probability,
)


def test_values():
    assert default_probability(0.05, 1.0) == pytest.approx(0.048771, abs=1e-6)
    assert default_probability(0.5, 1.0) == pytest.approx(0.393469, abs=1e-6)
    assert survival_probability(0.0, 3.0) == 1.0
    assert defaultable_price(8.6728, 0.1, 1.0) == pytest.approx(8.6728 * math.exp(-0.1))


@given(st.floats(0, 3), st.floats(0, 5), st.floats(0, 5))
def test_survival_is_multiplicative(g, s, t):
    lhs = survival_probability(g, s + t)
    assert lhs == pytest.approx(survival_probability(g, s) * survival_probability(g, t), rel=1e-12)


@given(st.floats(0, 3), st.floats(0, 10))
def test_probabilities_complement(g, t):
    assert survival_probability(g, t) + default_probability(g, t) == pytest.approx(1.0, abs=1e-15)
    assert 0.0 <= default_probability(g, t) <= 1.0


def test_monotone_in_intensity_and_time():
    gs = np.linspace(0, 2, 50)
    pds = [default_probability(g, 1.0) for g in gs]
    assert all(b > a for a, b in zip(pds, pds[1:]))
    ts = np.linspace(0, 5, 50)
    surv = [survival_probability(0.2, t) for t in ts]
    assert all(b < a for a, b in zip(surv, surv[1:]))


def test_schedule_integration():
    sched = IntensitySchedule((0.5, 1.0), (0.1, 0.3))
    assert sched.integrated(0.25) == pytest.approx(0.025)
    assert sched.integrated(1.0) == pytest.approx(0.2)
    assert sched.integrated(2.0) == pytest.approx(0.5)
    assert survival_probability(sched, 1.0) == pytest.approx(math.exp(-0.2))
    flat = IntensitySchedule((1.0,), (0.2,))
    for t in (0.3, 1.0, 2.5):
        assert survival_probability(flat, t) == pytest.approx(survival_probability(0.2, t))


def test_simulated_default_times():
    rng = np.random.default_rng(3)
    n = 10**6
    tau = rng.exponential(1 / 0.3, n)
    freq = np.mean(tau <= 1.0)
    pd = default_probability(0.3, 1.0)
    assert abs(freq - pd) < 4 * math.sqrt(pd * (1 - pd) / n)


@pytest.mark.parametrize("gamma,t", [(-0.1, 1.0), (float("inf"), 1.0), (0.1, -1.0)])
def test_domain_errors(gamma, t):
    with pytest.raises(DomainError):
        survival_probability(gamma, t)


def test_param_validation():
    with pytest.raises(ValidationError):
        DefaultParams(-0.1, 0.0)
    with pytest.raises(ValidationError):
        DefaultParams.from_dict({"gamma": 0.1})
    with pytest.raises(ValidationError):
        IntensitySchedule((1.0, 0.5), (0.1, 0.1))
    assert DefaultParams.from_dict(DefaultParams(0.05, 0.02).to_dict()) == DefaultParams(0.05, 0.02)
