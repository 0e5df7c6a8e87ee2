import dataclasses

import mpmath as mp
import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st

from healthinvest.errors import DomainError
from healthinvest.params import Stage2Params
from healthinvest.stage2 import (
    fertility2,
    mortality,
    optimal_policy2,
    output_per_capita2,
    stability_factor,
    steady_state,
    steady_state_population,
    step_population2,
)

mp.mp.dps = 40

X_BASE = 0.85 / 1.1


def mp_output2(p, x, L):
    x = mp.mpf(x)
    comp = (mp.mpf(p.phi) * p.lambda_fixed * x) ** mp.mpf(p.beta) * (1 - x) ** (1 - mp.mpf(p.beta))
    return comp ** mp.mpf(p.alpha) * mp.mpf(L) ** (mp.mpf(p.alpha) - 1)


def test_output_examples(p2):
    exact = mp_output2(p2, mp.mpf("0.85") / mp.mpf("1.1"), 1)
    # (85/484)^(1/4)
    assert float(exact) == pytest.approx((85 / 484) ** 0.25, rel=1e-15)
    assert output_per_capita2(p2, X_BASE, 1.0) == pytest.approx(float(exact), abs=1e-12)
    assert output_per_capita2(p2, X_BASE, 4.0) == pytest.approx(float(exact) / 2, abs=1e-12)
    assert output_per_capita2(p2, 1e-12, 1.0) < output_per_capita2(p2, 1e-6, 1.0) < 0.05
    # (1-x)^(1/4) vanishes slowly near x = 1
    assert output_per_capita2(p2, 1 - 1e-12, 1.0) < output_per_capita2(p2, 1 - 1e-6, 1.0) < 0.05
    for x, L in ((0.0, 1.0), (1.0, 1.0), (0.5, 0.0)):
        with pytest.raises(DomainError):
            output_per_capita2(p2, x, L)


def test_policy_examples(p2):
    pol = optimal_policy2(p2, 1.0)
    assert pol.x_star == pytest.approx(0.77273, abs=5e-6)
    y = float(mp_output2(p2, mp.mpf("0.85") / mp.mpf("1.1"), 1))
    assert pol.n_star == pytest.approx(0.4 * y / 0.2, abs=1e-12)
    assert pol.n_star == pytest.approx(1.29477, abs=1e-4)
    assert pol.c_star == pytest.approx(0.6 * y, abs=1e-12)
    assert pol.c_star == pytest.approx(0.38843, abs=1e-4)
    assert pol.c_star + p2.p * pol.n_star == pytest.approx(pol.y, abs=1e-12)
    assert pol.c_star == pytest.approx(p2.p * pol.n_star * (1 - p2.gamma) / p2.gamma, rel=1e-12)


def test_mortality(p2):
    assert mortality(p2, 0.0) == 0.3
    assert mortality(p2, 0.5) == pytest.approx(0.5)
    assert mortality(p2, 10.0) == p2.delta_max
    low = dataclasses.replace(p2, delta0=0.0)
    assert mortality(low, 0.0) == p2.delta_min
    with pytest.raises(DomainError):
        mortality(p2, -1.0)


def test_step_examples(p2):
    L_t = steady_state_population(p2, 0.5)
    assert step_population2(p2, L_t, 0.5) == pytest.approx(L_t, rel=1e-12)
    assert step_population2(p2, 1.0, 0.5) == pytest.approx(1.79477, abs=1e-4)
    big = 1e12
    assert step_population2(p2, big, 0.5) / big == pytest.approx(0.5, abs=1e-5)
    for bad in (0.0, 1.0):
        with pytest.raises(DomainError):
            step_population2(p2, 1.0, bad)


def test_steady_state_baseline(p2):
    st_ = steady_state(p2, 0.5)
    assert st_.L_tilde == pytest.approx(6.7055, abs=1e-3)
    assert st_.L_tilde_prime == pytest.approx(1.6764, abs=1e-3)
    assert st_.L_tilde_prime == pytest.approx(st_.L_tilde * 0.25, rel=1e-6)
    assert st_.factor == 0.75 and st_.stable
    h = st_.L_tilde * 1e-6
    fd = (step_population2(p2, st_.L_tilde + h, 0.5) - step_population2(p2, st_.L_tilde - h, 0.5)) / (2 * h)
    assert abs(fd - 0.75) <= 1e-6
    # n*(L_tilde) equals delta
    assert fertility2(p2, st_.L_tilde) == pytest.approx(0.5, rel=1e-12)


def test_steady_state_prime_closed_form(p2):
    # maximiser of (n*(L) - delta) L is L_tilde * alpha^(1/(1-alpha))
    for alpha in (0.3, 0.5, 0.7):
        q = dataclasses.replace(p2, alpha=alpha)
        s = steady_state(q, 0.4)
        assert s.L_tilde_prime == pytest.approx(s.L_tilde * alpha ** (1 / (1 - alpha)), rel=1e-6)


params2 = st.builds(
    Stage2Params,
    phi=st.floats(0.2, 5),
    alpha=st.floats(0.05, 0.95),
    beta=st.floats(0.05, 0.95),
    gamma=st.floats(0.05, 0.95),
    p=st.floats(0.05, 0.95),
    lambda_fixed=st.floats(0.2, 5),
)


@settings(max_examples=200, deadline=None)
@given(p=params2, L=st.floats(1e-4, 1e4))
def test_budget_identity(p, L):
    pol = optimal_policy2(p, L)
    assert 0 < pol.x_star < 1
    assert abs(pol.c_star + p.p * pol.n_star - pol.y) <= 1e-12 * max(1.0, pol.y)


@settings(max_examples=100, deadline=None)
@given(p=params2, phi=st.floats(0.2, 5))
def test_allocation_independent_of_L_and_phi(p, phi):
    xs = {optimal_policy2(p, 10.0**k).x_star for k in range(-5, 6)}
    xs.add(optimal_policy2(dataclasses.replace(p, phi=phi), 1.0).x_star)
    assert len(xs) == 1


@settings(max_examples=100, deadline=None)
@given(p=params2, L1=st.floats(1e-3, 1e3), L2=st.floats(1e-3, 1e3))
def test_fertility_decreasing_in_L(p, L1, L2):
    lo, hi = sorted((L1, L2))
    assume(hi / lo > 1 + 1e-9)
    assert fertility2(p, hi) < fertility2(p, lo)


@settings(max_examples=100, deadline=None)
@given(p=params2, delta=st.floats(0.05, 0.95))
def test_increment_single_peaked(p, delta):
    s = steady_state(p, delta)
    assert 0 < s.L_tilde_prime < s.L_tilde
    assert 0 < s.factor < 1
    grid = s.L_tilde * np.linspace(0.01, 1.5, 300)
    inc = np.array([(fertility2(p, L) - delta) * L for L in grid])
    k = int(np.argmax(inc))
    assert np.all(np.diff(inc[: k + 1]) >= -1e-12 * np.abs(inc).max())
    assert np.all(np.diff(inc[k:]) <= 1e-12 * np.abs(inc).max())


def test_stability_factor():
    p = Stage2Params()
    assert stability_factor(p, 0.5) == 0.75
    assert stability_factor(dataclasses.replace(p, alpha=0.3), 0.2) == pytest.approx(0.86)
