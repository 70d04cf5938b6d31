import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qudisc import (
    DomainError,
    ErrorBudget,
    ErrorMode,
    IndistinguishableError,
    epsilon_floor,
    t_min,
    t_min_bounded,
    t_min_onesided,
    t_perfect,
)

PI = math.pi


class TestBoundedErrorBound:
    def test_zero_error_quarter_pi(self):
        report = t_min_bounded(PI / 4, 0.0)
        assert report.raw_value == pytest.approx(8 / PI, abs=1e-12)
        assert report.t_lower == 3

    def test_exact_integer_raw_is_not_bumped(self):
        report = t_min_bounded(0.1, 0.25)  # 1 - 4*0.25*0.75 = 0.25, sqrt = 0.5
        assert report.raw_value == pytest.approx(10.0, abs=1e-12)
        assert report.t_lower == 10

    def test_half_error_is_free(self):
        report = t_min_bounded(PI, 0.5)
        assert report.raw_value == pytest.approx(0.0, abs=1e-15)
        assert report.t_lower == 0

    def test_zero_theta_raises(self):
        with pytest.raises(IndistinguishableError):
            t_min_bounded(0.0, 0.1)

    def test_epsilon_range(self):
        with pytest.raises(DomainError):
            t_min_bounded(1.0, 0.51)
        with pytest.raises(DomainError):
            t_min_bounded(1.0, -0.01)

    def test_theta_range(self):
        with pytest.raises(DomainError):
            t_min_bounded(2 * PI, 0.1)

    def test_wide_spread_needs_one_query(self):
        assert t_min_bounded(PI, 0.0).t_lower == 1
        assert t_min_bounded(PI + 1.0, 0.0).t_lower == 1


class TestOneSidedBound:
    def test_exact_integer_raw(self):
        report = t_min_onesided(0.2, 0.6)  # 2*0.8/0.2 = 8
        assert report.raw_value == pytest.approx(8.0, abs=1e-12)
        assert report.t_lower == 8

    def test_full_budget_is_free(self):
        assert t_min_onesided(PI / 4, 1.0).t_lower == 0

    def test_zero_budget_matches_bounded(self):
        assert t_min_onesided(PI / 4, 0.0).t_lower == t_min_bounded(PI / 4, 0.0).t_lower == 3


def test_budget_dispatch():
    assert t_min(0.1, ErrorBudget(0.25, ErrorMode.BOUNDED)) == t_min_bounded(0.1, 0.25)
    assert t_min(0.2, ErrorBudget(0.6, ErrorMode.ONE_SIDED)) == t_min_onesided(0.2, 0.6)
    with pytest.raises(DomainError):
        ErrorBudget(0.6, ErrorMode.BOUNDED)


class TestPerfectCount:
    def test_pi_needs_one_query(self):
        assert t_perfect(PI) == 1

    def test_quarter_pi(self):
        assert t_perfect(PI / 4) == 4

    def test_wide_spread(self):
        assert t_perfect(2 * PI * 0.9) == 1

    def test_zero_theta_raises(self):
        with pytest.raises(IndistinguishableError):
            t_perfect(0.0)


class TestEpsilonFloor:
    def test_bounded_saturated(self):
        assert epsilon_floor(PI / 4, 4, ErrorMode.BOUNDED) == 0.0

    def test_bounded_inverts_example(self):
        assert epsilon_floor(0.1, 10, ErrorMode.BOUNDED) == pytest.approx(0.25, abs=1e-12)

    def test_onesided_inverts_example(self):
        assert epsilon_floor(0.2, 8, ErrorMode.ONE_SIDED) == pytest.approx(0.6, abs=1e-12)

    def test_negative_queries_raise(self):
        with pytest.raises(DomainError):
            epsilon_floor(0.1, -1, ErrorMode.BOUNDED)


@settings(max_examples=300, deadline=None)
@given(
    theta=st.floats(1e-3, 2 * PI - 1e-9, allow_nan=False),
    t=st.integers(0, 60),
    mode=st.sampled_from([ErrorMode.BOUNDED, ErrorMode.ONE_SIDED]),
)
def test_floor_round_trips_below_t(theta, t, mode):
    eps = epsilon_floor(theta, t, mode)
    if mode is ErrorMode.BOUNDED:
        report = t_min_bounded(theta, eps)
    else:
        report = t_min_onesided(theta, eps)
    assert report.raw_value <= t + 1e-6


def test_radical_simplifies_to_linear():
    # sqrt(1 - 4 e (1 - e)) = 1 - 2 e on [0, 1/2]
    grid = np.linspace(0.0, 0.5, 10_001)
    lhs = np.sqrt(1.0 - 4.0 * grid * (1.0 - grid))
    assert np.max(np.abs(lhs - (1.0 - 2.0 * grid))) <= 1e-12


def test_t_lower_monotone_in_epsilon_and_theta():
    thetas = np.linspace(0.05, 2 * PI - 0.05, 40)
    epsilons = np.linspace(0.0, 0.5, 40)
    for theta in thetas:
        ts = [t_min_bounded(theta, e).t_lower for e in epsilons]
        assert all(a >= b for a, b in zip(ts, ts[1:]))
    for eps in epsilons:
        ts = [t_min_bounded(theta, eps).t_lower for theta in thetas]
        assert all(a >= b for a, b in zip(ts, ts[1:]))


def test_lower_bound_never_exceeds_perfect_count():
    for theta in np.linspace(1e-3, PI, 500):
        assert t_min_bounded(theta, 0.0).t_lower <= t_perfect(theta)
