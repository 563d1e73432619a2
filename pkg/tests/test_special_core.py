import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from volprod.special_core import (
    DomainError,
    double_factorial,
    gamma_limit,
    log_double_factorial,
    log_gamma,
    pochhammer_log,
)

# mpmath loggamma(0.5) at 30 digits
LOG_SQRT_PI = 0.572364942924700087071713675677


def test_log_gamma_examples():
    assert log_gamma(1.0) == 0.0
    assert log_gamma(5.0) == pytest.approx(math.log(24.0), rel=1e-15)
    assert log_gamma(0.5) == pytest.approx(LOG_SQRT_PI, rel=1e-14)


def test_log_gamma_half_agrees_with_limit_oracle():
    assert gamma_limit(0.5, 10**6) == pytest.approx(math.exp(log_gamma(0.5)), rel=1e-6)


@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan, math.inf, -math.inf])
def test_log_gamma_domain(bad):
    with pytest.raises(DomainError):
        log_gamma(bad)


@settings(max_examples=200, deadline=None)
@given(st.floats(min_value=0.1, max_value=100.0))
def test_log_gamma_recurrence(x):
    lhs = log_gamma(x + 1.0) - log_gamma(x)
    assert lhs == pytest.approx(math.log(x), rel=1e-12, abs=1e-14)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=1e-3, max_value=0.999))
def test_log_gamma_reflection(x):
    # Gamma(x) Gamma(1-x) = pi / sin(pi x)
    lhs = log_gamma(x) + log_gamma(1.0 - x)
    assert lhs == pytest.approx(math.log(math.pi / math.sin(math.pi * x)), rel=1e-13, abs=1e-14)


def test_pochhammer_examples():
    assert pochhammer_log(1.0, 4) == pytest.approx(math.log(24.0), rel=1e-15)
    assert pochhammer_log(0.5, 0) == 0.0
    assert pochhammer_log(0.5, 3) == pytest.approx(math.log(1.875), rel=1e-15)


@settings(max_examples=100, deadline=None)
@given(st.floats(min_value=0.05, max_value=50.0), st.integers(min_value=1, max_value=500))
def test_pochhammer_matches_log_gamma(z, k):
    expected = log_gamma(z + k) - log_gamma(z)
    assert pochhammer_log(z, k) == pytest.approx(expected, rel=1e-11, abs=1e-12)


def test_pochhammer_domain():
    with pytest.raises(DomainError):
        pochhammer_log(-0.5, 3)
    with pytest.raises(DomainError):
        pochhammer_log(1.0, -1)


def test_gamma_limit_examples():
    for K in (1, 7, 1000):
        assert gamma_limit(1.0, K) == 1.0
    assert gamma_limit(2.0, 1000) == pytest.approx(1.0, abs=2e-3)


def test_gamma_limit_half_converges_like_one_over_k():
    target = math.sqrt(math.pi)
    errors = [abs(gamma_limit(0.5, K) / target - 1.0) for K in (10**3, 10**4, 10**5)]
    assert errors[0] > errors[1] > errors[2]
    for e_small, e_big in zip(errors[1:], errors[:-1]):
        assert e_big / e_small == pytest.approx(10.0, rel=0.01)


GRID = np.round(np.linspace(0.25, 50.0, 24), 6)


@pytest.mark.parametrize("x", GRID)
def test_gamma_limit_rate(x):
    # K |ln(ratio)| approaches the constant x (x - 1) / 2; the O(1/K) rate is the claim
    c = [abs(math.log(gamma_limit(x, K)) - log_gamma(x)) * K for K in (10**4, 10**5)]
    expected = abs(x * (x - 1.0)) / 2.0
    assert c[1] == pytest.approx(expected, rel=2e-3, abs=1e-6)
    assert c[0] == pytest.approx(c[1], rel=0.02, abs=1e-6)


@pytest.mark.parametrize("x", [g for g in GRID if g <= 14.0])
def test_gamma_limit_rate_constant_bounded(x):
    err = abs(gamma_limit(x, 10**5) * math.exp(-log_gamma(x)) - 1.0)
    assert err <= 100.0 / 10**5


def test_gamma_limit_domain():
    with pytest.raises(DomainError):
        gamma_limit(0.0, 10)
    with pytest.raises(DomainError):
        gamma_limit(1.5, 0)


@pytest.mark.parametrize("n, expected", [(0, 1), (1, 1), (5, 15), (7, 105), (8, 384), (33, 6332659870762850625)])
def test_double_factorial(n, expected):
    assert double_factorial(n) == expected


def test_log_double_factorial_matches_exact():
    for n in range(0, 60):
        assert log_double_factorial(n) == pytest.approx(math.log(double_factorial(n)), rel=1e-14, abs=1e-15)
    with pytest.raises(DomainError):
        double_factorial(-1)
