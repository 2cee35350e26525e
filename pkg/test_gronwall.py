"""
Tests for the comparison integration of the Gronwall-type inequality
"""

import math

import numpy as np
import pytest

from src.errors import ConfigError, ParameterError
from src.gronwall import (
    GronwallParams,
    bootstrap_constant,
    bootstrap_threshold,
    envelope,
    find_threshold_M,
    integrate_inequality,
    linear_threshold,
    random_admissible_params,
    trajectory_table,
    verify_lemma,
)


def bernoulli_threshold(T, quadratic_weight=1.0):
    """Exact threshold for a = 2, C* = 1 when the quadratic term carries the given weight"""
    return 1.0 / (2 * quadratic_weight * (math.exp(T / (1 + T)) - 1))


def test_zero_initial_value_stays_zero():
    trajectory = integrate_inequality(GronwallParams(a=2, C_star=1), 0.0, T=100.0)
    assert np.all(trajectory.y == 0.0)
    assert not trajectory.blew_up
    table = trajectory_table(GronwallParams(a=2, C_star=1), trajectory, 0.0)
    assert list(table.columns) == ["t", "Y", "envelope", "margin"]
    assert np.all(table["margin"] == 0.0)


def test_pure_decay_without_forcing():
    params = GronwallParams(a=2.5, C_star=0.0)
    trajectory = integrate_inequality(params, 0.3, T=1e4)
    np.testing.assert_allclose(trajectory.y * (1 + trajectory.t) ** 2.5, 0.3, rtol=1e-9)
    assert trajectory.slope_ok
    assert verify_lemma(params, 0.3, T=1e4)


def test_envelope_values():
    params = GronwallParams(a=2, C_star=1)
    assert envelope(params, 0.1, 0.0) == pytest.approx(0.2)
    t = np.array([0.0, 1.0, 1e6])
    expected = 2 * np.exp(t / (1 + t)) * (1 + t) ** -2 * 0.1
    np.testing.assert_allclose(envelope(params, 0.1, t), expected)


def test_parameter_validation():
    with pytest.raises(ParameterError):
        GronwallParams(a=1.0, C_star=1.0)
    with pytest.raises(ParameterError):
        GronwallParams(a=2.0, C_star=-1.0)
    with pytest.raises(ParameterError):
        GronwallParams(a=2.0, C_star=1.0, b=(1.0,), c=())
    with pytest.raises(ParameterError):
        GronwallParams(a=2.0, C_star=1.0, b=(1.0,), c=(2.0,), c_P=1)
    with pytest.raises(ParameterError):
        GronwallParams(a=2.0, C_star=1.0, b=(0.0,), c=(-1.0,), c_P=1)
    with pytest.raises(ParameterError):
        GronwallParams(a=2.0, C_star=1.0, c_P=2)
    with pytest.raises(ParameterError):
        integrate_inequality(GronwallParams(a=2, C_star=1), -1.0)


def test_params_from_dict():
    params = GronwallParams.from_dict({"a": 2, "C_star": 1, "b": [1], "c": [0.5], "c_P": 1})
    assert params.N == 1
    assert GronwallParams.from_dict(params.to_dict()) == params
    with pytest.raises(ConfigError):
        GronwallParams.from_dict({"a": 2, "C_star": 1, "C": 3})
    with pytest.raises(ConfigError):
        GronwallParams.from_dict({"a": 2})


def test_small_data_stays_below_envelope():
    params = GronwallParams(a=2, C_star=1)
    assert verify_lemma(params, 1e-3, T=1e3)
    trajectory = integrate_inequality(params, 1e-3, T=1e4)
    assert trajectory.slope_ok
    assert trajectory.asymptotic_slope == pytest.approx(-2.0, abs=0.02)


def test_large_data_blows_up():
    params = GronwallParams(a=2, C_star=1)
    trajectory = integrate_inequality(params, 10.0, T=100.0)
    assert trajectory.blew_up
    # Bernoulli blowup where e^{t/(1+t)} - 1 = 1/Y0
    u = math.log1p(0.1)
    assert trajectory.blowup_time == pytest.approx(u / (1 - u), rel=1e-3)
    assert not verify_lemma(params, 10.0, T=100.0)


STIFF_PARAMS = dict(a=1.5089, C_star=1.2337, b=(1.789, 0.8685, 1.9907), c=(0.7208, 1.2542, 2.2007), c_P=1)


def test_step_size_collapse_counts_as_blowup():
    params = GronwallParams(**STIFF_PARAMS)
    trajectory = integrate_inequality(params, 1.0, T=1e4)
    assert trajectory.blew_up
    assert 0 <= trajectory.blowup_time < 1e4
    assert not verify_lemma(params, 1.0, T=1e4)


def test_threshold_search_through_fast_blowup():
    params = GronwallParams(**STIFF_PARAMS)
    result = find_threshold_M(params, T=1e4, resolution=1e-2)
    assert result.consistent
    assert 0 < result.M < 1.0
    assert verify_lemma(params, 0.999 * result.M, T=1e4)


def test_linear_threshold_closed_form():
    params = GronwallParams(a=2, C_star=1)
    assert linear_threshold(params, 1e4) == pytest.approx(bernoulli_threshold(1e4), rel=1e-9)
    assert linear_threshold(GronwallParams(a=2, C_star=0), 1e4) == math.inf
    with pytest.raises(ParameterError):
        linear_threshold(GronwallParams(a=2, C_star=1, b=(1,), c=(1,), c_P=1))


def test_threshold_matches_closed_form():
    params = GronwallParams(a=2, C_star=1)
    result = find_threshold_M(params, T=1e4)
    assert not result.unbounded
    assert result.M == pytest.approx(bernoulli_threshold(1e4), rel=2e-3)
    assert result.M <= bernoulli_threshold(1e4) * (1 + 1e-6)
    assert result.consistent
    assert result.bootstrap_threshold == pytest.approx(1 / (4 * math.e), rel=1e-9)


def test_threshold_with_pressure_term():
    # with b = c = 1 the extra term doubles the quadratic coefficient
    params = GronwallParams(a=2, C_star=1, b=(1,), c=(1,), c_P=1)
    result = find_threshold_M(params, T=1e4)
    assert result.M > 0
    assert result.consistent
    assert result.M == pytest.approx(bernoulli_threshold(1e4, quadratic_weight=2.0), rel=2e-3)
    verify_lemma(params, 10 * result.M, T=1e4)


def test_threshold_decreases_with_C_star():
    thresholds = [find_threshold_M(GronwallParams(a=2, C_star=C), T=100.0).M for C in (0.5, 1.0, 2.0)]
    assert thresholds[0] > thresholds[1] > thresholds[2]


def test_unforced_threshold_is_unbounded():
    result = find_threshold_M(GronwallParams(a=2, C_star=0), T=10.0, max_expansions=5)
    assert result.unbounded
    assert result.consistent


def test_bootstrap_threshold_solves_condition():
    for params in [GronwallParams(a=1.5, C_star=2.0),
                   GronwallParams(a=3.0, C_star=0.5, b=(0.5, 1.5), c=(0.0, 1.0), c_P=1)]:
        z = bootstrap_threshold(params)
        assert bootstrap_constant(params, z) == pytest.approx(1.0, rel=1e-9)
    assert bootstrap_threshold(GronwallParams(a=2, C_star=0)) == math.inf


def test_random_params_are_admissible():
    rng = np.random.default_rng(0)
    for _ in range(200):
        params = random_admissible_params(rng)
        assert 1 < params.a <= 4
        assert 0 < params.C_star <= 3
        assert 0 <= params.N <= 3
        assert all(ci < params.a * bi for bi, ci in zip(params.b, params.c))


@pytest.mark.slow
def test_random_params_certified_below_threshold():
    rng = np.random.default_rng(2024)
    for _ in range(100):
        params = random_admissible_params(rng)
        result = find_threshold_M(params, T=1e4, resolution=1e-2)
        assert result.consistent, params
        assert verify_lemma(params, 0.999 * result.M, T=1e4), params
