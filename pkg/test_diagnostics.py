"""
Tests for the monitored functionals
"""

import math

import numpy as np
import pytest

from src.diagnostics import (
    compute_W,
    compute_Wk,
    compute_X,
    compute_Z,
    decay_constant,
    diagnostic_rows,
    envelope_dominates,
    envelope_values,
    fit_envelope_constant,
    inequality_residual_ratio,
    mass,
    physical_norm,
    smallest_k0,
    weighted_density_norm,
    weighted_velocity_norm,
)
from src.errors import DomainError, ParameterError
from src.models import Grid, ModelParams, ScalarField, State, SystemKind, VectorField
from src.spectral import sobolev_seminorm


def wave_state(tau=0.7, d=1):
    grid = Grid(d=d, n=32)
    N = ScalarField.from_function(grid, lambda *y: 2.0 + np.cos(y[0]))
    W = VectorField(grid, tuple(ScalarField.from_function(grid, lambda *y: np.sin(2 * y[0])) for _ in range(d)))
    return State(N, W, tau)


def test_physical_norm_scaling():
    state = wave_state()
    tau = state.tau
    assert physical_norm(state.N, 1.0, 2.0, tau) == pytest.approx(
        math.exp(-0.5 * tau) * sobolev_seminorm(state.N, 1.0), rel=1e-12
    )
    assert physical_norm(state.N, 0.0, math.inf, tau) == pytest.approx(3.0, rel=1e-12)
    assert mass(state) == pytest.approx(math.exp(0.5 * tau) * sobolev_seminorm(state.N, 0.0), rel=1e-12)


def test_weighted_norms_differ_by_shift():
    state = wave_state()
    sigma = 0.5
    pressureless = weighted_density_norm(state, 1.0, 2.0, sigma, SystemKind.PRESSURELESS)
    pressured = weighted_density_norm(state, 1.0, 2.0, sigma, SystemKind.PRESSURED)
    assert pressureless / pressured == pytest.approx(math.exp(sigma / 2 * state.tau), rel=1e-12)
    # (1+t)^{l - d/2 - 1} ||.||_{H^l_x} at l = d/2 + 1 is the bare norm
    w = weighted_velocity_norm(state, 1.5, 2.0)
    assert w == pytest.approx(physical_norm(state.W, 1.5, 2.0, state.tau), rel=1e-12)


def test_compute_X_matches_definition():
    state = wave_state()
    s, sigma, tau = 2.5, 0.5, state.tau
    n_top = physical_norm(state.N, s, 2.0, tau)
    expected = math.sqrt(physical_norm(state.W, s + sigma / 2, 2.0, tau) ** 2 + 4 * n_top ** 2)
    assert compute_X(state, s, sigma, SystemKind.PRESSURELESS) == pytest.approx(expected, rel=1e-12)
    expected_p = math.sqrt(physical_norm(state.W, s, 2.0, tau) ** 2 + n_top ** 2)
    assert compute_X(state, s, sigma, SystemKind.PRESSURED) == pytest.approx(expected_p, rel=1e-12)
    with pytest.raises(ParameterError):
        compute_X(state, 0.0, sigma, SystemKind.PRESSURELESS)


def test_compute_Z_positive_and_zero_on_zero_state():
    state = wave_state()
    assert compute_Z(state, 2.5, 0.5, SystemKind.PRESSURELESS) > 0
    zero = State.zeros(Grid(d=1, n=16), 1.0)
    assert compute_Z(zero, 2.5, 0.5, SystemKind.PRESSURELESS) == 0.0
    assert compute_Z(zero, 2.5, 0.5, SystemKind.PRESSURED) == 0.0


def test_smallest_k0():
    assert smallest_k0(0.5, 4.0) == 3
    assert smallest_k0(1.5, 3.0) == 1
    with pytest.raises(ParameterError):
        smallest_k0(0.5, 2.5)


def test_weighted_functionals():
    state = wave_state()
    value = compute_W(state, 3.0, 0.5, 0.25)
    assert value > 0
    assert compute_Wk(state, 4.0, 0.5, 0.25, 1) > 0
    with pytest.raises(ParameterError):
        compute_Wk(state, 4.0, 0.5, 0.25, 4)


def test_negative_power_of_vanishing_density():
    grid = Grid(d=1, n=16)
    state = State(ScalarField.from_function(grid, lambda y: 1 + np.cos(y)), VectorField.zeros(grid))
    with pytest.raises(DomainError):
        compute_W(state, 3.0, 0.5, 1.0)


def test_decay_constant():
    pressureless = ModelParams(SystemKind.PRESSURELESS, lam=-1, sigma=0.5)
    assert decay_constant(pressureless, 1) == pytest.approx(1.25)
    assert decay_constant(pressureless, 3) == pytest.approx(2.0)
    repulsive = ModelParams(SystemKind.PRESSURED, lam=-1, sigma=0.5, gamma=1.2)
    assert decay_constant(repulsive, 2) == pytest.approx(1.2)
    strong = ModelParams(SystemKind.PRESSURED, lam=1, sigma=1.5, gamma=2.0)
    assert decay_constant(strong, 2) == pytest.approx(2.0)


def test_diagnostic_rows_labels():
    state = wave_state()
    labels = [row[0] for row in diagnostic_rows(state, ModelParams(SystemKind.PRESSURELESS, -1, 0.5), 2.5)]
    assert labels == ["mass", "X", "Z"]
    pressured = ModelParams(SystemKind.PRESSURED, -1, 0.5, gamma=1.5)
    labels = [row[0] for row in diagnostic_rows(state, pressured, 4.0)]
    assert labels[:4] == ["mass", "X", "Z", "W"]
    assert "Wk1" in labels and "Wk3" in labels


def test_envelope_fit():
    t = np.linspace(0.0, 100.0, 201)
    C = 1.25
    Z0 = 0.3
    Z = Z0 * (1 + t) ** (-C) * np.exp(3.0 * t / (1 + t))
    np.testing.assert_allclose(envelope_values([0.0], Z0, 1.0, C), [2 * Z0])
    C0 = fit_envelope_constant(t, Z, C)
    assert C0 == pytest.approx(3.0 - math.log(2) * 101 / 100, rel=1e-9)
    assert envelope_dominates(t, Z, C0, C)
    assert not envelope_dominates(t, Z, C0 - 0.1, C)
    assert fit_envelope_constant(t, np.zeros_like(t), C) == 0.0


def test_inequality_residual_ratio():
    t = np.linspace(0.0, 10.0, 50)
    np.testing.assert_array_equal(inequality_residual_ratio(t, np.zeros_like(t), 1.0), 0.0)
    with pytest.raises(ParameterError):
        inequality_residual_ratio([0.0, 1.0], [1.0, 1.0], 1.0)
    Z = 1e-3 * (1 + t) ** -1.0
    ratio = inequality_residual_ratio(t, Z, 1.0)
    assert np.all(np.abs(ratio[1:-1]) < 1.0)


def test_weighted_functionals_are_translation_invariant():
    state = wave_state(d=2)

    def shifted(field):
        return ScalarField(field.grid, np.roll(field.values, (5, -3), axis=(0, 1)))

    moved = State(shifted(state.N), VectorField(state.grid, tuple(shifted(c) for c in state.W)), state.tau)
    assert compute_W(moved, 3.0, 0.5, 0.25) == pytest.approx(compute_W(state, 3.0, 0.5, 0.25), rel=1e-12)
    assert compute_Wk(moved, 4.0, 0.5, 0.25, 1) == pytest.approx(compute_Wk(state, 4.0, 0.5, 0.25, 1), rel=1e-12)


@pytest.mark.parametrize("tau", [0.0, 0.7])
def test_compute_W_without_density_weight(tau):
    # gamma = 2 gives gt = 1/2 and a unit weight n^0
    state = wave_state(tau=tau)
    s, sigma = 3.0, 0.5
    order = s - sigma / 2
    expected = 4 * math.exp(2 * (s - 1.5) * tau) * math.exp((1 - 2 * order) * tau) * sobolev_seminorm(state.N, order) ** 2
    assert compute_W(state, s, sigma, 0.5) == pytest.approx(expected, rel=1e-10)
