"""
Compactly supported initial data on the periodic box
"""

import numpy as np

from ..models import Grid, InitialData, ScalarField, SimConfig, State, VectorField
from ..spectral import dealias
from ..spectral.transforms import inverse


def _smooth_step(s: np.ndarray) -> np.ndarray:
    """C-infinity step: 0 for s <= 0, 1 for s >= 1"""
    s = np.clip(s, 0.0, 1.0)
    with np.errstate(divide="ignore", over="ignore"):
        left = np.where(s > 0, np.exp(-1.0 / np.where(s > 0, s, 1.0)), 0.0)
        right = np.where(s < 1, np.exp(-1.0 / np.where(s < 1, 1.0 - s, 1.0)), 0.0)
    return left / (left + right)


def support_radius(grid: Grid, support_fraction: float) -> float:
    return support_fraction * grid.L / 2


def plateau(grid: Grid, support_fraction: float) -> np.ndarray:
    """Mollified plateau: 1 within half the support radius, 0 beyond it"""
    radius = support_radius(grid, support_fraction)
    r = np.sqrt(sum(c ** 2 for c in grid.coordinates))
    inner = radius / 2
    return _smooth_step((radius - r) / (radius - inner))


def band_limited_noise(grid: Grid, modes: int, beta: float, seed: int) -> np.ndarray:
    """Mean-zero random field with coefficients ~|k|^{-beta}, scaled to max |.| = 1"""
    rng = np.random.default_rng(seed)
    m = grid.mode_indices
    inside = np.ones(grid.shape, dtype=bool)
    for mj in m:
        inside &= np.abs(mj) <= modes
    k = grid.wavenumber_magnitude
    amplitude = np.zeros(grid.shape)
    amplitude[inside & (k > 0)] = k[inside & (k > 0)] ** (-beta)
    phases = rng.uniform(0.0, 2 * np.pi, size=grid.shape)
    spectrum = amplitude * np.exp(1j * phases)
    values = inverse(spectrum)
    peak = np.max(np.abs(values))
    return values / peak if peak > 0 else values


def fejer_project(f: ScalarField) -> ScalarField:
    """
    Cesaro mean of the dealiased modes: weights prod_j max(0, 1 - |m_j| / (K + 1)), K = n // 3

    The tensor Fejer kernel is nonnegative, so a nonnegative field stays nonnegative
    up to roundoff while its support in Fourier space matches the dealias band.
    """
    grid = f.grid
    band = grid.n // 3 + 1
    weights = np.ones(grid.shape)
    for m in grid.mode_indices:
        weights *= np.maximum(0.0, 1.0 - np.abs(m) / band)
    return ScalarField.from_spectrum(grid, weights * f.spectrum)


def build_initial_state(config: SimConfig) -> State:
    """
    Bump data N0 >= 0 (even) and W0 odd, projected onto the dealiased modes

    N0 goes through the Fejer projection rather than the sharp cutoff, which would
    undershoot below zero at the edge of the support.

    The optional modulation multiplies the bump by 1 + a*xi with |xi| <= 1 and a < 1,
    so N0 keeps its sign and support.
    """
    grid = config.grid
    initial: InitialData = config.initial
    bump = plateau(grid, initial.support_fraction)

    density = initial.n_amplitude * bump
    if initial.noise_amplitude > 0:
        xi = band_limited_noise(grid, initial.noise_modes, initial.noise_beta, config.seed)
        density = density * (1 + initial.noise_amplitude * xi)

    radius = support_radius(grid, initial.support_fraction)
    velocity = [initial.w_amplitude * (c / radius) * bump for c in grid.coordinates]

    N = fejer_project(ScalarField(grid, density))
    W = VectorField(grid, tuple(dealias(ScalarField(grid, v)) for v in velocity))
    return State(N, W, 0.0)
