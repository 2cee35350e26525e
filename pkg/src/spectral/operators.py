"""
Fourier-multiplier operators and norms on periodic grids

All functions are pure: inputs are read-only fields, outputs are new fields.
"""

from functools import lru_cache
from typing import Union

import numpy as np

from ..models import Grid, ScalarField, VectorField
from ..errors import ParameterError

Field = Union[ScalarField, VectorField]


@lru_cache(maxsize=128)
def fractional_symbol(grid: Grid, s: float) -> np.ndarray:
    """|k|^s with the zero mode set to 1 for s == 0 and 0 otherwise"""
    if s == 0:
        symbol = np.ones(grid.shape)
    else:
        k = grid.wavenumber_magnitude
        symbol = np.zeros(grid.shape)
        nonzero = k > 0
        symbol[nonzero] = k[nonzero] ** s
    symbol.setflags(write=False)
    return symbol


@lru_cache(maxsize=128)
def derivative_symbol(grid: Grid, axis: int) -> np.ndarray:
    """i k_j with the Nyquist plane removed so the result stays real"""
    symbol = 1j * grid.wavevectors[axis]
    symbol = np.where(grid.nyquist_masks[axis], 0.0, symbol)
    symbol.setflags(write=False)
    return symbol


def apply_fractional_laplacian(f: ScalarField, s: float) -> ScalarField:
    """
    Apply Lambda^s = (-Laplacian)^{s/2}

    Args:
        f: input field
        s: order of the multiplier; any real value

    Returns:
        Field with Fourier coefficients |k|^s f_hat(k); the mean survives only when s == 0
    """
    f.check_finite("fractional Laplacian input")
    if s == 0:
        return f
    return ScalarField.from_spectrum(f.grid, fractional_symbol(f.grid, s) * f.spectrum)


def gradient(f: ScalarField) -> VectorField:
    f.check_finite("gradient input")
    spec = f.spectrum
    return VectorField(f.grid, tuple(
        ScalarField.from_spectrum(f.grid, derivative_symbol(f.grid, j) * spec)
        for j in range(f.grid.d)
    ))


def divergence(v: VectorField) -> ScalarField:
    v.check_finite("divergence input")
    total = sum(derivative_symbol(v.grid, j) * c.spectrum for j, c in enumerate(v))
    return ScalarField.from_spectrum(v.grid, total)


def hessian(f: ScalarField) -> np.ndarray:
    """Second derivatives as a (d, d, *grid.shape) array"""
    first = gradient(f)
    return np.stack([gradient(c).stacked() for c in first])


def riesz_force(f: ScalarField, sigma: float) -> VectorField:
    """
    Apply the interaction multiplier grad Lambda^{-sigma}

    Component j has symbol i k_j |k|^{-sigma}; the mean of f is projected out.
    """
    d = f.grid.d
    if not 0 < sigma < min(d, 2):
        raise ParameterError(f"sigma must lie in (0, {min(d, 2)}) for d = {d}, got {sigma}")
    f.check_finite("interaction input")
    potential = fractional_symbol(f.grid, -sigma) * f.spectrum
    return VectorField(f.grid, tuple(
        ScalarField.from_spectrum(f.grid, derivative_symbol(f.grid, j) * potential)
        for j in range(d)
    ))


def dealias(f: ScalarField) -> ScalarField:
    """Zero every mode with some |m_j| > n/3"""
    return ScalarField.from_spectrum(f.grid, np.where(f.grid.dealias_mask, f.spectrum, 0.0))


def dealiased_product(a: ScalarField, b: ScalarField) -> ScalarField:
    return dealias(a * b)


def _spectral_energy(f: ScalarField, order: float) -> float:
    grid = f.grid
    weight = grid.volume / grid.size ** 2
    return float(weight * np.sum(fractional_symbol(grid, 2 * order) * np.abs(f.spectrum) ** 2))


def hdot_norm(f: Field, order: float) -> float:
    """||Lambda^order f||_{L^2} for any real order; negative orders drop the mean"""
    if isinstance(f, VectorField):
        return float(np.sqrt(sum(_spectral_energy(c, order) for c in f)))
    f.check_finite("norm input")
    return float(np.sqrt(_spectral_energy(f, order)))


def sobolev_seminorm(f: Field, ell: float) -> float:
    """
    Homogeneous Sobolev seminorm by Plancherel

    Args:
        f: scalar or vector field; vectors sum component energies
        ell: smoothness index, ell >= 0; ell == 0 gives the L^2 norm

    Returns:
        (sum_k |k|^{2 ell} |f_hat(k)|^2 * L^d / n^{2d})^{1/2}
    """
    if ell < 0:
        raise ParameterError(f"seminorm order must be nonnegative, got {ell}")
    return hdot_norm(f, ell)


def lp_norm(f: Field, p: float) -> float:
    """Quadrature L^p norm with cell weight (L/n)^d; vectors use the pointwise magnitude"""
    if isinstance(f, VectorField):
        f = f.magnitude()
    if not (p >= 1):
        raise ParameterError(f"p must be >= 1, got {p}")
    values = np.abs(f.values)
    if np.isinf(p):
        return float(np.max(values))
    return float((f.grid.cell_volume * np.sum(values ** p)) ** (1.0 / p))


def lambda_lp_norm(f: Field, ell: float, p: float) -> float:
    """||Lambda^ell f||_{L^p}; reduces to the seminorm for p = 2"""
    if p == 2:
        return sobolev_seminorm(f, ell)
    if isinstance(f, VectorField):
        if ell == 0:
            return lp_norm(f, p)
        return lp_norm(VectorField(f.grid, tuple(apply_fractional_laplacian(c, ell) for c in f)), p)
    return lp_norm(apply_fractional_laplacian(f, ell), p)


def gradient_sup(f: ScalarField) -> float:
    """||grad f||_{L^inf} with the Euclidean pointwise norm"""
    return gradient(f).max_abs()


def hessian_sup(f: ScalarField) -> float:
    """||grad^2 f||_{L^inf} with the pointwise Frobenius norm"""
    h = hessian(f)
    return float(np.max(np.sqrt(np.sum(h ** 2, axis=(0, 1)))))
