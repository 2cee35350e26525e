"""
Left-to-right ratios of commutator, product and interpolation estimates

Each ratio returns exactly 0.0 on its structural zero case (constant f for the
commutators) and raises DegenerateInputError when its right side vanishes
otherwise. Products entering a left side are dealiased.
"""

import math
from typing import Dict, Tuple

import numpy as np

from ..errors import DegenerateInputError, ParameterError
from ..models import ScalarField, VectorField
from ..spectral import (
    apply_fractional_laplacian,
    dealias,
    dealiased_product,
    gradient,
    gradient_sup,
    hdot_norm,
    hessian_sup,
    lp_norm,
)
from ..spectral.operators import derivative_symbol, fractional_symbol


def _same_grid(f: ScalarField, g: ScalarField) -> None:
    if f.grid != g.grid:
        raise ParameterError("fields live on different grids")


def _ratio(lhs: float, rhs: float, label: str) -> float:
    if rhs == 0:
        raise DegenerateInputError(f"{label}: right-hand side vanishes")
    return lhs / rhs


def commutator(f: ScalarField, s: float, g: ScalarField) -> ScalarField:
    """[f, Lambda^s] g = f Lambda^s g - Lambda^s (f g)"""
    _same_grid(f, g)
    if f.is_constant():
        return ScalarField.zeros(f.grid)
    return dealiased_product(f, apply_fractional_laplacian(g, s)) - apply_fractional_laplacian(
        dealiased_product(f, g), s
    )


def _grad_lambda(f: ScalarField, order: float) -> VectorField:
    """grad Lambda^order f"""
    grid = f.grid
    spec = fractional_symbol(grid, order) * f.spectrum
    return VectorField(grid, tuple(
        ScalarField.from_spectrum(grid, derivative_symbol(grid, j) * spec) for j in range(grid.d)
    ))


def ratio_tech1(f: ScalarField, g: ScalarField, s: float) -> float:
    """||[f, Lambda^s] g||_2 / (||f||_{H^s} ||g||_inf + ||grad f||_inf ||g||_{H^{s-1}})"""
    if not s > 0:
        raise ParameterError(f"s must be positive, got {s}")
    _same_grid(f, g)
    if f.is_constant():
        return 0.0
    lhs = hdot_norm(commutator(f, s, g), 0.0)
    rhs = hdot_norm(f, s) * lp_norm(g, math.inf) + gradient_sup(f) * hdot_norm(g, s - 1)
    return _ratio(lhs, rhs, "first-order commutator estimate")


def ratio_tech2(f: ScalarField, g: ScalarField, s: float) -> float:
    """
    Second-order commutator estimate with the leading term removed

    ||[f, Lambda^s] g - s grad f . Lambda^{s-2} grad g||_2
    over ||f||_{H^s} ||g||_inf + ||grad^2 f||_inf ||g||_{H^{s-2}}
    """
    if not s > 1:
        raise ParameterError(f"s must exceed 1, got {s}")
    _same_grid(f, g)
    if f.is_constant():
        return 0.0
    grad_f = gradient(f)
    lifted = _grad_lambda(g, s - 2)
    leading = dealiased_product(grad_f[0], lifted[0])
    for j in range(1, f.grid.d):
        leading = leading + dealiased_product(grad_f[j], lifted[j])
    lhs = hdot_norm(commutator(f, s, g) - s * leading, 0.0)
    rhs = hdot_norm(f, s) * lp_norm(g, math.inf) + hessian_sup(f) * hdot_norm(g, s - 2)
    return _ratio(lhs, rhs, "second-order commutator estimate")


def ratio_tech5(f: ScalarField, g: ScalarField, sigma: float) -> float:
    """
    ||[grad Lambda^{-sigma/2}, f] g||_2
    over (||Lambda^{1-sigma} f||_inf + ||f||_{H^{d/2+1-sigma}}) ||Lambda^{sigma/2} g||_2
    """
    if not 0 < sigma < 1:
        raise ParameterError(f"sigma must lie in (0, 1), got {sigma}")
    _same_grid(f, g)
    if f.is_constant():
        return 0.0
    d = f.grid.d
    outer = _grad_lambda(dealiased_product(f, g), -sigma / 2)
    inner = _grad_lambda(g, -sigma / 2)
    lhs = hdot_norm(VectorField(f.grid, tuple(
        outer[j] - dealiased_product(f, inner[j]) for j in range(d)
    )), 0.0)
    rhs = (lp_norm(apply_fractional_laplacian(f, 1 - sigma), math.inf) + hdot_norm(f, d / 2 + 1 - sigma)) \
        * hdot_norm(g, sigma / 2)
    return _ratio(lhs, rhs, "interaction commutator estimate")


def ratio_moser(f: ScalarField, g: ScalarField, s: float) -> float:
    """
    ||[Lambda^s, f] g||_2 over

        (||Lambda f||_inf + ||grad f||_inf) ||Lambda^{s-1} g||_2 + ||g Lambda^s f||_2   for 1 <= s < 2
        ||Lambda^{s/2} f||_inf ||Lambda^{s/2} g||_2 + ||g Lambda^s f||_2                 for 0 < s < 1
    """
    if not 0 < s < 2:
        raise ParameterError(f"s must lie in (0, 2), got {s}")
    _same_grid(f, g)
    if f.is_constant():
        return 0.0
    lhs = hdot_norm(commutator(f, s, g), 0.0)
    tail = lp_norm(g * apply_fractional_laplacian(f, s), 2.0)
    if s >= 1:
        rhs = (lp_norm(apply_fractional_laplacian(f, 1.0), math.inf) + gradient_sup(f)) * hdot_norm(g, s - 1) + tail
    else:
        s1 = s / 2
        rhs = lp_norm(apply_fractional_laplacian(f, s1), math.inf) * hdot_norm(g, s - s1) + tail
    return _ratio(lhs, rhs, "two-term commutator estimate")


def ratio_linfty_interp(f: ScalarField, s: float, eps: float) -> float:
    """||Lambda^s f||_inf / (||f||_{H^{d/2+s+eps}} ||f||_{H^{d/2+s-eps}})^{1/2}"""
    d = f.grid.d
    if not s > 0:
        raise ParameterError(f"s must be positive, got {s}")
    if not 0 < eps < d / 2:
        raise ParameterError(f"eps must lie in (0, {d / 2}), got {eps}")
    if f.is_constant():
        return 0.0
    lhs = lp_norm(apply_fractional_laplacian(f, s), math.inf)
    rhs = math.sqrt(hdot_norm(f, d / 2 + s + eps) * hdot_norm(f, d / 2 + s - eps))
    return _ratio(lhs, rhs, "L^inf interpolation")


def ratio_composition(f: ScalarField, alpha: float, s: float) -> float:
    """||(|f|^alpha)||_{H^s} / (||f||_inf^{alpha-1} ||f||_{H^s}), power taken pointwise then dealiased"""
    if not alpha >= 1:
        raise ParameterError(f"alpha must be at least 1, got {alpha}")
    if not 0 <= s < alpha + 0.5:
        raise ParameterError(f"s must lie in [0, {alpha + 0.5}), got {s}")
    if s > 0 and f.is_constant():
        return 0.0
    power = dealias(ScalarField(f.grid, np.abs(f.values) ** alpha))
    lhs = hdot_norm(power, s)
    rhs = f.max_abs() ** (alpha - 1) * hdot_norm(f, s)
    return _ratio(lhs, rhs, "composition estimate")


def kato_ponce_exponents(d: int, sigma: float) -> Dict[str, float]:
    """
    Lebesgue exponents (r, p1, q1, p2, q2) used with the interaction:
    p1 = 2d/sigma, q1 = 1/(1/2 - sigma/(2d)), r = 2, with the second pair swapped
    """
    if not 0 < sigma < d:
        raise ParameterError(f"sigma must lie in (0, {d}), got {sigma}")
    p1 = 2 * d / sigma
    q1 = 1 / (0.5 - sigma / (2 * d))
    return {"r": 2.0, "p1": p1, "q1": q1, "p2": q1, "q2": p1}


def _holder_check(r: float, pair: Tuple[float, float], label: str) -> None:
    inv = sum(0.0 if math.isinf(x) else 1.0 / x for x in pair)
    if not math.isclose(1.0 / r, inv, rel_tol=1e-12, abs_tol=1e-12):
        raise ParameterError(f"{label}: 1/r = {1 / r:.6g} but the exponents give {inv:.6g}")


def ratio_kato_ponce(f: ScalarField, g: ScalarField, s: float, r: float = 2.0,
                     p1: float = math.inf, q1: float = 2.0, p2: float = 2.0, q2: float = math.inf) -> float:
    """
    ||Lambda^s (f g)||_r / (||Lambda^s f||_{p1} ||g||_{q1} + ||f||_{p2} ||Lambda^s g||_{q2})

    Requires 1/r = 1/p1 + 1/q1 = 1/p2 + 1/q2 with r in (1, inf) and the rest in (1, inf].
    """
    if not s > 0:
        raise ParameterError(f"s must be positive, got {s}")
    if not 1 < r < math.inf or not all(x > 1 for x in (p1, q1, p2, q2)):
        raise ParameterError("need r in (1, inf) and p1, q1, p2, q2 in (1, inf]")
    _holder_check(r, (p1, q1), "first pair")
    _holder_check(r, (p2, q2), "second pair")
    _same_grid(f, g)
    if f.max_abs() == 0 or g.max_abs() == 0:
        return 0.0
    lhs = lp_norm(apply_fractional_laplacian(dealiased_product(f, g), s), r)
    rhs = lp_norm(apply_fractional_laplacian(f, s), p1) * lp_norm(g, q1) \
        + lp_norm(f, p2) * lp_norm(apply_fractional_laplacian(g, s), q2)
    return _ratio(lhs, rhs, "Kato-Ponce estimate")
