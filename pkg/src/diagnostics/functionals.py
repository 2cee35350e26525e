"""
Monitored functionals along trajectories

States are rescaled (y, tau); every functional here is reported in physical
scaling, using ||Lambda^l f||_{L^p_x} = (1+t)^{d/p - l} ||Lambda^l F||_{L^p_y}.
"""

import logging
import math
from typing import List, Sequence, Tuple

import numpy as np

from ..errors import DomainError, ParameterError
from ..models import ModelParams, ScalarField, State, SystemKind
from ..spectral import apply_fractional_laplacian, lambda_lp_norm

logger = logging.getLogger(__name__)

DiagnosticRow = Tuple[str, float, float, float, float]


def physical_norm(field, ell: float, p: float, tau: float) -> float:
    """||Lambda^ell f(t)||_{L^p_x} reconstructed from the rescaled field"""
    d = field.grid.d
    inv_p = 0.0 if math.isinf(p) else 1.0 / p
    return math.exp((d * inv_p - ell) * tau) * lambda_lp_norm(field, ell, p)


def _weighted(field, ell: float, p: float, tau: float, shift: float) -> float:
    d = field.grid.d
    inv_p = 0.0 if math.isinf(p) else 1.0 / p
    return math.exp((ell + shift - d * inv_p - 1) * tau) * physical_norm(field, ell, p, tau)


def weighted_density_norm(state: State, ell: float, p: float, sigma: float,
                          system: SystemKind = SystemKind.PRESSURELESS) -> float:
    """n_{l,p}(t) (pressureless) or its pressured analogue without the sigma/2 shift"""
    shift = sigma / 2 if system is SystemKind.PRESSURELESS else 0.0
    return _weighted(state.N, ell, p, state.tau, shift)


def weighted_velocity_norm(state: State, ell: float, p: float) -> float:
    return _weighted(state.W, ell, p, state.tau, 0.0)


def mass(state: State) -> float:
    """Physical ||n||_{L^2_x}"""
    return physical_norm(state.N, 0.0, 2.0, state.tau)


def compute_X(state: State, s: float, sigma: float, system: SystemKind) -> float:
    """
    Energy aggregate of the highest-order norms

    Args:
        state: rescaled state
        s: regularity index, s > 0
        sigma: interaction order
        system: pressureless uses ||w||_{H^{s+sigma/2}}^2 + 4||n||_{H^s}^2,
            pressured uses ||w||_{H^s}^2 + ||n||_{H^s}^2

    Returns:
        Square root of the aggregate, in physical scaling
    """
    if not s > 0:
        raise ParameterError(f"regularity index must be positive, got {s}")
    tau = state.tau
    n_top = physical_norm(state.N, s, 2.0, tau)
    if system is SystemKind.PRESSURELESS:
        w_top = physical_norm(state.W, s + sigma / 2, 2.0, tau)
        return math.sqrt(w_top ** 2 + 4 * n_top ** 2)
    w_top = physical_norm(state.W, s, 2.0, tau)
    return math.sqrt(w_top ** 2 + n_top ** 2)


def compute_Z(state: State, s: float, sigma: float, system: SystemKind) -> float:
    """Weighted aggregate Z(t) (pressureless) or its pressured analogue"""
    if not s > 0:
        raise ParameterError(f"regularity index must be positive, got {s}")
    n2 = weighted_density_norm(state, 0.0, 2.0, sigma, system)
    w2 = weighted_velocity_norm(state, 0.0, 2.0)
    if system is SystemKind.PRESSURELESS:
        y = math.sqrt(
            weighted_velocity_norm(state, s + sigma / 2, 2.0) ** 2
            + 4 * weighted_density_norm(state, s, 2.0, sigma, system) ** 2
        )
        return n2 + w2 + y
    y = math.sqrt(
        weighted_velocity_norm(state, s, 2.0) ** 2
        + weighted_density_norm(state, s, 2.0, sigma, system) ** 2
    )
    return math.sqrt(n2 ** 2 + w2 ** 2 + y ** 2)


def _density_weight(N: ScalarField, exponent: float) -> np.ndarray:
    density = np.maximum(N.values, 0.0)
    if exponent < 0 and np.any(density == 0):
        raise DomainError(f"negative power {exponent} of a density that vanishes somewhere")
    return density ** exponent


def compute_W(state: State, s: float, sigma: float, gamma_tilde: float) -> float:
    """(1+t)^{2(s-d/2-1)}/gt^2 * integral of n^{1/gt-2} |Lambda^{s-sigma/2} n|^2"""
    d = state.grid.d
    order = s - sigma / 2
    weight = _density_weight(state.N, 1.0 / gamma_tilde - 2.0)
    lifted = apply_fractional_laplacian(state.N, order).values
    integral_y = state.grid.cell_volume * float(np.sum(weight * lifted ** 2))
    integral_x = math.exp((d - 2 * order) * state.tau) * integral_y
    return math.exp(2 * (s - d / 2 - 1) * state.tau) * integral_x / gamma_tilde ** 2


def smallest_k0(sigma: float, s: float) -> int:
    """Smallest integer k with 2(1-sigma)/sigma < k <= 2(s-2)/sigma"""
    k0 = max(1, math.floor(2 * (1 - sigma) / sigma) + 1)
    if k0 > 2 * (s - 2) / sigma:
        raise ParameterError(
            f"no admissible integer k for sigma = {sigma}, s = {s}: need k <= {2 * (s - 2) / sigma:.4g}"
        )
    return k0


def compute_Wk(state: State, s: float, sigma: float, gamma_tilde: float, k: int) -> float:
    """(1+t)^{2(s-d/2-1)}/gt^{2k} * integral of n^{k(1/gt-2)} |Lambda^{s-k sigma/2} w|^2"""
    k0 = smallest_k0(sigma, s)
    if not 1 <= k <= k0:
        raise ParameterError(f"k must lie in [1, {k0}], got {k}")
    d = state.grid.d
    order = s - k * sigma / 2
    weight = _density_weight(state.N, k * (1.0 / gamma_tilde - 2.0))
    lifted = sum(apply_fractional_laplacian(c, order).values ** 2 for c in state.W)
    integral_y = state.grid.cell_volume * float(np.sum(weight * lifted))
    integral_x = math.exp((d - 2 * order) * state.tau) * integral_y
    return math.exp(2 * (s - d / 2 - 1) * state.tau) * integral_x / gamma_tilde ** (2 * k)


def decay_constant(params: ModelParams, d: int) -> float:
    """Exponent C of the (1+t)^{-C} envelope for Z"""
    sigma = params.sigma
    if params.system is SystemKind.PRESSURELESS:
        return 1 + min(1.0, (d - sigma) / 2)
    gt = params.gamma_tilde
    if sigma < 1 and params.lam < 0:
        return 1 + min(1.0, gt * d, (d - sigma) / 2)
    return 1 + min(1.0, d * gt)


def diagnostic_rows(state: State, params: ModelParams, s: float) -> List[DiagnosticRow]:
    """
    Rows (label, l, p, rescaled, physical) for one recorded state

    Aggregates are already scale-weighted, so both value columns hold the functional.
    """
    sigma, system = params.sigma, params.system
    rows: List[DiagnosticRow] = [
        ("mass", 0.0, 2.0, lambda_lp_norm(state.N, 0.0, 2.0), mass(state)),
    ]
    x_value = compute_X(state, s, sigma, system)
    z_value = compute_Z(state, s, sigma, system)
    rows.append(("X", s, 2.0, x_value, x_value))
    rows.append(("Z", s, 2.0, z_value, z_value))
    if system is SystemKind.PRESSURED:
        gt = params.gamma_tilde
        try:
            if 1.0 / gt >= 2:
                value = compute_W(state, s, sigma, gt)
                rows.append(("W", s, 2.0, value, value))
            for k in range(1, smallest_k0(sigma, s) + 1):
                value = compute_Wk(state, s, sigma, gt, k)
                rows.append((f"Wk{k}", s, 2.0, value, value))
        except (ParameterError, DomainError) as e:
            logger.debug("weighted functionals skipped: %s", e)
    return rows


def envelope_values(t: Sequence[float], Z0: float, C0: float, C: float) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    return 2 * np.exp(C0 * t / (1 + t)) * (1 + t) ** (-C) * Z0


def fit_envelope_constant(t: Sequence[float], Z: Sequence[float], C: float) -> float:
    """Smallest C0 >= 0 for which the envelope dominates the recorded Z"""
    t = np.asarray(t, dtype=float)
    Z = np.asarray(Z, dtype=float)
    Z0 = Z[0]
    if Z0 <= 0:
        return 0.0
    later = t > 0
    if not np.any(later):
        return 0.0
    needed = (np.log(Z[later] / (2 * Z0)) + C * np.log1p(t[later])) * (1 + t[later]) / t[later]
    return float(max(0.0, np.max(needed)))


def envelope_dominates(t: Sequence[float], Z: Sequence[float], C0: float, C: float,
                       rtol: float = 1e-12) -> bool:
    Z = np.asarray(Z, dtype=float)
    return bool(np.all(Z <= envelope_values(t, Z[0], C0, C) * (1 + rtol)))


def inequality_residual_ratio(t: Sequence[float], Z: Sequence[float], C: float) -> np.ndarray:
    """(dZ/dt + C Z/(1+t)) / (Z^2 + Z/(1+t)^2) with dZ/dt from centered differences"""
    t = np.asarray(t, dtype=float)
    Z = np.asarray(Z, dtype=float)
    if t.size < 3:
        raise ParameterError("need at least three samples to difference")
    dZ = np.gradient(Z, t)
    numerator = dZ + C * Z / (1 + t)
    denominator = Z ** 2 + Z / (1 + t) ** 2
    out = np.zeros_like(Z)
    positive = denominator > 0
    out[positive] = numerator[positive] / denominator[positive]
    return out
