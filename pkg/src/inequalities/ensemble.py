"""
Random band-limited field ensembles

Coefficients live in mode space (integer wavevectors with |m_j| <= max_mode),
so one (seed, beta, max_mode) describes the same continuous functions at every
resolution. Fields are real and mean-zero.
"""

import itertools
import logging
from typing import List
from dataclasses import dataclass, field

import numpy as np

from ..errors import ParameterError
from ..models import Grid, ScalarField
from ..spectral.transforms import inverse

logger = logging.getLogger(__name__)


def half_modes(d: int, max_mode: int) -> np.ndarray:
    """Nonzero integer wavevectors in [-max_mode, max_mode]^d whose first nonzero entry is positive"""
    modes = []
    for m in itertools.product(range(-max_mode, max_mode + 1), repeat=d):
        nonzero = [x for x in m if x != 0]
        if nonzero and nonzero[0] > 0:
            modes.append(m)
    return np.array(modes, dtype=int).reshape(-1, d)


def synthesize(grid: Grid, modes: np.ndarray, amplitudes: np.ndarray, phases: np.ndarray) -> ScalarField:
    """Sample sum_m A_m cos(k_m . y + phi_m) exactly through one inverse FFT"""
    if modes.size and np.max(np.abs(modes)) > grid.n // 3:
        raise ParameterError(f"modes up to {np.max(np.abs(modes))} exceed n/3 for n = {grid.n}")
    k = 2 * np.pi * modes / grid.L
    origin = -grid.L / 2
    coefficients = grid.size * 0.5 * amplitudes * np.exp(1j * (phases + origin * k.sum(axis=1)))
    spectrum = np.zeros(grid.shape, dtype=complex)
    positive = tuple((modes % grid.n).T)
    negative = tuple(((-modes) % grid.n).T)
    spectrum[positive] = coefficients
    spectrum[negative] = np.conj(coefficients)
    return ScalarField(grid, inverse(spectrum))


@dataclass
class FieldEnsemble:
    grid: Grid
    count: int
    seed: int
    beta: float = 2.0
    max_mode: int = 16
    stream: int = 0
    fields: List[ScalarField] = field(default_factory=list)

    @classmethod
    def generate(cls, grid: Grid, count: int, seed: int, beta: float = 2.0,
                 max_mode: int = 16, stream: int = 0) -> "FieldEnsemble":
        """
        Draw count fields with coefficients |k|^{-beta} and uniform random phases

        Args:
            grid: sampling grid; max_mode must not exceed n/3
            count: ensemble size
            seed: base seed; member i uses the seed sequence (seed, stream, i)
            beta: spectral decay exponent
            max_mode: band limit per axis
            stream: separates independent ensembles drawn from one seed

        Returns:
            FieldEnsemble with its fields populated
        """
        if count < 1:
            raise ParameterError(f"ensemble size must be positive, got {count}")
        if max_mode < 1 or max_mode > grid.n // 3:
            raise ParameterError(f"max_mode must lie in [1, n/3] = [1, {grid.n // 3}], got {max_mode}")
        if beta < 2:
            logger.warning("beta = %g below 2: grid maxima may underestimate L^inf norms", beta)
        modes = half_modes(grid.d, max_mode)
        k = np.sqrt(np.sum((2 * np.pi * modes / grid.L) ** 2, axis=1))
        amplitudes = k ** (-beta)
        amplitudes = amplitudes / np.sqrt(np.sum(amplitudes ** 2))
        fields = []
        for i in range(count):
            rng = np.random.default_rng([seed, stream, i])
            phases = rng.uniform(0.0, 2 * np.pi, size=len(modes))
            fields.append(synthesize(grid, modes, amplitudes, phases))
        return cls(grid=grid, count=count, seed=seed, beta=beta, max_mode=max_mode, stream=stream, fields=fields)

    def __len__(self) -> int:
        return len(self.fields)

    def __iter__(self):
        return iter(self.fields)
