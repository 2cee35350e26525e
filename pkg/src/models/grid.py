from typing import Any, Callable, Dict, Sequence, Tuple, Union
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..config import settings
from ..errors import BlowupError, ParameterError
from .validation import reject_unknown

Number = Union[int, float]


@dataclass(frozen=True)
class Grid:
    """Periodic lattice on the box [-L/2, L/2)^d"""

    d: int
    n: int
    L: float = 2 * np.pi

    def __post_init__(self):
        if self.d not in (1, 2, 3):
            raise ParameterError(f"dimension must be 1, 2 or 3, got {self.d}")
        if self.n < 8 or self.n & (self.n - 1):
            raise ParameterError(f"points per axis must be a power of two >= 8, got {self.n}")
        if not self.L > 0:
            raise ParameterError(f"box length must be positive, got {self.L}")
        if self.n ** self.d > settings.max_grid_points:
            raise ParameterError(
                f"grid of {self.n ** self.d} points exceeds the budget of {settings.max_grid_points}"
            )
        object.__setattr__(self, "L", float(self.L))

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.n,) * self.d

    @property
    def size(self) -> int:
        return self.n ** self.d

    @property
    def spacing(self) -> float:
        return self.L / self.n

    @property
    def cell_volume(self) -> float:
        return self.spacing ** self.d

    @property
    def volume(self) -> float:
        return self.L ** self.d

    def axis_coordinates(self) -> np.ndarray:
        return -self.L / 2 + self.spacing * np.arange(self.n)

    @cached_property
    def coordinates(self) -> Tuple[np.ndarray, ...]:
        axis = self.axis_coordinates()
        return tuple(np.meshgrid(*([axis] * self.d), indexing="ij"))

    def points(self) -> np.ndarray:
        """Grid points as an (n^d, d) array in C order"""
        return np.stack([c.ravel() for c in self.coordinates], axis=1)

    @cached_property
    def mode_indices(self) -> Tuple[np.ndarray, ...]:
        """Integer mode numbers m_j per axis, broadcast over the grid"""
        m = np.fft.fftfreq(self.n, d=1.0 / self.n)
        return tuple(np.meshgrid(*([m] * self.d), indexing="ij"))

    @cached_property
    def wavevectors(self) -> Tuple[np.ndarray, ...]:
        scale = 2 * np.pi / self.L
        return tuple(scale * m for m in self.mode_indices)

    @cached_property
    def wavenumber_magnitude(self) -> np.ndarray:
        return np.sqrt(sum(k ** 2 for k in self.wavevectors))

    @cached_property
    def nyquist_masks(self) -> Tuple[np.ndarray, ...]:
        """Per-axis masks of the Nyquist plane m_j = -n/2"""
        return tuple(m == -(self.n // 2) for m in self.mode_indices)

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        keep = np.ones(self.shape, dtype=bool)
        for m in self.mode_indices:
            keep &= np.abs(m) <= self.n / 3
        return keep

    def scaled(self, factor: float) -> 'Grid':
        return Grid(self.d, self.n, self.L * factor)

    def to_dict(self) -> Dict[str, Any]:
        return {"d": self.d, "n": self.n, "L": self.L}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'Grid':
        reject_unknown(data, {"d", "n", "L"}, "grid")
        return cls(d=int(data["d"]), n=int(data["n"]), L=float(data.get("L", 2 * np.pi)))


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Real samples on a grid; read-only once built"""

    grid: Grid
    values: np.ndarray

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.size != self.grid.size:
            raise ParameterError(
                f"expected {self.grid.size} samples, got {values.size}"
            )
        values = values.reshape(self.grid.shape)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: Grid) -> 'ScalarField':
        return cls(grid, np.zeros(grid.shape))

    @classmethod
    def constant(cls, grid: Grid, c: float) -> 'ScalarField':
        return cls(grid, np.full(grid.shape, float(c)))

    @classmethod
    def from_function(cls, grid: Grid, fn: Callable[..., np.ndarray]) -> 'ScalarField':
        """Sample fn(y_1, ..., y_d) on the grid"""
        return cls(grid, np.broadcast_to(fn(*grid.coordinates), grid.shape))

    @classmethod
    def from_spectrum(cls, grid: Grid, spectrum: np.ndarray) -> 'ScalarField':
        from ..spectral.transforms import inverse
        return cls(grid, inverse(spectrum))

    @cached_property
    def spectrum(self) -> np.ndarray:
        from ..spectral.transforms import forward
        spectrum = forward(self.values)
        spectrum.setflags(write=False)
        return spectrum

    def is_finite(self) -> bool:
        return bool(np.all(np.isfinite(self.values)))

    def check_finite(self, label: str = "field", tau: float = None) -> 'ScalarField':
        if not self.is_finite():
            raise BlowupError(f"non-finite values in {label}", tau=tau)
        return self

    def is_constant(self) -> bool:
        return bool(np.all(self.values == self.values.flat[0]))

    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    def mean(self) -> float:
        return float(np.mean(self.values))

    def _coerce(self, other: Union['ScalarField', Number]) -> Union[np.ndarray, float]:
        if isinstance(other, ScalarField):
            if other.grid != self.grid:
                raise ParameterError("fields live on different grids")
            return other.values
        return float(other)

    def __add__(self, other):
        return ScalarField(self.grid, self.values + self._coerce(other))

    __radd__ = __add__

    def __sub__(self, other):
        return ScalarField(self.grid, self.values - self._coerce(other))

    def __rsub__(self, other):
        return ScalarField(self.grid, self._coerce(other) - self.values)

    def __mul__(self, other):
        return ScalarField(self.grid, self.values * self._coerce(other))

    __rmul__ = __mul__

    def __neg__(self):
        return ScalarField(self.grid, -self.values)


@dataclass(frozen=True, eq=False)
class VectorField:
    """d scalar components on one grid"""

    grid: Grid
    components: Tuple[ScalarField, ...] = field(default_factory=tuple)

    def __post_init__(self):
        components = tuple(self.components)
        if len(components) != self.grid.d:
            raise ParameterError(
                f"expected {self.grid.d} components, got {len(components)}"
            )
        for c in components:
            if c.grid != self.grid:
                raise ParameterError("vector components must share one grid")
        object.__setattr__(self, "components", components)

    @classmethod
    def zeros(cls, grid: Grid) -> 'VectorField':
        return cls(grid, tuple(ScalarField.zeros(grid) for _ in range(grid.d)))

    @classmethod
    def from_arrays(cls, grid: Grid, arrays: Sequence[np.ndarray]) -> 'VectorField':
        return cls(grid, tuple(ScalarField(grid, a) for a in arrays))

    def __getitem__(self, j: int) -> ScalarField:
        return self.components[j]

    def __iter__(self):
        return iter(self.components)

    def stacked(self) -> np.ndarray:
        return np.stack([c.values for c in self.components])

    def magnitude(self) -> ScalarField:
        return ScalarField(self.grid, np.sqrt(np.sum(self.stacked() ** 2, axis=0)))

    def is_finite(self) -> bool:
        return all(c.is_finite() for c in self.components)

    def check_finite(self, label: str = "vector field", tau: float = None) -> 'VectorField':
        if not self.is_finite():
            raise BlowupError(f"non-finite values in {label}", tau=tau)
        return self

    def max_abs(self) -> float:
        return self.magnitude().max_abs()

    def _map(self, other, op) -> 'VectorField':
        if isinstance(other, VectorField):
            return VectorField(self.grid, tuple(op(a, b) for a, b in zip(self, other)))
        return VectorField(self.grid, tuple(op(a, other) for a in self))

    def __add__(self, other):
        return self._map(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._map(other, lambda a, b: a - b)

    def __mul__(self, other):
        return self._map(other, lambda a, b: a * b)

    __rmul__ = __mul__

    def __neg__(self):
        return VectorField(self.grid, tuple(-c for c in self))
