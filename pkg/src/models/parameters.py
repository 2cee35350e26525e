from typing import Any, Dict, List, Optional
from dataclasses import dataclass, field
from enum import Enum
import math

from ..errors import ConfigError, ParameterError
from .grid import Grid, ScalarField, VectorField
from .validation import reject_unknown, require


class SystemKind(Enum):
    PRESSURELESS = "pressureless"
    PRESSURED = "pressured"


def regularity_lower_bound(system: SystemKind, lam: int, d: int, sigma: float) -> float:
    """Strict lower bound on s required by the decay theorem for these parameters"""
    if system is SystemKind.PRESSURELESS:
        return max(2.0, d / 2 + 1)
    if sigma >= 1:
        return d / 2 + 1
    if lam < 0:
        return max(2 + sigma / 2, d / 2 + 1)
    return max(3 - sigma / 2, d / 2 + 1)


@dataclass(frozen=True)
class ModelParams:
    system: SystemKind = SystemKind.PRESSURELESS
    lam: int = -1
    sigma: float = 0.5
    gamma: Optional[float] = None

    def __post_init__(self):
        if isinstance(self.system, str):
            object.__setattr__(self, "system", SystemKind(self.system))
        if self.lam not in (1, -1):
            raise ParameterError(f"interaction sign must be +1 or -1, got {self.lam}")
        if self.system is SystemKind.PRESSURELESS:
            if self.lam != -1:
                raise ParameterError("the pressureless system is only posed in the repulsive case (lam = -1)")
        else:
            if self.gamma is None or not self.gamma > 1:
                raise ParameterError(f"pressured system needs gamma > 1, got {self.gamma}")

    @property
    def c_p(self) -> int:
        return 1 if self.system is SystemKind.PRESSURED else 0

    @property
    def gamma_tilde(self) -> Optional[float]:
        if self.gamma is None:
            return None
        return (self.gamma - 1) / 2

    @property
    def kappa(self) -> Optional[float]:
        if self.gamma is None:
            return None
        return 2 * math.sqrt(self.gamma) / (self.gamma - 1)

    def validate_for(self, d: int) -> None:
        if not 0 < self.sigma < min(d, 2):
            raise ParameterError(f"sigma must lie in (0, {min(d, 2)}) for d = {d}, got {self.sigma}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "system": self.system.value,
            "lam": self.lam,
            "sigma": self.sigma,
            "gamma": self.gamma,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ModelParams':
        reject_unknown(data, {"system", "lam", "sigma", "gamma"}, "params")
        try:
            system = SystemKind(data.get("system", "pressureless"))
        except ValueError:
            raise ConfigError(f"params: unknown system '{data.get('system')}'")
        gamma = data.get("gamma")
        return cls(
            system=system,
            lam=int(data.get("lam", -1)),
            sigma=float(require(data, "sigma", "params")),
            gamma=None if gamma is None else float(gamma),
        )


@dataclass(frozen=True)
class InitialData:
    """Smooth plateau bump data with an optional seeded band-limited modulation"""

    n_amplitude: float = 0.01
    w_amplitude: float = 0.0
    support_fraction: float = 0.5
    noise_amplitude: float = 0.0
    noise_modes: int = 8
    noise_beta: float = 2.0

    def __post_init__(self):
        if not 0 < self.support_fraction <= 1:
            raise ParameterError(f"support fraction must lie in (0, 1], got {self.support_fraction}")
        if not 0 <= self.noise_amplitude < 1:
            raise ParameterError(f"noise amplitude must lie in [0, 1), got {self.noise_amplitude}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "n_amplitude": self.n_amplitude,
            "w_amplitude": self.w_amplitude,
            "support_fraction": self.support_fraction,
            "noise_amplitude": self.noise_amplitude,
            "noise_modes": self.noise_modes,
            "noise_beta": self.noise_beta,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'InitialData':
        reject_unknown(data, cls().to_dict().keys(), "initial")
        return cls(**{k: (int(v) if k == "noise_modes" else float(v)) for k, v in data.items()})


@dataclass
class SimConfig:
    params: ModelParams
    grid: Grid
    dt: float = 0.01
    tau_end: float = 3.0
    initial: InitialData = field(default_factory=InitialData)
    cadence: int = 10
    ell_list: List[float] = field(default_factory=lambda: [0.0, 1.0, 2.0])
    p_list: List[float] = field(default_factory=lambda: [2.0])
    seed: int = 0
    s: Optional[float] = None
    snapshot_every: int = 0
    cfl_limit: float = 0.5
    clamp_tol: float = 1e-8
    clamp_warn_fraction: float = 0.01
    blowup_amplitude: float = 1e8

    def __post_init__(self):
        if not self.dt > 0:
            raise ParameterError(f"time step must be positive, got {self.dt}")
        if not self.tau_end > 0:
            raise ParameterError(f"horizon must be positive, got {self.tau_end}")
        if self.cadence < 1:
            raise ParameterError(f"cadence must be >= 1, got {self.cadence}")
        for p in self.p_list:
            if not p >= 1:
                raise ParameterError(f"norm exponents must be >= 1, got {p}")
        for ell in self.ell_list:
            if ell < 0:
                raise ParameterError(f"smoothness indices must be >= 0, got {ell}")
        self.params.validate_for(self.grid.d)
        if self.s is None:
            bound = regularity_lower_bound(
                self.params.system, self.params.lam, self.grid.d, self.params.sigma
            )
            self.s = math.floor(2 * bound) / 2 + 0.5

    @property
    def steps(self) -> int:
        return max(1, int(round(self.tau_end / self.dt)))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "params": self.params.to_dict(),
            "grid": self.grid.to_dict(),
            "dt": self.dt,
            "tau_end": self.tau_end,
            "initial": self.initial.to_dict(),
            "cadence": self.cadence,
            "ell_list": list(self.ell_list),
            "p_list": ["inf" if math.isinf(p) else p for p in self.p_list],
            "seed": self.seed,
            "s": self.s,
            "snapshot_every": self.snapshot_every,
            "cfl_limit": self.cfl_limit,
            "clamp_tol": self.clamp_tol,
            "clamp_warn_fraction": self.clamp_warn_fraction,
            "blowup_amplitude": self.blowup_amplitude,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SimConfig':
        allowed = {
            "params", "grid", "dt", "tau_end", "initial", "cadence", "ell_list", "p_list",
            "seed", "s", "snapshot_every", "cfl_limit", "clamp_tol", "clamp_warn_fraction",
            "blowup_amplitude",
        }
        reject_unknown(data, allowed, "simulate")
        kwargs: Dict[str, Any] = {
            "params": ModelParams.from_dict(require(data, "params", "simulate")),
            "grid": Grid.from_dict(require(data, "grid", "simulate")),
            "initial": InitialData.from_dict(data.get("initial", {})),
        }
        for key in ("dt", "tau_end", "cfl_limit", "clamp_tol", "clamp_warn_fraction", "blowup_amplitude"):
            if key in data:
                kwargs[key] = float(data[key])
        for key in ("cadence", "seed", "snapshot_every"):
            if key in data:
                kwargs[key] = int(data[key])
        if data.get("s") is not None:
            kwargs["s"] = float(data["s"])
        if "ell_list" in data:
            kwargs["ell_list"] = [float(v) for v in data["ell_list"]]
        if "p_list" in data:
            kwargs["p_list"] = [float(v) for v in data["p_list"]]
        return cls(**kwargs)


@dataclass(frozen=True)
class StateDerivative:
    dN: ScalarField
    dW: VectorField


@dataclass(frozen=True)
class State:
    """Rescaled density amplitude N, velocity perturbation W and log-time tau"""

    N: ScalarField
    W: VectorField
    tau: float = 0.0

    def __post_init__(self):
        if self.N.grid != self.W.grid:
            raise ParameterError("N and W must share one grid")
        if self.tau < 0:
            raise ParameterError(f"tau must be nonnegative, got {self.tau}")

    @property
    def grid(self) -> Grid:
        return self.N.grid

    @property
    def t(self) -> float:
        return math.expm1(self.tau)

    @classmethod
    def zeros(cls, grid: Grid, tau: float = 0.0) -> 'State':
        return cls(ScalarField.zeros(grid), VectorField.zeros(grid), tau)

    def advanced(self, derivative: StateDerivative, h: float) -> 'State':
        return State(self.N + h * derivative.dN, self.W + derivative.dW * h, self.tau + h)

    def is_finite(self) -> bool:
        return self.N.is_finite() and self.W.is_finite()

    def max_amplitude(self) -> float:
        return max(self.N.max_abs(), self.W.max_abs())
