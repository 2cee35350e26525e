"""
Burgers background flow

Identity-plus-periodic initial velocities v0(a) = a + eps*phi(a), their
characteristic solution v(x, t) = v0(a) with a + t*v0(a) = x, and the
decomposition grad v = I/(1+t) + K/(1+t)^2.
"""

import logging
from typing import Any, Dict, List, Optional, Sequence, Tuple
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from ..config import settings
from ..errors import CharacteristicInversionError, NumericError, ParameterError
from ..models import Grid, ScalarField, VectorField
from ..models.validation import reject_unknown, require
from ..spectral import gradient, sobolev_seminorm

logger = logging.getLogger(__name__)

NEWTON_TOL = 1e-12
NEWTON_MAX_ITER = 50
NEWTON_DAMPING = 0.5
MAX_HALVINGS = 30


@dataclass(frozen=True)
class PerturbationMode:
    """One term amplitude * sin(m . a) (or cos) added to component `component` of phi"""

    component: int
    wavevector: Tuple[int, ...]
    amplitude: float = 1.0
    kind: str = "sin"

    def __post_init__(self):
        object.__setattr__(self, "wavevector", tuple(int(m) for m in self.wavevector))
        if self.kind not in ("sin", "cos"):
            raise ParameterError(f"perturbation kind must be 'sin' or 'cos', got {self.kind}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "component": self.component,
            "wavevector": list(self.wavevector),
            "amplitude": self.amplitude,
            "kind": self.kind,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'PerturbationMode':
        reject_unknown(data, {"component", "wavevector", "amplitude", "kind"}, "flow.modes[]")
        return cls(
            component=int(require(data, "component", "flow.modes[]")),
            wavevector=tuple(require(data, "wavevector", "flow.modes[]")),
            amplitude=float(data.get("amplitude", 1.0)),
            kind=data.get("kind", "sin"),
        )


@dataclass
class InitialFlow:
    """v0(a) = a + epsilon * phi(a), phi 2*pi-periodic in every axis"""

    d: int
    epsilon: float = 0.0
    modes: List[PerturbationMode] = field(default_factory=list)

    period = 2 * np.pi

    def __post_init__(self):
        for mode in self.modes:
            if not 0 <= mode.component < self.d or len(mode.wavevector) != self.d:
                raise ParameterError(f"perturbation term {mode} does not fit dimension {self.d}")

    @classmethod
    def identity(cls, d: int) -> 'InitialFlow':
        return cls(d=d)

    def _phases(self, points: np.ndarray, mode: PerturbationMode) -> np.ndarray:
        return points @ np.asarray(mode.wavevector, dtype=float)

    def perturbation(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        phi = np.zeros_like(points, dtype=float)
        for mode in self.modes:
            phase = self._phases(points, mode)
            wave = np.sin(phase) if mode.kind == "sin" else np.cos(phase)
            phi[:, mode.component] += mode.amplitude * wave
        return phi

    def perturbation_jacobian(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(points)
        jac = np.zeros((points.shape[0], self.d, self.d))
        for mode in self.modes:
            phase = self._phases(points, mode)
            slope = np.cos(phase) if mode.kind == "sin" else -np.sin(phase)
            jac[:, mode.component, :] += mode.amplitude * slope[:, None] * np.asarray(mode.wavevector, dtype=float)
        return jac

    def v0(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return points + self.epsilon * self.perturbation(points)

    def dv0(self, points: np.ndarray) -> np.ndarray:
        points = np.atleast_2d(np.asarray(points, dtype=float))
        return np.eye(self.d) + self.epsilon * self.perturbation_jacobian(points)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "d": self.d,
            "epsilon": self.epsilon,
            "modes": [m.to_dict() for m in self.modes],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'InitialFlow':
        reject_unknown(data, {"d", "epsilon", "modes"}, "flow")
        return cls(
            d=int(require(data, "d", "flow")),
            epsilon=float(data.get("epsilon", 0.0)),
            modes=[PerturbationMode.from_dict(m) for m in data.get("modes", [])],
        )


@dataclass
class DispersiveCheck:
    ok: bool
    min_margin: float


@dataclass
class CharacteristicSolution:
    alpha: np.ndarray
    v: np.ndarray
    grad_v: np.ndarray
    residual: np.ndarray
    iterations: int


@dataclass
class FlowSample:
    """Background flow sampled on the physical cell x = (1+t) y at time t"""

    t: float
    grid: Grid
    v: VectorField
    grad_v: np.ndarray
    K: np.ndarray
    residual: float = 0.0

    @property
    def reference_grid(self) -> Grid:
        return self.grid.scaled(1.0 / (1.0 + self.t))

    def sup_K(self) -> float:
        return float(np.max(np.abs(self.K))) if self.K.size else 0.0

    def K_seminorm(self, ell: float) -> float:
        d = self.grid.d
        total = 0.0
        for i in range(d):
            for j in range(d):
                total += sobolev_seminorm(ScalarField(self.grid, self.K[i, j]), ell) ** 2
        return float(np.sqrt(total))

    def hessian_sup(self) -> float:
        """||grad^2 v||_inf from spectral differentiation of the periodic part of v"""
        d = self.grid.d
        coords = self.reference_grid.coordinates
        largest = 0.0
        for i in range(d):
            periodic = ScalarField(self.grid, self.v[i].values - coords[i])
            for first in gradient(periodic):
                second = gradient(first).stacked()
                largest = max(largest, float(np.max(np.abs(second))))
        return largest

    def reconstruction_residual(self) -> float:
        d = self.grid.d
        identity = np.eye(d).reshape(d, d, *([1] * d))
        rebuilt = identity / (1 + self.t) + self.K / (1 + self.t) ** 2
        return float(np.max(np.abs(self.grad_v - rebuilt)))

    def divergence_residual(self) -> float:
        d = self.grid.d
        div = np.trace(self.grad_v, axis1=0, axis2=1)
        trace_k = np.trace(self.K, axis1=0, axis2=1)
        return float(np.max(np.abs(div - d / (1 + self.t) - trace_k / (1 + self.t) ** 2)))


def spectral_distance(A: np.ndarray) -> float:
    """Distance of the spectrum of A to the closed negative real axis"""
    A = np.asarray(A, dtype=float)
    if not np.all(np.isfinite(A)):
        raise NumericError("matrix has non-finite entries")
    return float(np.min(_spectral_distances(A[None, ...])))


def _spectral_distances(stack: np.ndarray) -> np.ndarray:
    try:
        eig = np.linalg.eigvals(stack)
    except np.linalg.LinAlgError as e:
        raise NumericError(f"eigenvalue solver failed: {e}")
    dist = np.where(eig.real <= 0, np.abs(eig.imag), np.abs(eig))
    return np.min(dist, axis=-1)


def check_dispersive_condition(flow: InitialFlow, grid: Grid, eps: float) -> DispersiveCheck:
    """Scan Dv0 over the grid points and compare its spectral margin with eps"""
    if not eps > 0:
        raise ParameterError(f"margin threshold must be positive, got {eps}")
    margins = _spectral_distances(flow.dv0(grid.points()))
    min_margin = float(np.min(margins))
    return DispersiveCheck(ok=min_margin >= eps, min_margin=min_margin)


def solve_characteristics(flow: InitialFlow, points: np.ndarray, t: float) -> CharacteristicSolution:
    """
    Invert a + t*v0(a) = x for every row of points by damped Newton iteration

    Args:
        flow: initial velocity
        points: (P, d) array of physical positions x
        t: physical time, t >= 0

    Returns:
        Foot points a, velocities v0(a) and gradients Dv0(a)(I + t Dv0(a))^{-1}
    """
    if t < 0:
        raise ParameterError(f"time must be nonnegative, got {t}")
    x = np.atleast_2d(np.asarray(points, dtype=float))
    d = flow.d
    identity = np.eye(d)
    alpha = x / (1.0 + t)
    tol = NEWTON_TOL * np.maximum(1.0, np.linalg.norm(x, axis=1))

    def residual_of(a, target):
        return a + t * flow.v0(a) - target

    F = residual_of(alpha, x)
    res = np.linalg.norm(F, axis=1)
    iterations = 0
    while iterations < NEWTON_MAX_ITER:
        active = np.nonzero(res > tol)[0]
        if active.size == 0:
            break
        iterations += 1
        a_act, x_act, res_act = alpha[active], x[active], res[active]
        J = identity + t * flow.dv0(a_act)
        try:
            step = np.linalg.solve(J, F[active][..., None])[..., 0]
        except np.linalg.LinAlgError:
            raise CharacteristicInversionError("singular characteristic Jacobian")

        scale = np.ones(active.size)
        trial = a_act - step
        F_trial = residual_of(trial, x_act)
        res_trial = np.linalg.norm(F_trial, axis=1)
        worse = res_trial > res_act
        halvings = 0
        while np.any(worse) and halvings < MAX_HALVINGS:
            scale[worse] *= NEWTON_DAMPING
            trial[worse] = a_act[worse] - scale[worse, None] * step[worse]
            F_trial[worse] = residual_of(trial[worse], x_act[worse])
            res_trial[worse] = np.linalg.norm(F_trial[worse], axis=1)
            worse = res_trial > res_act
            halvings += 1

        alpha[active] = trial
        F[active] = F_trial
        res[active] = res_trial

    if np.any(res > tol):
        worst = float(np.max(res / tol))
        raise CharacteristicInversionError(
            f"Newton did not converge in {NEWTON_MAX_ITER} steps at t = {t} "
            f"(worst residual {worst:.3g} x tolerance); the dispersive condition may be nearly violated"
        )
    logger.debug("characteristics at t=%g converged in %d Newton steps", t, iterations)

    v = flow.v0(alpha)
    D = flow.dv0(alpha)
    J = identity + t * D
    # D and J commute, so D J^{-1} = J^{-1} D
    grad_v = np.linalg.solve(J, D)
    return CharacteristicSolution(alpha=alpha, v=v, grad_v=grad_v, residual=res, iterations=iterations)


def burgers_evaluate(flow: InitialFlow, x: Sequence[float], t: float) -> Tuple[np.ndarray, np.ndarray]:
    """Velocity and velocity gradient of the Burgers flow at one point"""
    solution = solve_characteristics(flow, np.asarray(x, dtype=float).reshape(1, flow.d), t)
    return solution.v[0], solution.grad_v[0]


def compute_K(flow: InitialFlow, grid: Grid, t: float) -> FlowSample:
    """Sample v, grad v and K on the physical image of the reference grid at time t"""
    if grid.d != flow.d:
        raise ParameterError(f"grid dimension {grid.d} does not match flow dimension {flow.d}")
    cells = grid.L / flow.period
    if abs(cells - round(cells)) > 1e-9 or round(cells) < 1:
        raise ParameterError("box length must be a whole multiple of the perturbation period 2*pi")

    d = grid.d
    physical = grid.scaled(1.0 + t)
    solution = solve_characteristics(flow, (1.0 + t) * grid.points(), t)
    shape = grid.shape
    grad_v = np.moveaxis(solution.grad_v, (1, 2), (0, 1)).reshape(d, d, *shape)
    identity = np.eye(d).reshape(d, d, *([1] * d))
    K = (1.0 + t) ** 2 * (grad_v - identity / (1.0 + t))
    v = VectorField.from_arrays(physical, [solution.v[:, i].reshape(shape) for i in range(d)])
    return FlowSample(t=t, grid=physical, v=v, grad_v=grad_v, K=K, residual=float(np.max(solution.residual)))


def last_decade_growth(times: Sequence[float], values: Sequence[float]) -> float:
    """Relative growth between the last sample and the latest sample at or before t_last/10"""
    times = np.asarray(times, dtype=float)
    values = np.asarray(values, dtype=float)
    earlier = np.nonzero(times <= times[-1] / 10.0)[0]
    ref_index = earlier[-1] if earlier.size else 0
    ref, last = values[ref_index], values[-1]
    if ref == 0:
        return 0.0 if last == 0 else float("inf")
    return float((last - ref) / abs(ref))


@dataclass
class ExpansionReport:
    table: pd.DataFrame
    verdicts: Dict[str, bool]
    growth: Dict[str, float]
    threshold: float

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())


def verify_expansion(flow: InitialFlow, grid: Grid, times: Sequence[float], ell_list: Sequence[float],
                     growth_threshold: Optional[float] = None) -> ExpansionReport:
    """
    Record normalized K and second-gradient diagnostics and judge their boundedness

    Args:
        flow: initial velocity
        grid: reference grid (box a multiple of 2*pi)
        times: increasing physical times, at least four
        ell_list: Sobolev indices for ||K||_{H^ell}
        growth_threshold: last-decade growth separating bounded sequences

    Returns:
        ExpansionReport with one table row per time and a verdict per sequence
    """
    times = [float(t) for t in times]
    if len(times) < 4 or any(b <= a for a, b in zip(times, times[1:])):
        raise ParameterError("times must be strictly increasing with at least four samples")
    threshold = settings.growth_threshold if growth_threshold is None else growth_threshold
    d = grid.d

    rows = []
    for t in times:
        sample = compute_K(flow, grid, t)
        row = {"t": t, "sup_K": sample.sup_K()}
        for ell in ell_list:
            row[f"K_hdot_{ell:g}_normalized"] = sample.K_seminorm(ell) * (1 + t) ** (ell - d / 2)
        row["hessian_normalized"] = sample.hessian_sup() * (1 + t) ** 3
        row["reconstruction_residual"] = sample.reconstruction_residual()
        row["divergence_residual"] = sample.divergence_residual()
        row["newton_residual"] = sample.residual
        rows.append(row)
        logger.info("background flow sampled at t=%g", t)

    table = pd.DataFrame(rows)
    sequences = ["sup_K"] + [f"K_hdot_{ell:g}_normalized" for ell in ell_list] + ["hessian_normalized"]
    growth = {name: last_decade_growth(times, table[name].to_numpy()) for name in sequences}
    verdicts = {name: bool(g < threshold) for name, g in growth.items()}
    return ExpansionReport(table=table, verdicts=verdicts, growth=growth, threshold=threshold)
