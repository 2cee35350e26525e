"""
Rescaled Euler-Riesz systems around the expanding background v(x, t) = x/(1+t)

With y = x/(1+t) and tau = ln(1+t) the background becomes the damping terms
(d/2)N (pressureless), d*gt*N (pressured) and W, and the interaction force
picks up the factor e^{sigma tau}.
"""

import logging
import math
from typing import Callable, List, Optional
from dataclasses import dataclass, field

import numpy as np

from ..errors import BlowupError, CFLViolationError, ParameterError
from ..models import (
    NormSeries,
    ScalarField,
    SimConfig,
    State,
    StateDerivative,
    SystemKind,
    VectorField,
)
from ..spectral import dealias, dealiased_product, divergence, gradient, lambda_lp_norm, riesz_force
from ..diagnostics import diagnostic_rows, physical_norm
from .initial_data import build_initial_state

logger = logging.getLogger(__name__)

Rhs = Callable[[State], StateDerivative]


def _advect(W: VectorField, grads: VectorField) -> ScalarField:
    """Dealiased W . grad f given grad f"""
    total = dealiased_product(W[0], grads[0])
    for j in range(1, W.grid.d):
        total = total + dealiased_product(W[j], grads[j])
    return total


def cfl_number(state: State, dt: float) -> float:
    return dt * state.W.max_abs() / state.grid.spacing


def step_rk4(state: State, dt: float, rhs: Rhs, cfl_limit: float = 0.5) -> State:
    """
    Classical four-stage Runge-Kutta step

    Args:
        state: current state at tau
        dt: step in tau
        rhs: map from state to its tau-derivative; reads state.tau for explicit time dependence
        cfl_limit: largest admissible dt * max|W| / dy

    Returns:
        State at tau + dt
    """
    if not dt > 0:
        raise ParameterError(f"time step must be positive, got {dt}")
    courant = cfl_number(state, dt)
    if courant > cfl_limit:
        raise CFLViolationError(
            f"CFL number {courant:.3g} exceeds {cfl_limit} at tau = {state.tau:.6g} "
            f"(max|W| = {state.W.max_abs():.3g}, dy = {state.grid.spacing:.3g}, dt = {dt:.3g})",
            tau=state.tau,
        )

    k1 = rhs(state)
    k2 = rhs(state.advanced(k1, dt / 2))
    k3 = rhs(state.advanced(k2, dt / 2))
    k4 = rhs(state.advanced(k3, dt))

    dN = k1.dN + 2 * k2.dN + 2 * k3.dN + k4.dN
    dW = k1.dW + k2.dW * 2 + k3.dW * 2 + k4.dW
    moved = state.advanced(StateDerivative(dN, dW), dt / 6)
    return State(moved.N, moved.W, state.tau + dt)


@dataclass
class SimulationResult:
    series: NormSeries
    final_state: State
    snapshots: List[State] = field(default_factory=list)
    blowup_tau: Optional[float] = None
    clamp_flagged: bool = False
    max_clamp_fraction: float = 0.0
    steps_taken: int = 0

    @property
    def blew_up(self) -> bool:
        return self.blowup_tau is not None


class EulerRieszSolver:
    """Fixed-step pseudo-spectral integrator for one SimConfig"""

    def __init__(self, config: SimConfig, interaction_scale: float = 1.0):
        """
        Args:
            config: validated simulation configuration
            interaction_scale: multiplies the Riesz force; 0 switches the interaction off
        """
        self.config = config
        self.params = config.params
        self.grid = config.grid
        self.interaction_scale = interaction_scale
        self.max_clamp_fraction = 0.0

    def _force_coefficient(self, tau: float) -> float:
        return self.interaction_scale * self.params.lam * math.exp(self.params.sigma * tau)

    def rhs_pressureless(self, state: State) -> StateDerivative:
        """
        d_tau N = -W.grad N - N div W / 2 - (d/2) N, written as
        -(W.grad N + div(N W))/2 - (d/2) N so the L^2 balance closes on the grid;
        d_tau W = -W.grad W - W + lam e^{sigma tau} grad Lambda^{-sigma} N^2
        """
        if self.params.system is not SystemKind.PRESSURELESS:
            raise ParameterError("pressureless right-hand side called for a pressured model")
        N, W, d = state.N, state.W, self.grid.d
        N.check_finite("N", state.tau)
        W.check_finite("W", state.tau)

        transport = _advect(W, gradient(N))
        flux = VectorField(self.grid, tuple(dealiased_product(N, W[j]) for j in range(d)))
        dN = -0.5 * (transport + divergence(flux)) - (d / 2) * N

        force = riesz_force(dealiased_product(N, N), self.params.sigma)
        coefficient = self._force_coefficient(state.tau)
        dW = VectorField(self.grid, tuple(
            -_advect(W, gradient(W[i])) - W[i] + coefficient * force[i]
            for i in range(d)
        ))
        return StateDerivative(dN, dW)

    def _density_power(self, N: ScalarField) -> ScalarField:
        exponent = 1.0 / self.params.gamma_tilde
        if float(exponent).is_integer():
            return dealias(ScalarField(self.grid, N.values ** int(exponent)))
        peak = N.max_abs()
        negative = N.values < -self.config.clamp_tol * peak
        fraction = float(np.mean(negative))
        self.max_clamp_fraction = max(self.max_clamp_fraction, fraction)
        if fraction > self.config.clamp_warn_fraction:
            logger.warning("clamped %.2f%% of density samples before the power %.4g",
                           100 * fraction, exponent)
        return dealias(ScalarField(self.grid, np.maximum(N.values, 0.0) ** exponent))

    def rhs_pressured(self, state: State) -> StateDerivative:
        """
        d_tau N = -W.grad N - gt N div W - gt d N
        d_tau W = -W.grad W - W - gt N grad N + lam e^{sigma tau} grad Lambda^{-sigma} N^{1/gt}
        """
        if self.params.system is not SystemKind.PRESSURED:
            raise ParameterError("pressured right-hand side called for a pressureless model")
        N, W, d = state.N, state.W, self.grid.d
        gt = self.params.gamma_tilde
        N.check_finite("N", state.tau)
        W.check_finite("W", state.tau)

        grad_N = gradient(N)
        dN = -_advect(W, grad_N) - gt * dealiased_product(N, divergence(W)) - (gt * d) * N

        force = riesz_force(self._density_power(N), self.params.sigma)
        coefficient = self._force_coefficient(state.tau)
        dW = VectorField(self.grid, tuple(
            -_advect(W, gradient(W[i])) - W[i] - gt * dealiased_product(N, grad_N[i])
            + coefficient * force[i]
            for i in range(d)
        ))
        return StateDerivative(dN, dW)

    def rhs(self, state: State) -> StateDerivative:
        if self.params.system is SystemKind.PRESSURELESS:
            return self.rhs_pressureless(state)
        return self.rhs_pressured(state)

    def initial_state(self) -> State:
        return build_initial_state(self.config)

    def record(self, series: NormSeries, state: State) -> None:
        """Append tracked norms and diagnostics for one state"""
        tau = state.tau
        for quantity, fld in (("n", state.N), ("w", state.W)):
            for ell in self.config.ell_list:
                for p in self.config.p_list:
                    rescaled = lambda_lp_norm(fld, ell, p)
                    physical = physical_norm(fld, ell, p, tau)
                    series.add(tau, quantity, ell, p, rescaled, physical)
        for label, ell, p, rescaled, physical in diagnostic_rows(state, self.params, self.config.s):
            series.add(tau, label, ell, p, rescaled, physical)

    def _check_amplitude(self, state: State) -> None:
        if not state.is_finite():
            raise BlowupError(f"non-finite state at tau = {state.tau:.6g}", tau=state.tau)
        if state.max_amplitude() > self.config.blowup_amplitude:
            raise BlowupError(
                f"amplitude {state.max_amplitude():.3g} above {self.config.blowup_amplitude:.3g} "
                f"at tau = {state.tau:.6g}", tau=state.tau
            )

    def simulate(self, state: Optional[State] = None) -> SimulationResult:
        """Integrate from tau = 0 to tau_end, recording at the configured cadence"""
        config = self.config
        state = self.initial_state() if state is None else state
        series = NormSeries()
        snapshots: List[State] = []
        steps = config.steps
        report_every = max(1, steps // 10)
        blowup_tau = None

        logger.info("simulating %s system, d=%d, n=%d, %d steps of %g",
                    self.params.system.value, self.grid.d, self.grid.n, steps, config.dt)
        self.record(series, state)
        if config.snapshot_every:
            snapshots.append(state)

        taken = 0
        for step in range(1, steps + 1):
            try:
                state = step_rk4(state, config.dt, self.rhs, config.cfl_limit)
                self._check_amplitude(state)
            except BlowupError as e:
                blowup_tau = step * config.dt
                logger.warning("blowup detected: %s", e)
                series.mark_blowup(blowup_tau)
                break
            except CFLViolationError as e:
                e.series = series
                raise
            taken = step
            if step % config.cadence == 0 or step == steps:
                self.record(series, state)
            if config.snapshot_every and step % config.snapshot_every == 0:
                snapshots.append(state)
            if step % report_every == 0:
                logger.info("step %d/%d, tau = %.4g", step, steps, state.tau)

        return SimulationResult(
            series=series,
            final_state=state,
            snapshots=snapshots,
            blowup_tau=blowup_tau,
            clamp_flagged=self.max_clamp_fraction > config.clamp_warn_fraction,
            max_clamp_fraction=self.max_clamp_fraction,
            steps_taken=taken,
        )


def simulate(config: SimConfig, interaction_scale: float = 1.0) -> SimulationResult:
    return EulerRieszSolver(config, interaction_scale).simulate()
