from .euler_riesz import EulerRieszSolver, SimulationResult, cfl_number, simulate, step_rk4
from .initial_data import band_limited_noise, build_initial_state, fejer_project, plateau

__all__ = [
    "EulerRieszSolver",
    "SimulationResult",
    "cfl_number",
    "simulate",
    "step_rk4",
    "band_limited_noise",
    "build_initial_state",
    "fejer_project",
    "plateau",
]
