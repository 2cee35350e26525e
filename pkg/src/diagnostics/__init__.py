from .functionals import (
    compute_W,
    compute_Wk,
    compute_X,
    compute_Z,
    decay_constant,
    diagnostic_rows,
    envelope_dominates,
    envelope_values,
    fit_envelope_constant,
    inequality_residual_ratio,
    mass,
    physical_norm,
    smallest_k0,
    weighted_density_norm,
    weighted_velocity_norm,
)

__all__ = [
    "compute_W",
    "compute_Wk",
    "compute_X",
    "compute_Z",
    "decay_constant",
    "diagnostic_rows",
    "envelope_dominates",
    "envelope_values",
    "fit_envelope_constant",
    "inequality_residual_ratio",
    "mass",
    "physical_norm",
    "smallest_k0",
    "weighted_density_norm",
    "weighted_velocity_norm",
]
