from .comparison import (
    GronwallParams,
    GronwallTrajectory,
    ThresholdResult,
    bootstrap_constant,
    bootstrap_threshold,
    envelope,
    find_threshold_M,
    integrate_inequality,
    linear_threshold,
    random_admissible_params,
    trajectory_table,
    verify_lemma,
)

__all__ = [
    "GronwallParams",
    "GronwallTrajectory",
    "ThresholdResult",
    "bootstrap_constant",
    "bootstrap_threshold",
    "envelope",
    "find_threshold_M",
    "integrate_inequality",
    "linear_threshold",
    "random_admissible_params",
    "trajectory_table",
    "verify_lemma",
]
