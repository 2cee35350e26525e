from .decay import (
    DecayReport,
    DecayRow,
    FitResult,
    TheoremExponent,
    decay_report,
    fit_exponent,
    theorem_exponent,
)

__all__ = [
    "DecayReport",
    "DecayRow",
    "FitResult",
    "TheoremExponent",
    "decay_report",
    "fit_exponent",
    "theorem_exponent",
]
