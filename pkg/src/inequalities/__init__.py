from .ensemble import FieldEnsemble, half_modes, synthesize
from .ratios import (
    commutator,
    kato_ponce_exponents,
    ratio_composition,
    ratio_kato_ponce,
    ratio_linfty_interp,
    ratio_moser,
    ratio_tech1,
    ratio_tech2,
    ratio_tech5,
)
from .study import INEQUALITIES, InequalitySummary, ensemble_ratios, run_studies, stability_study

__all__ = [
    "FieldEnsemble",
    "half_modes",
    "synthesize",
    "commutator",
    "kato_ponce_exponents",
    "ratio_composition",
    "ratio_kato_ponce",
    "ratio_linfty_interp",
    "ratio_moser",
    "ratio_tech1",
    "ratio_tech2",
    "ratio_tech5",
    "INEQUALITIES",
    "InequalitySummary",
    "ensemble_ratios",
    "run_studies",
    "stability_study",
]
