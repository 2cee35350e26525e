__version__ = "0.3.0"

from .workbench import RieszWorkbench
from .models import Grid, ModelParams, NormSeries, SimConfig, State, SystemKind
from .solver import EulerRieszSolver, simulate
from .flows import InitialFlow, verify_expansion
from .analysis import decay_report, fit_exponent, theorem_exponent
from .gronwall import GronwallParams, find_threshold_M, integrate_inequality
from .inequalities import FieldEnsemble, stability_study
from .storage import ResultsStore

__all__ = [
    "RieszWorkbench",
    "Grid",
    "ModelParams",
    "NormSeries",
    "SimConfig",
    "State",
    "SystemKind",
    "EulerRieszSolver",
    "simulate",
    "InitialFlow",
    "verify_expansion",
    "decay_report",
    "fit_exponent",
    "theorem_exponent",
    "GronwallParams",
    "find_threshold_M",
    "integrate_inequality",
    "FieldEnsemble",
    "stability_study",
    "ResultsStore",
]
