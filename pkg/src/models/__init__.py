from .grid import Grid, ScalarField, VectorField
from .parameters import (
    InitialData,
    ModelParams,
    SimConfig,
    State,
    StateDerivative,
    SystemKind,
    regularity_lower_bound,
)
from .norm_series import NormSeries

__all__ = [
    "Grid", "ScalarField", "VectorField",
    "InitialData", "ModelParams", "SimConfig", "State", "StateDerivative", "SystemKind",
    "regularity_lower_bound", "NormSeries",
]
