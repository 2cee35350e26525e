from .burgers import (
    CharacteristicSolution,
    DispersiveCheck,
    FlowSample,
    InitialFlow,
    PerturbationMode,
    ExpansionReport,
    burgers_evaluate,
    check_dispersive_condition,
    compute_K,
    last_decade_growth,
    solve_characteristics,
    spectral_distance,
    verify_expansion,
)

__all__ = [
    "CharacteristicSolution",
    "DispersiveCheck",
    "FlowSample",
    "InitialFlow",
    "PerturbationMode",
    "ExpansionReport",
    "burgers_evaluate",
    "check_dispersive_condition",
    "compute_K",
    "last_decade_growth",
    "solve_characteristics",
    "spectral_distance",
    "verify_expansion",
]
