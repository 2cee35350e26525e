#!/usr/bin/env python3
"""
Quick smoke test of the workbench facade without writing anything to disk
"""

import math

import numpy as np

from src import GronwallParams, Grid, InitialFlow, ModelParams, RieszWorkbench, SimConfig, SystemKind
from src.flows import PerturbationMode


def test_workbench_in_memory():
    bench = RieszWorkbench()
    assert bench.out_dir is None

    config = SimConfig(params=ModelParams(SystemKind.PRESSURELESS, lam=-1, sigma=0.5),
                       grid=Grid(d=1, n=32), tau_end=0.2)
    result = bench.simulate(config)
    assert result.blowup_tau is None
    assert result.steps_taken == 20
    assert np.all(np.isfinite(result.series.to_frame()["rescaled_value"]))

    out = bench.gronwall(GronwallParams(a=2, C_star=1), 1e-3, T=10.0)
    assert not out["trajectory"].blew_up
    assert out["threshold"] is None

    flow = InitialFlow(d=1, epsilon=0.1, modes=[PerturbationMode(component=0, wavevector=(1,))])
    report = bench.verify_background(flow, Grid(d=1, n=64), [0.0, 1.0, 10.0, 100.0])
    assert set(report.verdicts) == {"sup_K", "K_hdot_0_normalized", "K_hdot_1_normalized",
                                    "K_hdot_2_normalized", "hessian_normalized"}
    assert math.isfinite(report.growth["sup_K"])


def main():
    print("=== Riesz Lab smoke test ===")
    test_workbench_in_memory()
    print("=== Smoke test complete ===")


if __name__ == "__main__":
    main()
