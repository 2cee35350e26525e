#!/usr/bin/env python3
"""
Example usage of the Riesz Lab workbench
"""

from src import GronwallParams, Grid, InitialFlow, ModelParams, RieszWorkbench, SimConfig, SystemKind
from src.errors import InadmissibleParametersError
from src.flows import PerturbationMode
from src.analysis import theorem_exponent


def main():
    print("Initializing workbench...")

    with RieszWorkbench("results/example") as bench:

        # Example 1: Predicted rates for a few parameter sets
        print("\n=== Predicted Exponents ===")
        for system, lam, d, sigma, gamma in [
            (SystemKind.PRESSURELESS, -1, 1, 0.5, None),
            (SystemKind.PRESSURED, -1, 2, 1.2, 1.5),
            (SystemKind.PRESSURED, 1, 3, 0.5, 1.9),
        ]:
            try:
                e = theorem_exponent(system, lam, d, sigma, gamma, 0.0, "n")
                print(f"  {system.value} d={d} sigma={sigma}: physical {e.physical:+.3f}, rescaled rate {e.rescaled:.3f}")
            except InadmissibleParametersError as err:
                print(f"  {system.value} d={d} sigma={sigma}: no prediction ({err.hypothesis})")

        # Example 2: Simulate a small perturbation and fit its decay
        print("\n=== Simulation ===")
        config = SimConfig(
            params=ModelParams(SystemKind.PRESSURELESS, lam=-1, sigma=0.5),
            grid=Grid(d=1, n=256),
            tau_end=4.0,
        )
        result = bench.simulate(config)
        print(f"Steps taken: {result.steps_taken}, blowup: {result.blowup_tau}")

        report = bench.fit(result.series, config)
        for row in report.rows:
            fitted = "n/a" if row.fitted_rate is None else f"{row.fitted_rate:.3f}"
            print(f"  {row.quantity:9s} l={row.ell:g}: fitted {fitted} -> {row.verdict}")

        # Example 3: Background flow expansion
        print("\n=== Background Flow ===")
        flow = InitialFlow(d=1, epsilon=0.2, modes=[PerturbationMode(component=0, wavevector=(1,))])
        expansion = bench.verify_background(flow, Grid(d=1, n=512), [0.0, 1.0, 10.0, 100.0])
        for name, ok in expansion.verdicts.items():
            print(f"  {name}: growth {expansion.growth[name]:.3g} ({'bounded' if ok else 'growing'})")

        # Example 4: Comparison inequality and its threshold
        print("\n=== Gronwall Threshold ===")
        out = bench.gronwall(GronwallParams(a=2, C_star=1), 1e-3, T=1e4, threshold=True)
        found = out["threshold"]
        print(f"Certified threshold M = {found.M:.6g} (analytic {found.bootstrap_threshold:.6g})")

        # Example 5: Inequality constants under refinement
        print("\n=== Inequality Study ===")
        for summary in bench.inequality_study(["tech1", "moser"], n=64, count=50):
            print(f"  {summary.name}: max {summary.max_low:.3g} -> {summary.max_high:.3g}, stable {summary.stable}")

    print("\nResults written to results/example")


if __name__ == "__main__":
    main()
