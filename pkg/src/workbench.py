"""
Riesz Lab - Euler-Riesz decay workbench

Main orchestrator class that combines all components
"""

import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd

from .analysis import DecayReport, decay_report
from .flows import ExpansionReport, InitialFlow, verify_expansion
from .gronwall import (
    GronwallParams,
    GronwallTrajectory,
    ThresholdResult,
    find_threshold_M,
    integrate_inequality,
    trajectory_table,
)
from .inequalities import InequalitySummary, run_studies
from .errors import CFLViolationError
from .models import Grid, NormSeries, SimConfig
from .solver import EulerRieszSolver, SimulationResult
from .storage import ResultsStore

logger = logging.getLogger(__name__)


class RieszWorkbench:
    """Runs the workbench pipelines and persists their results"""

    def __init__(self, out_dir: Optional[str] = None, fmt: str = "csv"):
        """
        Args:
            out_dir: directory for manifests and tables; None keeps results in memory
            fmt: table format, csv or json
        """
        self.store = ResultsStore(out_dir, fmt) if out_dir else None

    @property
    def out_dir(self) -> Optional[Path]:
        return self.store.root if self.store else None

    def simulate(self, config: SimConfig, interaction_scale: float = 1.0) -> SimulationResult:
        """
        Integrate one configuration and store its norm series

        Args:
            config: simulation configuration
            interaction_scale: multiplies the interaction force

        Returns:
            SimulationResult; blowups are recorded, not raised

        Raises:
            CFLViolationError: after the norms recorded so far are stored with the abort reason
        """
        try:
            result = EulerRieszSolver(config, interaction_scale).simulate()
        except CFLViolationError as e:
            if self.store and e.series is not None:
                self.store.write_series(e.series)
                self.store.write_manifest("simulate", config.to_dict(), {
                    "format": self.store.fmt,
                    "aborted": str(e),
                    "abort_tau": e.tau,
                })
            raise
        if self.store:
            self.store.write_series(result.series)
            for i, snapshot in enumerate(result.snapshots):
                self.store.write_snapshot(snapshot, i)
            self.store.write_manifest("simulate", config.to_dict(), {
                "format": self.store.fmt,
                "blowup_tau": result.blowup_tau,
                "steps_taken": result.steps_taken,
                "clamp_flagged": result.clamp_flagged,
                "max_clamp_fraction": result.max_clamp_fraction,
            })
        if result.clamp_flagged:
            logger.warning("density clamp fraction reached %.2f%%", 100 * result.max_clamp_fraction)
        return result

    def fit(self, series: NormSeries, config: SimConfig, tol: float = 0.1, window: float = 0.5) -> DecayReport:
        report = decay_report(series, config, tol=tol, window=window)
        if self.store:
            self.store.write_table("decay_report", report.to_frame(), fmt="csv")
            self.store.write_manifest("fit", config.to_dict(), {"tol": tol, "window": window},
                                      name="fit_manifest")
        return report

    def verify_background(self, flow: InitialFlow, grid: Grid, times: Sequence[float],
                          ell_list: Sequence[float] = (0.0, 1.0, 2.0),
                          growth_threshold: Optional[float] = None) -> ExpansionReport:
        """Sample K(t) of the background flow and judge the boundedness of its normalized norms"""
        report = verify_expansion(flow, grid, times, ell_list, growth_threshold)
        if self.store:
            self.store.write_table("expansion_report", report.table, fmt="csv")
            self.store.write_manifest("burgers-verify", {
                "flow": flow.to_dict(),
                "grid": grid.to_dict(),
                "times": list(times),
                "ell_list": list(ell_list),
            }, {"verdicts": report.verdicts, "growth": report.growth, "threshold": report.threshold})
        return report

    def gronwall(self, params: GronwallParams, Y0: float, T: float = 1e4,
                 threshold: bool = False, resolution: float = 1e-3) -> Dict[str, Any]:
        """
        Integrate the comparison equation and optionally bisect the smallness threshold

        Returns:
            Dict with the trajectory, its table and the ThresholdResult (or None)
        """
        trajectory: GronwallTrajectory = integrate_inequality(params, Y0, T)
        table = trajectory_table(params, trajectory, Y0)
        found: Optional[ThresholdResult] = find_threshold_M(params, T, resolution) if threshold else None
        if self.store:
            self.store.write_table("gronwall", table, fmt="csv")
            if found is not None:
                self.store.write_json("threshold", {
                    "M": found.M,
                    "unbounded": found.unbounded,
                    "evaluations": found.evaluations,
                    "bootstrap_at_half": found.bootstrap_at_half,
                    "bootstrap_threshold": found.bootstrap_threshold,
                    "consistent": found.consistent,
                })
            self.store.write_manifest("gronwall", {**params.to_dict(), "Y0": Y0, "T": T}, {
                "blowup_time": trajectory.blowup_time,
                "asymptotic_slope": trajectory.asymptotic_slope,
                "slope_ok": trajectory.slope_ok,
            })
        return {"trajectory": trajectory, "table": table, "threshold": found}

    def inequality_study(self, names: Sequence[str], n: int = 128, count: int = 200, seed: int = 0,
                         beta: float = 2.0, max_mode: int = 16, d: int = 1) -> List[InequalitySummary]:
        """Ensemble ratios of each inequality at n and 2n"""
        summaries = run_studies(names, n_low=n, n_high=2 * n, count=count, seed=seed, beta=beta,
                                max_mode=max_mode, d=d)
        if self.store:
            for summary in summaries:
                self.store.write_table(f"ineq_{summary.name}", summary.ratios, fmt="csv")
            self.store.write_table("ineq_summary", pd.DataFrame([s.to_dict() for s in summaries]), fmt="csv")
            self.store.write_manifest("ineq", {
                "names": list(names), "n": n, "count": count, "seed": seed,
                "beta": beta, "max_mode": max_mode, "d": d,
            })
        return summaries

    def close(self):
        if self.store:
            logger.info("%d files written under %s", len(self.store.written), self.store.root)

    def __enter__(self):
        return self

    def __exit__(self, exc_type, exc_val, exc_tb):
        self.close()
