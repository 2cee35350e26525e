#!/usr/bin/env python3
"""
Riesz Lab command line

Subcommands: simulate, fit, burgers-verify, gronwall, ineq. Configuration comes
from a JSON file (--config) with flag overrides; unknown keys are errors.

Exit codes: 0 success, 1 configuration error, 2 blowup, 3 failed verdict,
4 internal numerical error.
"""

import argparse
import copy
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Dict, List, Optional

from src import RieszWorkbench
from src.config import settings
from src.errors import ConfigError, RieszLabError, VerificationFailure
from src.flows import InitialFlow
from src.gronwall import GronwallParams
from src.inequalities import INEQUALITIES
from src.models import Grid, SimConfig
from src.models.validation import reject_unknown
from src.storage import ResultsStore

logger = logging.getLogger("riesz_lab")

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_BLOWUP = 2
EXIT_NUMERIC = 4


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON configuration file")
    common.add_argument("--out", default="results", help="output directory")
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="table format")
    common.add_argument("--seed", type=int, help="random seed")
    common.add_argument("--sweep", help="JSON list of override objects, one run each")
    common.add_argument("--tol", type=float, default=0.1, help="verdict tolerance")
    common.add_argument("-v", "--verbose", action="count", default=0, help="-v info, -vv debug")

    parser = argparse.ArgumentParser(prog="riesz_lab", description="Euler-Riesz decay workbench")
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", parents=[common], help="integrate the rescaled system")
    sim.add_argument("--system", choices=("pressureless", "pressured"))
    sim.add_argument("--lam", type=int, choices=(-1, 1))
    sim.add_argument("--sigma", type=float)
    sim.add_argument("--gamma", type=float)
    sim.add_argument("--dim", type=int)
    sim.add_argument("--n", type=int)
    sim.add_argument("--box", type=float, help="box length L")
    sim.add_argument("--dt", type=float)
    sim.add_argument("--tau-end", type=float)
    sim.add_argument("--n-amplitude", type=float)
    sim.add_argument("--w-amplitude", type=float)
    sim.add_argument("--cadence", type=int)
    sim.add_argument("--snapshot-every", type=int)

    fit = sub.add_parser("fit", parents=[common], help="fit decay rates of a norm series")
    fit.add_argument("--series", help="norms.csv or norms.json of a simulate run")
    fit.add_argument("--window", type=float, default=0.5, help="trailing fraction of the tau range")

    burgers = sub.add_parser("burgers-verify", parents=[common], help="check the background-flow structure")
    burgers.add_argument("--dim", type=int)
    burgers.add_argument("--n", type=int)
    burgers.add_argument("--epsilon", type=float)
    burgers.add_argument("--times", help="comma-separated physical times")

    gron = sub.add_parser("gronwall", parents=[common], help="integrate the comparison inequality")
    gron.add_argument("--a", type=float)
    gron.add_argument("--cstar", type=float)
    gron.add_argument("--b", help="comma-separated exponents b_i")
    gron.add_argument("--c", help="comma-separated exponents c_i")
    gron.add_argument("--cp", type=int, choices=(0, 1))
    gron.add_argument("--y0", type=float)
    gron.add_argument("--T", type=float)
    gron.add_argument("--threshold", action="store_true", help="also bisect the smallness threshold")

    ineq = sub.add_parser("ineq", parents=[common], help="ensemble ratios of the functional inequalities")
    ineq.add_argument("--n", type=int)
    ineq.add_argument("--dim", type=int)
    ineq.add_argument("--count", type=int)
    ineq.add_argument("--beta", type=float)
    ineq.add_argument("--max-mode", type=int)
    ineq.add_argument("--which", help="comma-separated inequality names, or 'all'")
    return parser


def configure_logging(verbose: int) -> None:
    if verbose >= 2:
        level = logging.DEBUG
    elif verbose == 1:
        level = logging.INFO
    else:
        level = getattr(logging, settings.log_level, logging.WARNING)
    logging.basicConfig(
        level=level,
        stream=sys.stderr,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
        force=True,
    )


def _floats(text: str) -> List[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ConfigError(f"expected comma-separated numbers, got '{text}'")


def load_json(path: str) -> Any:
    try:
        return json.loads(Path(path).read_text())
    except FileNotFoundError:
        raise ConfigError(f"config file not found: {path}")
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: invalid JSON ({e})")


def deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = deep_merge(merged[key], value)
        else:
            merged[key] = copy.deepcopy(value)
    return merged


def _set(payload: Dict[str, Any], path: str, value: Any) -> None:
    if value is None:
        return
    *parents, last = path.split(".")
    node = payload
    for key in parents:
        node = node.setdefault(key, {})
    node[last] = value


def default_payload(command: str) -> Dict[str, Any]:
    if command == "simulate":
        return {"params": {"system": "pressureless", "lam": -1, "sigma": 0.5}, "grid": {"d": 1, "n": 256}}
    if command == "burgers-verify":
        return {
            "flow": {"d": 1, "epsilon": 0.2, "modes": [{"component": 0, "wavevector": [1]}]},
            "grid": {"d": 1, "n": 512},
            "times": [0.0, 1.0, 10.0, 100.0],
            "ell_list": [0.0, 1.0, 2.0],
        }
    if command == "gronwall":
        return {"a": 2.0, "C_star": 1.0, "b": [], "c": [], "c_P": 0, "Y0": 1e-3, "T": 1e4,
                "threshold": False, "resolution": 1e-3}
    if command == "ineq":
        return {"names": sorted(INEQUALITIES), "n": 128, "d": 1, "count": 200, "seed": 0,
                "beta": 2.0, "max_mode": 16}
    return {}


def resolve_payload(args: argparse.Namespace) -> Dict[str, Any]:
    """Defaults, then the --config file, then flags"""
    payload = default_payload(args.command)
    if args.config:
        loaded = load_json(args.config)
        if not isinstance(loaded, dict):
            raise ConfigError(f"{args.config}: expected a JSON object")
        payload = deep_merge(payload, loaded)

    if args.command == "simulate":
        _set(payload, "params.system", args.system)
        _set(payload, "params.lam", args.lam)
        _set(payload, "params.sigma", args.sigma)
        _set(payload, "params.gamma", args.gamma)
        _set(payload, "grid.d", args.dim)
        _set(payload, "grid.n", args.n)
        _set(payload, "grid.L", args.box)
        _set(payload, "dt", args.dt)
        _set(payload, "tau_end", args.tau_end)
        _set(payload, "initial.n_amplitude", args.n_amplitude)
        _set(payload, "initial.w_amplitude", args.w_amplitude)
        _set(payload, "cadence", args.cadence)
        _set(payload, "snapshot_every", args.snapshot_every)
        _set(payload, "seed", args.seed)
    elif args.command == "burgers-verify":
        if args.dim is not None:
            _set(payload, "flow.d", args.dim)
            _set(payload, "grid.d", args.dim)
        _set(payload, "grid.n", args.n)
        _set(payload, "flow.epsilon", args.epsilon)
        if args.times:
            payload["times"] = _floats(args.times)
    elif args.command == "gronwall":
        _set(payload, "a", args.a)
        _set(payload, "C_star", args.cstar)
        if args.b is not None:
            payload["b"] = _floats(args.b)
        if args.c is not None:
            payload["c"] = _floats(args.c)
        _set(payload, "c_P", args.cp)
        _set(payload, "Y0", args.y0)
        _set(payload, "T", args.T)
        if args.threshold:
            payload["threshold"] = True
    elif args.command == "ineq":
        _set(payload, "n", args.n)
        _set(payload, "d", args.dim)
        _set(payload, "count", args.count)
        _set(payload, "beta", args.beta)
        _set(payload, "max_mode", args.max_mode)
        _set(payload, "seed", args.seed)
        if args.which and args.which != "all":
            payload["names"] = [x.strip() for x in args.which.split(",") if x.strip()]
    elif args.command == "fit":
        _set(payload, "series", args.series)
    return payload


def _report(frame) -> None:
    print(frame.to_string(index=False))


def run_simulate(payload: Dict[str, Any], out: str, fmt: str, tol: float) -> int:
    config = SimConfig.from_dict(payload)
    with RieszWorkbench(out, fmt) as bench:
        result = bench.simulate(config)
    print(f"{len(result.series)} records written to {out}")
    if result.blew_up:
        print(f"blowup detected at tau = {result.blowup_tau:.6g}", file=sys.stderr)
        return EXIT_BLOWUP
    return EXIT_OK


def run_fit(payload: Dict[str, Any], out: str, fmt: str, tol: float, window: float) -> int:
    given = payload.pop("series", None)
    series_path = Path(given) if given else ResultsStore.find_series(out)
    if payload.get("params") is None:
        manifest = series_path.parent / "manifest.json"
        if not manifest.exists():
            raise ConfigError(f"no --config given and no manifest next to {series_path}")
        payload = load_json(str(manifest))["config"]
    config = SimConfig.from_dict(payload)
    series = ResultsStore.load_series(series_path)
    with RieszWorkbench(out, fmt) as bench:
        report = bench.fit(series, config, tol=tol, window=window)
    _report(report.to_frame())
    if not report.passed:
        failed = [f"{row.quantity} l={row.ell:g}" for row in report.rows if row.failed]
        raise VerificationFailure(f"measured decay slower than predicted for {', '.join(failed)}")
    return EXIT_OK


def run_burgers(payload: Dict[str, Any], out: str, fmt: str, tol: float) -> int:
    reject_unknown(payload, {"flow", "grid", "times", "ell_list", "growth_threshold"}, "burgers-verify")
    flow = InitialFlow.from_dict(payload["flow"])
    grid = Grid.from_dict(payload["grid"])
    with RieszWorkbench(out, fmt) as bench:
        report = bench.verify_background(flow, grid, payload["times"], payload.get("ell_list", [0.0, 1.0, 2.0]),
                                         payload.get("growth_threshold"))
    _report(report.table)
    for name, ok in report.verdicts.items():
        print(f"{name}: growth {report.growth[name]:.3g} -> {'bounded' if ok else 'GROWING'}")
    if not report.passed:
        growing = [name for name, ok in report.verdicts.items() if not ok]
        raise VerificationFailure(f"normalized gradient norms keep growing: {', '.join(growing)}")
    return EXIT_OK


def run_gronwall(payload: Dict[str, Any], out: str, fmt: str, tol: float) -> int:
    reject_unknown(payload, {"a", "C_star", "b", "c", "c_P", "Y0", "T", "threshold", "resolution"}, "gronwall")
    params = GronwallParams.from_dict({k: payload[k] for k in ("a", "C_star", "b", "c", "c_P") if k in payload})
    Y0, T = float(payload["Y0"]), float(payload["T"])
    with RieszWorkbench(out, fmt) as bench:
        outcome = bench.gronwall(params, Y0, T, threshold=bool(payload.get("threshold")),
                                 resolution=float(payload.get("resolution", 1e-3)))
    table = outcome["table"]
    trajectory = outcome["trajectory"]
    violated = trajectory.blew_up or bool((table["margin"] < -1e-9 * table["envelope"]).any())
    if trajectory.blew_up:
        print(f"trajectory blows up at t = {trajectory.blowup_time:.6g}")
    else:
        print(f"final Y = {table['Y'].iloc[-1]:.6g}, envelope = {table['envelope'].iloc[-1]:.6g}")
    found = outcome["threshold"]
    if found is not None:
        print(f"M = {found.M:.6g} ({'unbounded at scale' if found.unbounded else 'bisected'}), "
              f"analytic threshold {found.bootstrap_threshold:.6g}")
        if not found.consistent:
            raise VerificationFailure(f"bisected M = {found.M:.6g} not certified at half the analytic threshold")
    if violated:
        raise VerificationFailure(f"trajectory from Y0 = {Y0:g} leaves the envelope")
    return EXIT_OK


def run_ineq(payload: Dict[str, Any], out: str, fmt: str, tol: float) -> int:
    reject_unknown(payload, {"names", "n", "d", "count", "seed", "beta", "max_mode"}, "ineq")
    unknown = [name for name in payload["names"] if name not in INEQUALITIES]
    if unknown:
        raise ConfigError(f"unknown inequalities {', '.join(unknown)}; choose from {', '.join(sorted(INEQUALITIES))}")
    with RieszWorkbench(out, fmt) as bench:
        summaries = bench.inequality_study(
            payload["names"], n=int(payload["n"]), count=int(payload["count"]), seed=int(payload["seed"]),
            beta=float(payload["beta"]), max_mode=int(payload["max_mode"]), d=int(payload["d"]),
        )
    for s in summaries:
        print(f"{s.name}: max {s.max_low:.4g} -> {s.max_high:.4g}, p95 {s.p95_high:.4g}, "
              f"delta {s.delta:.3g} {'stable' if s.stable else 'UNSTABLE'}")
    unstable = [s.name for s in summaries if not s.stable]
    if unstable:
        raise VerificationFailure(f"constants grow under refinement: {', '.join(unstable)}")
    return EXIT_OK


def execute(command: str, payload: Dict[str, Any], out: str, fmt: str, tol: float,
            window: float = 0.5) -> int:
    """Run one pipeline and map workbench errors to exit codes"""
    try:
        if command == "simulate":
            return run_simulate(payload, out, fmt, tol)
        elif command == "fit":
            return run_fit(payload, out, fmt, tol, window)
        elif command == "burgers-verify":
            return run_burgers(payload, out, fmt, tol)
        elif command == "gronwall":
            return run_gronwall(payload, out, fmt, tol)
        elif command == "ineq":
            return run_ineq(payload, out, fmt, tol)
        raise ConfigError(f"unknown command {command}")
    except RieszLabError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    except (KeyError, TypeError) as e:
        print(f"error: malformed configuration ({e})", file=sys.stderr)
        return EXIT_CONFIG
    except Exception as e:
        logger.exception("internal error")
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NUMERIC


def _sweep_worker(job) -> int:
    command, payload, out, fmt, tol, window, verbose = job
    configure_logging(verbose)
    return execute(command, payload, out, fmt, tol, window)


def run_sweep(args: argparse.Namespace, payload: Dict[str, Any]) -> int:
    overrides = load_json(args.sweep)
    if not isinstance(overrides, list) or not all(isinstance(o, dict) for o in overrides):
        raise ConfigError(f"{args.sweep}: expected a JSON list of objects")
    window = getattr(args, "window", 0.5)
    jobs = [
        (args.command, deep_merge(payload, o), str(Path(args.out) / f"sweep_{i}"),
         args.format, args.tol, window, args.verbose)
        for i, o in enumerate(overrides)
    ]
    if not jobs:
        return EXIT_OK
    workers = max(1, min(settings.threads, len(jobs)))
    logger.info("sweeping %d runs on %d workers", len(jobs), workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        codes = list(pool.map(_sweep_worker, jobs))
    for i, code in enumerate(codes):
        logger.info("sweep_%d exited with %d", i, code)
    return max(codes)


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_CONFIG if e.code else EXIT_OK
    configure_logging(args.verbose)
    try:
        payload = resolve_payload(args)
        if args.sweep:
            return run_sweep(args, payload)
    except RieszLabError as e:
        print(f"error: {e}", file=sys.stderr)
        return e.exit_code
    return execute(args.command, payload, args.out, args.format, args.tol, getattr(args, "window", 0.5))


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
