"""
On-disk results: a manifest, tables and raw field snapshots under one directory
"""

import json
import logging
import math
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional

import numpy as np
import pandas as pd

from ..errors import ConfigError
from ..models import Grid, NormSeries, ScalarField, State, VectorField

logger = logging.getLogger(__name__)

TOOL_NAME = "riesz-lab"
FORMATS = ("csv", "json")
FLOAT_FORMAT = "%.17g"


def _jsonable(value: Any) -> Any:
    """Replace non-finite floats so the manifest stays strict JSON"""
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


class ResultsStore:
    """Output directory of one run"""

    def __init__(self, root, fmt: str = "csv"):
        if fmt not in FORMATS:
            raise ConfigError(f"format must be one of {', '.join(FORMATS)}, got {fmt}")
        self.root = Path(root)
        self.fmt = fmt
        self.root.mkdir(parents=True, exist_ok=True)
        self.written: List[Path] = []

    def _track(self, path: Path) -> Path:
        self.written.append(path)
        logger.info("wrote %s", path)
        return path

    def write_manifest(self, command: str, config: Dict[str, Any], extra: Optional[Dict[str, Any]] = None,
                       name: str = "manifest") -> Path:
        """Echo the resolved configuration with the tool version and a timestamp into <name>.json"""
        from .. import __version__

        manifest = {
            "tool": TOOL_NAME,
            "version": __version__,
            "command": command,
            "created_at": datetime.now(timezone.utc).isoformat(),
            "config": _jsonable(config),
        }
        if extra:
            manifest.update(_jsonable(extra))
        path = self.root / f"{name}.json"
        path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n")
        return self._track(path)

    def write_table(self, name: str, frame: pd.DataFrame, fmt: Optional[str] = None) -> Path:
        """Write a table as <name>.csv or <name>.json; float formatting is fixed for byte-identical reruns"""
        fmt = fmt or self.fmt
        if fmt == "csv":
            path = self.root / f"{name}.csv"
            frame.to_csv(path, index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
        else:
            path = self.root / f"{name}.json"
            frame.to_json(path, orient="records", double_precision=15, indent=1)
        return self._track(path)

    def write_json(self, name: str, payload: Dict[str, Any]) -> Path:
        path = self.root / f"{name}.json"
        path.write_text(json.dumps(_jsonable(payload), indent=2, sort_keys=True) + "\n")
        return self._track(path)

    def write_series(self, series: NormSeries) -> Path:
        return self.write_table("norms", series.to_frame())

    def write_snapshot(self, state: State, index: int) -> Path:
        """Flat little-endian float64 array (N then W components) with a JSON sidecar"""
        folder = self.root / "snapshots"
        folder.mkdir(exist_ok=True)
        stem = f"snapshot_{index:05d}"
        data = np.concatenate([state.N.values.ravel()] + [c.values.ravel() for c in state.W])
        path = folder / f"{stem}.bin"
        data.astype("<f8").tofile(path)
        sidecar = {"grid": state.grid.to_dict(), "tau": state.tau, "fields": ["N"] + [f"W{j}" for j in range(state.grid.d)]}
        (folder / f"{stem}.json").write_text(json.dumps(sidecar, indent=2, sort_keys=True) + "\n")
        return self._track(path)

    @staticmethod
    def load_snapshot(path) -> State:
        path = Path(path)
        sidecar = json.loads(path.with_suffix(".json").read_text())
        grid = Grid.from_dict(sidecar["grid"])
        data = np.fromfile(path, dtype="<f8")
        expected = (grid.d + 1) * grid.size
        if data.size != expected:
            raise ConfigError(f"{path}: expected {expected} values, found {data.size}")
        chunks = data.reshape(grid.d + 1, grid.size)
        N = ScalarField(grid, chunks[0])
        W = VectorField(grid, tuple(ScalarField(grid, c) for c in chunks[1:]))
        return State(N, W, float(sidecar["tau"]))

    @staticmethod
    def find_series(root) -> Path:
        """norms.<fmt> of a run directory, the format read from its manifest"""
        root = Path(root)
        manifest = root / "manifest.json"
        fmt = "csv"
        if manifest.exists():
            fmt = json.loads(manifest.read_text()).get("format", "csv")
        if fmt not in FORMATS:
            raise ConfigError(f"{manifest}: unknown series format {fmt}")
        return root / f"norms.{fmt}"

    @staticmethod
    def load_series(path) -> NormSeries:
        """Read a norms table written as CSV or JSON"""
        path = Path(path)
        if not path.exists():
            raise ConfigError(f"series file not found: {path}")
        if path.suffix == ".json":
            frame = pd.read_json(path, orient="records")
            # to_json writes infinite exponents as null
            frame["p"] = frame["p"].astype(float).fillna(np.inf)
        else:
            frame = pd.read_csv(path)
            frame["p"] = frame["p"].astype(float)
        return NormSeries.from_frame(frame)
