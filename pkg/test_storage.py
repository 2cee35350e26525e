"""
Tests for the results directory layout
"""

import json

import numpy as np
import pytest

from src.errors import ConfigError
from src.models import Grid, ScalarField, State, VectorField
from src.storage import ResultsStore


def random_state(grid, tau, seed=0):
    rng = np.random.default_rng(seed)
    N = ScalarField(grid, rng.normal(size=grid.shape))
    W = VectorField(grid, tuple(ScalarField(grid, rng.normal(size=grid.shape)) for _ in range(grid.d)))
    return State(N, W, tau)


def test_snapshot_round_trip(tmp_path):
    grid = Grid(d=2, n=16, L=3.0)
    state = random_state(grid, 0.375)
    store = ResultsStore(tmp_path)
    path = store.write_snapshot(state, 3)
    assert path.name == "snapshot_00003.bin"

    loaded = ResultsStore.load_snapshot(path)
    assert loaded.tau == 0.375
    assert loaded.grid == grid
    np.testing.assert_array_equal(loaded.N.values, state.N.values)
    for original, restored in zip(state.W, loaded.W):
        np.testing.assert_array_equal(restored.values, original.values)


def test_truncated_snapshot_rejected(tmp_path):
    grid = Grid(d=1, n=16)
    path = ResultsStore(tmp_path).write_snapshot(random_state(grid, 0.0), 0)
    path.write_bytes(path.read_bytes()[:-8])
    with pytest.raises(ConfigError):
        ResultsStore.load_snapshot(path)


def test_named_manifests_do_not_collide(tmp_path):
    store = ResultsStore(tmp_path)
    store.write_manifest("simulate", {"dt": 0.01}, {"format": "json"})
    store.write_manifest("fit", {"dt": 0.01}, {"tol": 0.1}, name="fit_manifest")
    assert json.loads((tmp_path / "manifest.json").read_text())["command"] == "simulate"
    assert json.loads((tmp_path / "fit_manifest.json").read_text())["command"] == "fit"


def test_find_series_follows_manifest_format(tmp_path):
    assert ResultsStore.find_series(tmp_path) == tmp_path / "norms.csv"
    ResultsStore(tmp_path, "json").write_manifest("simulate", {}, {"format": "json"})
    assert ResultsStore.find_series(tmp_path) == tmp_path / "norms.json"
