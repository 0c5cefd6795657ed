"""
Tests for run and sweep configuration.
"""
import pytest

from pevcond.ensembles.sampler import EnsembleKind, EnsembleSpec
from pevcond.experiment.config import (
    DEFAULT_TRIM,
    WORKERS_ENV,
    ConfigError,
    ExperimentConfig,
    SweepGrid,
    resolve_workers,
)


@pytest.fixture(autouse=True)
def no_worker_env(monkeypatch):
    monkeypatch.delenv(WORKERS_ENV, raising=False)


class TestResolveWorkers:
    """Tests for the worker count"""

    def test_default_and_requested(self):
        """Test one worker by default and the requested count otherwise"""
        assert resolve_workers() == 1
        assert resolve_workers(3) == 3

    def test_environment_overrides(self, monkeypatch):
        """Test that PEVCOND_WORKERS wins over the request"""
        monkeypatch.setenv(WORKERS_ENV, "4")

        assert resolve_workers() == 4
        assert resolve_workers(2) == 4

    @pytest.mark.parametrize("value", ["zero", "0", "-3"])
    def test_invalid_environment(self, monkeypatch, value):
        """Test that a malformed or non-positive variable is refused"""
        monkeypatch.setenv(WORKERS_ENV, value)
        with pytest.raises(ConfigError):
            resolve_workers()

    def test_invalid_request(self):
        """Test that a non-positive request is refused"""
        with pytest.raises(ConfigError):
            resolve_workers(0)


class TestExperimentConfig:
    """Tests for single-run configuration"""

    def test_defaults(self):
        """Test ceil(sqrt(trials)) blocks and the default trim"""
        cfg = ExperimentConfig(EnsembleSpec.gaussian(2, 1), trials=10, seed=1)

        assert cfg.mom_blocks == 4
        assert cfg.trim == DEFAULT_TRIM
        assert cfg.workers is None

    @pytest.mark.parametrize("kwargs", [
        {"trials": 0},
        {"trim": 0.06},
        {"trim": -0.01},
        {"mom_blocks": 11},
        {"mom_blocks": 0},
        {"workers": 0},
        {"seed": 1 << 64},
    ])
    def test_invalid_values(self, kwargs):
        """Test that out-of-range settings raise ConfigError"""
        settings = {"spec": EnsembleSpec.gaussian(2, 1), "trials": 10, "seed": 1}
        settings.update(kwargs)
        with pytest.raises(ConfigError):
            ExperimentConfig(**settings)

    def test_degree_limit(self):
        """Test that n*d above the solver limit is refused up front"""
        with pytest.raises(ConfigError):
            ExperimentConfig(EnsembleSpec.gaussian(9, 8), trials=10, seed=1)

    def test_vol_ratio_only_for_subspace(self):
        """Test that a volume ratio needs a subspace ensemble"""
        with pytest.raises(ConfigError):
            ExperimentConfig(EnsembleSpec.goe(2, 1), trials=10, seed=1, vol_ratio=1.4)
        cfg = ExperimentConfig(EnsembleSpec.subspace(2, 1), trials=10, seed=1, vol_ratio=1.4)
        assert cfg.vol_ratio == 1.4

    def test_dict_round_trip(self):
        """Test the JSON document form"""
        cfg = ExperimentConfig(EnsembleSpec.goe(3, 2), trials=50, seed=-7, mom_blocks=5, trim=0.02)
        restored = ExperimentConfig.from_dict(cfg.to_dict())

        assert restored.to_dict() == cfg.to_dict()
        assert restored.spec.kind is EnsembleKind.GOE

    def test_missing_key(self):
        """Test that a missing field is a ConfigError"""
        with pytest.raises(ConfigError):
            ExperimentConfig.from_dict({"spec": {"kind": "goe", "n": 2, "d": 1}, "trials": 3})


class TestSweepGrid:
    """Tests for sweep grids"""

    @pytest.fixture
    def grid_data(self):
        return {"ensembles": ["gaussian"], "n": [1, 2, 3], "d": [1, 2], "trials": 20, "seed": 5}

    def test_cells(self, grid_data):
        """Test the cartesian product of ensembles, n and d"""
        cells = list(SweepGrid.from_dict(grid_data).cells())

        assert len(cells) == 6
        assert cells[0] == {"ensemble": EnsembleKind.GAUSSIAN, "n": 1, "d": 1}
        assert cells[-1] == {"ensemble": EnsembleKind.GAUSSIAN, "n": 3, "d": 2}

    def test_round_trip(self, grid_data):
        """Test parse and serialize"""
        grid = SweepGrid.from_dict(grid_data)

        assert SweepGrid.from_dict(grid.to_dict()) == grid

    def test_config_for_caps_blocks(self, grid_data):
        """Test that per-cell configs inherit settings and cap the block count"""
        grid_data["mom_blocks"] = 100
        cfg = SweepGrid.from_dict(grid_data).config_for(EnsembleKind.GAUSSIAN, 2, 1)

        assert cfg.mom_blocks == 20
        assert cfg.seed == 5 and cfg.trials == 20

    def test_subspace_cells_use_symmetric_basis(self, grid_data):
        """Test the default basis of subspace cells"""
        grid_data["ensembles"] = ["subspace"]
        cfg = SweepGrid.from_dict(grid_data).config_for(EnsembleKind.SUBSPACE, 3, 1)

        assert cfg.spec.k == 6

    @pytest.mark.parametrize("change", [
        {"ensembles": ["wishart"]},
        {"ensembles": []},
        {"n": [0]},
        {"trials": 0},
    ])
    def test_invalid_grids(self, grid_data, change):
        """Test that malformed grids raise ConfigError"""
        grid_data.update(change)
        with pytest.raises(ConfigError):
            SweepGrid.from_dict(grid_data)

    def test_missing_key(self, grid_data):
        """Test that a missing field is a ConfigError"""
        del grid_data["seed"]
        with pytest.raises(ConfigError):
            SweepGrid.from_dict(grid_data)
