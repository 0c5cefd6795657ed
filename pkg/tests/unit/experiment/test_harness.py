"""
Tests for the Monte Carlo harness and sweeps.
"""
import math

import numpy as np
import pandas as pd
import pytest

from pevcond.core.event_system import EventBus, EventListener, EventType
from pevcond.ensembles.sampler import EnsembleSpec
from pevcond.experiment.config import WORKERS_ENV, ExperimentConfig, SweepGrid
from pevcond.experiment.harness import (
    SWEEP_COLUMNS,
    closed_forms_for,
    run_experiment,
    run_trial,
    run_trials,
    sweep,
)
from pevcond.experiment.report import RAW_COLUMNS


@pytest.fixture(autouse=True)
def no_worker_env(monkeypatch):
    monkeypatch.delenv(WORKERS_ENV, raising=False)


class Recorder(EventListener):
    def __init__(self):
        super().__init__("recorder", list(EventType))
        self.events = []

    def handle_event(self, event):
        self.events.append(event)

    def types(self):
        return [event.type for event in self.events]


class TestClosedFormsFor:
    """Tests for matching closed forms to ensembles"""

    def test_gaussian(self):
        """Test exact value, asymptotic and bound for Gaussian n=2 d=1"""
        exact, asymptotic, bound = closed_forms_for(EnsembleSpec.gaussian(2, 1))

        assert exact.value == pytest.approx(1.6 * math.pi, rel=1e-12)
        assert asymptotic.value == pytest.approx(math.pi / 2.0 * math.sqrt(16.0), rel=1e-14)
        assert bound.value == pytest.approx(6.4, rel=1e-13)

    def test_goe(self):
        """Test the GOE value and the bound over k = n(n+1)/2"""
        exact, _, bound = closed_forms_for(EnsembleSpec.goe(2, 1))

        assert exact.value == pytest.approx(8.0 * math.sqrt(2.0) / 3.0, rel=1e-12)
        assert bound.params["k"] == 3

    def test_subspace(self):
        """Test that a subspace has an exact value only with a volume ratio"""
        spec = EnsembleSpec.subspace(2, 1)
        exact, asymptotic, bound = closed_forms_for(spec)

        assert exact is None and asymptotic is None
        assert bound.params == {"n": 2, "k": 3, "d": 1}
        with_ratio, _, _ = closed_forms_for(spec, vol_ratio=math.sqrt(2.0))
        assert with_ratio.value == pytest.approx(8.0 * math.sqrt(2.0) / 3.0, rel=1e-12)


class TestRunTrial:
    """Tests for single trials"""

    def test_scalar_linear_is_exactly_one(self):
        """Test that n = d = 1 trials have condition number one"""
        for t in range(20):
            result = run_trial(EnsembleSpec.gaussian(1, 1), 3, t)
            assert result.valid
            assert result.mu == pytest.approx(1.0, abs=1e-12)

    def test_failure_is_captured(self):
        """Test that an exception becomes an invalid trial"""
        result = run_trial(EnsembleSpec.gaussian(9, 8), 3, 0)

        assert not result.valid
        assert math.isnan(result.mu)
        assert result.error.startswith("DegreeOverflow")


class TestRunExperiment:
    """Tests for whole runs"""

    def test_unit_case(self):
        """Test mean one and zero spread for n = d = 1"""
        report = run_experiment(ExperimentConfig(EnsembleSpec.gaussian(1, 1), trials=100, seed=9))

        assert report.n_finite == 100
        assert report.invalid_count == 0
        assert report.mean == pytest.approx(1.0, abs=1e-12)
        assert report.stderr <= 1e-12
        assert report.mom == pytest.approx(1.0, abs=1e-12)
        assert report.closed_form.value == pytest.approx(1.0, abs=1e-10)

    def test_trials_in_order(self):
        """Test that results come back sorted by trial index"""
        cfg = ExperimentConfig(EnsembleSpec.goe(2, 1), trials=23, seed=4)
        results = run_trials(cfg)

        assert [r.trial for r in results] == list(range(23))

    def test_independent_of_worker_count(self):
        """Test that one and two workers give identical estimates"""
        spec = EnsembleSpec.gaussian(2, 1)
        single = run_experiment(ExperimentConfig(spec, trials=40, seed=12, workers=1))
        double = run_experiment(ExperimentConfig(spec, trials=40, seed=12, workers=2))

        assert single.numeric_fields() == double.numeric_fields()

    def test_seed_changes_estimates(self):
        """Test that a different seed draws different problems"""
        spec = EnsembleSpec.gaussian(2, 1)
        first = run_experiment(ExperimentConfig(spec, trials=30, seed=1))
        second = run_experiment(ExperimentConfig(spec, trials=30, seed=2))

        assert first.mean != second.mean

    def test_raw_samples_file(self, tmp_path):
        """Test the per-trial CSV"""
        path = tmp_path / "raw.csv"
        report = run_experiment(
            ExperimentConfig(EnsembleSpec.goe(2, 2), trials=15, seed=8), raw_path=path
        )
        frame = pd.read_csv(path)

        assert report.per_trial_path == str(path)
        assert list(frame.columns) == RAW_COLUMNS
        assert len(frame) == 15
        assert frame["valid"].sum() == report.n_finite

    def test_lifecycle_events(self):
        """Test RUN_STARTED, TRIALS_COMPLETED and RUN_COMPLETED"""
        bus = EventBus()
        recorder = Recorder()
        bus.register_listener(recorder)
        run_experiment(ExperimentConfig(EnsembleSpec.gaussian(1, 2), trials=10, seed=0), bus=bus)
        types = recorder.types()

        assert types[0] == EventType.RUN_STARTED
        assert types[-1] == EventType.RUN_COMPLETED
        assert EventType.TRIALS_COMPLETED in types
        assert recorder.events[0].data["trials"] == 10

    def test_report_document(self):
        """Test the JSON-ready form of a report"""
        report = run_experiment(ExperimentConfig(EnsembleSpec.gaussian(1, 1), trials=5, seed=0))
        data = report.to_dict()

        assert data["config"]["trials"] == 5
        assert data["closed_form"]["formula_id"] == "GaussianExact"
        assert data["bound"]["formula_id"] == "UniversalBound"
        assert len(data["ci95"]) == 2
        assert report.invalid_fraction == 0.0

    @pytest.mark.slow
    def test_gaussian_21_estimate(self):
        """Test that the median of means lands near 1.6 pi"""
        cfg = ExperimentConfig(EnsembleSpec.gaussian(2, 1), trials=20000, seed=42)
        report = run_experiment(cfg)

        assert report.invalid_count <= 20
        assert report.mom == pytest.approx(1.6 * math.pi, rel=0.2)


class TestSweep:
    """Tests for grid sweeps"""

    def test_rows_and_columns(self):
        """Test one row per cell with the closed forms filled in"""
        grid = SweepGrid.from_dict(
            {"ensembles": ["gaussian", "goe"], "n": [1, 2], "d": [1], "trials": 12, "seed": 3}
        )
        bus = EventBus()
        recorder = Recorder()
        bus.register_listener(recorder)
        table = sweep(grid, bus=bus)

        assert list(table.columns) == SWEEP_COLUMNS
        assert len(table) == 4
        assert table["ensemble"].tolist() == ["gaussian", "gaussian", "goe", "goe"]
        assert table["closed_form"].iloc[1] == pytest.approx(1.6 * math.pi, rel=1e-12)
        assert recorder.types().count(EventType.CELL_COMPLETED) == 4

    def test_failed_cell_is_nan(self):
        """Test that a cell outside the solver limit leaves NaN and the sweep continues"""
        grid = SweepGrid.from_dict(
            {"ensembles": ["gaussian"], "n": [1, 9], "d": [8], "trials": 5, "seed": 3}
        )
        table = sweep(grid)

        assert len(table) == 2
        assert np.isfinite(table["mean"].iloc[0])
        assert np.isnan(table["mean"].iloc[1])
