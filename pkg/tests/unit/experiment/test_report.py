"""
Tests for JSON and CSV output of run reports.
"""
import json
import math

import numpy as np
import pandas as pd
import pytest

from pevcond.experiment.report import (
    RAW_COLUMNS,
    TrialResult,
    to_json,
    trials_frame,
    write_json,
    write_raw_samples,
    write_table,
)


class TestToJson:
    """Tests for the 17-digit JSON encoder"""

    def test_floats_round_trip(self):
        """Test that every double is written with enough digits to read back exactly"""
        values = [0.1, 1.0 / 3.0, math.pi, 2.0 ** -1074, 1.7976931348623157e308, -0.0]
        restored = json.loads(to_json(values))

        assert restored == values
        assert "0.10000000000000001" in to_json(0.1)

    def test_integral_floats_keep_a_decimal_point(self):
        """Test that 2.0 is not written as the integer 2"""
        assert to_json(2.0) == "2.0\n"
        assert isinstance(json.loads(to_json(2.0)), float)

    def test_non_finite(self):
        """Test Infinity, -Infinity and NaN"""
        text = to_json({"a": math.inf, "b": -math.inf, "c": math.nan})
        restored = json.loads(text)

        assert "Infinity" in text
        assert restored["a"] == math.inf and restored["b"] == -math.inf
        assert math.isnan(restored["c"])

    def test_plain_and_numpy_values(self):
        """Test nesting, booleans, None, strings and numpy scalars and arrays"""
        data = {
            "flag": np.bool_(True),
            "none": None,
            "name": 'quote " inside',
            "count": np.int64(3),
            "value": np.float64(0.25),
            "matrix": np.eye(2),
            "empty": [],
            "nested": {"t": (1, 2)},
        }
        restored = json.loads(to_json(data))

        assert restored == {
            "flag": True,
            "none": None,
            "name": 'quote " inside',
            "count": 3,
            "value": 0.25,
            "matrix": [[1.0, 0.0], [0.0, 1.0]],
            "empty": [],
            "nested": {"t": [1, 2]},
        }

    def test_unsupported_type(self):
        """Test that arbitrary objects are refused"""
        with pytest.raises(TypeError):
            to_json({"x": object()})

    def test_write_json(self, tmp_path):
        """Test writing a document to disk"""
        path = tmp_path / "out.json"
        write_json(path, {"mu": 1.5})

        assert json.loads(path.read_text()) == {"mu": 1.5}


class TestCsvOutput:
    """Tests for per-trial and sweep tables"""

    @pytest.fixture
    def results(self):
        return [
            TrialResult(0, 1.0 / 3.0, True),
            TrialResult(1, math.inf, False, "degenerate determinant form"),
            TrialResult(2, 2.5, True),
        ]

    def test_trials_frame(self, results):
        """Test one row per trial with the raw columns"""
        frame = trials_frame(results)

        assert list(frame.columns) == RAW_COLUMNS
        assert frame["valid"].tolist() == [True, False, True]

    def test_raw_samples_keep_full_precision(self, tmp_path, results):
        """Test that the CSV stores mu with 17 significant digits"""
        path = tmp_path / "raw.csv"
        write_raw_samples(path, results)
        frame = pd.read_csv(path, float_precision="round_trip")

        assert frame["mu"][0] == 1.0 / 3.0
        assert math.isinf(frame["mu"][1])
        assert frame["error"][1] == "degenerate determinant form"
        assert frame["trial"].tolist() == [0, 1, 2]

    def test_write_table(self, tmp_path):
        """Test writing a sweep table without the index"""
        path = tmp_path / "table.csv"
        write_table(path, pd.DataFrame({"n": [1, 2], "mom": [1.0, 5.0]}))

        assert path.read_text().splitlines()[0] == "n,mom"
