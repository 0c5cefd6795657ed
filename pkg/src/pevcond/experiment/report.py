"""
Run reports and their JSON / CSV forms.

JSON floats are written with 17 significant digits, so every double
round-trips; non-finite values are written as Infinity, -Infinity and NaN as
Python's json module reads them.
"""

import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from pevcond.closedform.formulas import ClosedFormValue
from pevcond.experiment.config import ExperimentConfig


RAW_COLUMNS = ["trial", "mu", "valid", "error"]
CSV_FLOAT_FORMAT = "%.17g"


@dataclass(frozen=True)
class TrialResult:
    trial: int
    mu: float
    valid: bool
    error: str = ""


@dataclass
class McReport:
    """
    Estimates of E mu(A) over one ensemble next to the closed forms that predict it.
    """
    config: ExperimentConfig
    n_finite: int
    invalid_count: int
    mean: float
    stderr: float
    ci95: Tuple[float, float]
    mom: float
    mom_spread: float
    trimmed: float
    closed_form: Optional[ClosedFormValue]
    asymptotic: Optional[ClosedFormValue]
    bound: ClosedFormValue
    elapsed_s: float
    per_trial_path: Optional[str] = None

    @property
    def invalid_fraction(self) -> float:
        return self.invalid_count / self.config.trials

    def numeric_fields(self) -> Dict[str, Any]:
        """
        The fields that must agree between runs of the same configuration.
        """
        return {
            "n_finite": self.n_finite,
            "invalid_count": self.invalid_count,
            "mean": self.mean,
            "stderr": self.stderr,
            "ci95": self.ci95,
            "mom": self.mom,
            "mom_spread": self.mom_spread,
            "trimmed": self.trimmed,
        }

    def to_dict(self) -> Dict[str, Any]:
        data: Dict[str, Any] = {"config": self.config.to_dict()}
        data.update(self.numeric_fields())
        data["ci95"] = list(self.ci95)
        data["closed_form"] = self.closed_form.to_dict() if self.closed_form else None
        data["asymptotic"] = self.asymptotic.to_dict() if self.asymptotic else None
        data["bound"] = self.bound.to_dict()
        data["elapsed_s"] = self.elapsed_s
        data["per_trial_path"] = self.per_trial_path
        return data


def _format_float(value: float) -> str:
    if math.isnan(value):
        return "NaN"
    if math.isinf(value):
        return "Infinity" if value > 0 else "-Infinity"
    text = format(value, ".17g")
    if not any(c in text for c in ".en"):
        text += ".0"
    return text


def _encode(value: Any, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1))
    close = "\n" + " " * (indent * level)
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if value is None:
        return "null"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return _format_float(float(value))
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, np.ndarray):
        return _encode(value.tolist(), indent, level)
    if isinstance(value, dict):
        if not value:
            return "{}"
        items = [f"{json.dumps(str(k))}: {_encode(v, indent, level + 1)}" for k, v in value.items()]
        return "{" + pad + ("," + pad).join(items) + close + "}"
    if isinstance(value, (list, tuple)):
        if not value:
            return "[]"
        items = [_encode(v, indent, level + 1) for v in value]
        return "[" + pad + ("," + pad).join(items) + close + "]"
    raise TypeError(f"Object of type {type(value).__name__} is not JSON serializable")


def to_json(data: Any, indent: int = 2) -> str:
    """
    Serialize plain data (dicts, lists, numbers, strings, numpy scalars and arrays).
    """
    return _encode(data, indent, 0) + "\n"


def write_json(path: Union[str, Path], data: Any) -> None:
    Path(path).write_text(to_json(data))


def trials_frame(results: Sequence[TrialResult]) -> pd.DataFrame:
    return pd.DataFrame(
        [(r.trial, r.mu, r.valid, r.error) for r in results],
        columns=RAW_COLUMNS,
    )


def write_raw_samples(path: Union[str, Path], results: Sequence[TrialResult]) -> None:
    """
    One CSV row per trial: trial, mu, valid, error.
    """
    trials_frame(results).to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)


def write_table(path: Union[str, Path], frame: pd.DataFrame) -> None:
    frame.to_csv(path, index=False, float_format=CSV_FLOAT_FORMAT)
