"""
Configuration of Monte Carlo runs and sweeps.
"""

import logging
import math
import os
from dataclasses import dataclass, field
from typing import Any, Dict, Iterator, List, Optional

from pevcond.core.matpoly import PevcondError
from pevcond.ensembles.sampler import EnsembleKind, EnsembleSpec
from pevcond.solver.pevsolver import MAX_DEGREE


logger = logging.getLogger(__name__)

WORKERS_ENV = "PEVCOND_WORKERS"
MAX_TRIM = 0.05
DEFAULT_TRIM = 0.01


class ConfigError(PevcondError, ValueError):
    """
    Raised for invalid experiment, sweep or worker settings.
    """
    pass


def resolve_workers(requested: Optional[int] = None) -> int:
    """
    Worker count for a run; PEVCOND_WORKERS takes precedence over ``requested``.

    Raises:
        ConfigError: If the resolved value is not a positive integer
    """
    env_value = os.environ.get(WORKERS_ENV)
    if env_value:
        try:
            workers = int(env_value)
        except ValueError:
            raise ConfigError(f"{WORKERS_ENV} must be an integer, got {env_value!r}")
        if requested is not None and requested != workers:
            logger.info(f"{WORKERS_ENV}={workers} overrides requested workers={requested}")
    else:
        workers = 1 if requested is None else int(requested)
    if workers < 1:
        raise ConfigError(f"Worker count must be positive, got {workers}")
    return workers


@dataclass(frozen=True)
class ExperimentConfig:
    """
    One Monte Carlo estimate of E mu(A) over an ensemble.

    ``mom_blocks`` defaults to ceil(sqrt(trials)). ``vol_ratio`` supplies the
    volume ratio of a subspace ensemble so its closed form can be reported.
    """
    spec: EnsembleSpec
    trials: int
    seed: int
    mom_blocks: Optional[int] = None
    trim: float = DEFAULT_TRIM
    workers: Optional[int] = None
    vol_ratio: Optional[float] = None

    def __post_init__(self):
        if self.trials < 1:
            raise ConfigError(f"trials must be positive, got {self.trials}")
        if not -(1 << 63) <= self.seed < (1 << 64):
            raise ConfigError(f"seed must fit in 64 bits, got {self.seed}")
        blocks = self.mom_blocks
        if blocks is None:
            blocks = math.ceil(math.sqrt(self.trials))
            object.__setattr__(self, "mom_blocks", blocks)
        if not 1 <= blocks <= self.trials:
            raise ConfigError(f"mom_blocks must lie in [1, trials={self.trials}], got {blocks}")
        if not 0.0 <= self.trim <= MAX_TRIM:
            raise ConfigError(f"trim must lie in [0, {MAX_TRIM}], got {self.trim}")
        if self.workers is not None and self.workers < 1:
            raise ConfigError(f"workers must be positive, got {self.workers}")
        if self.spec.n * self.spec.d > MAX_DEGREE:
            raise ConfigError(
                f"n*d = {self.spec.n * self.spec.d} exceeds the solver limit of {MAX_DEGREE}"
            )
        if self.vol_ratio is not None:
            if self.spec.kind is not EnsembleKind.SUBSPACE:
                raise ConfigError("vol_ratio is only accepted for subspace ensembles")
            if not math.isfinite(self.vol_ratio) or self.vol_ratio < 0.0:
                raise ConfigError(f"vol_ratio must be finite and nonnegative, got {self.vol_ratio}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "spec": self.spec.to_dict(),
            "trials": self.trials,
            "seed": self.seed,
            "mom_blocks": self.mom_blocks,
            "trim": self.trim,
            "workers": self.workers,
            "vol_ratio": self.vol_ratio,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        try:
            return cls(
                spec=EnsembleSpec.from_dict(data["spec"]),
                trials=int(data["trials"]),
                seed=int(data["seed"]),
                mom_blocks=data.get("mom_blocks"),
                trim=float(data.get("trim", DEFAULT_TRIM)),
                workers=data.get("workers"),
                vol_ratio=data.get("vol_ratio"),
            )
        except KeyError as e:
            raise ConfigError(f"Experiment config is missing {e}")


@dataclass(frozen=True)
class SweepGrid:
    """
    Cartesian grid of ensembles x n x d sharing trials and seed.
    """
    ensembles: List[EnsembleKind]
    n: List[int]
    d: List[int]
    trials: int
    seed: int
    mom_blocks: Optional[int] = None
    trim: float = DEFAULT_TRIM
    workers: Optional[int] = field(default=None, compare=False)

    def __post_init__(self):
        try:
            kinds = [EnsembleKind(kind) for kind in self.ensembles]
        except ValueError as e:
            raise ConfigError(f"Unknown ensemble in grid: {e}")
        object.__setattr__(self, "ensembles", kinds)
        if not kinds or not self.n or not self.d:
            raise ConfigError("Sweep grid needs at least one ensemble, n and d")
        if any(int(value) < 1 for value in list(self.n) + list(self.d)):
            raise ConfigError("Grid values of n and d must be positive")
        if self.trials < 1:
            raise ConfigError(f"trials must be positive, got {self.trials}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "SweepGrid":
        """
        Parse {"ensembles", "n", "d", "trials", "seed", optional "mom_blocks", "trim"}.
        """
        try:
            return cls(
                ensembles=list(data["ensembles"]),
                n=[int(v) for v in data["n"]],
                d=[int(v) for v in data["d"]],
                trials=int(data["trials"]),
                seed=int(data["seed"]),
                mom_blocks=data.get("mom_blocks"),
                trim=float(data.get("trim", DEFAULT_TRIM)),
            )
        except KeyError as e:
            raise ConfigError(f"Sweep grid is missing {e}")

    def to_dict(self) -> Dict[str, Any]:
        return {
            "ensembles": [str(kind) for kind in self.ensembles],
            "n": list(self.n),
            "d": list(self.d),
            "trials": self.trials,
            "seed": self.seed,
            "mom_blocks": self.mom_blocks,
            "trim": self.trim,
        }

    def cells(self) -> Iterator[Dict[str, Any]]:
        for kind in self.ensembles:
            for n in self.n:
                for d in self.d:
                    yield {"ensemble": kind, "n": int(n), "d": int(d)}

    def config_for(self, kind: EnsembleKind, n: int, d: int) -> ExperimentConfig:
        if kind is EnsembleKind.SUBSPACE:
            spec = EnsembleSpec.subspace(n, d)
        else:
            spec = EnsembleSpec(kind, n, d)
        blocks = self.mom_blocks
        if blocks is not None:
            blocks = min(int(blocks), self.trials)
        return ExperimentConfig(
            spec=spec,
            trials=self.trials,
            seed=self.seed,
            mom_blocks=blocks,
            trim=self.trim,
            workers=self.workers,
        )
