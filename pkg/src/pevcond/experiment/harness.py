"""
Seeded Monte Carlo estimation of the expected condition number.

Trial t of a run draws sample(spec, RngKey(seed, t)) and records its total
condition number. Trials are split into contiguous index chunks which run
in-process or on a process pool; results are put back in trial order before
any estimator sees them, so a report does not depend on the worker count.
"""

import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from pevcond.closedform.formulas import (
    ClosedFormValue,
    asymptotic_full_gaussian,
    asymptotic_goe,
    expected_mu_full_gaussian,
    expected_mu_goe,
    expected_mu_subspace,
    upper_bound,
)
from pevcond.conditioning.condition import total_condition
from pevcond.core.event_system import EventBus, EventType
from pevcond.ensembles.rng import RngKey
from pevcond.ensembles.sampler import EnsembleKind, EnsembleSpec, sample
from pevcond.experiment.config import ExperimentConfig, SweepGrid, resolve_workers
from pevcond.experiment.estimators import estimate
from pevcond.experiment.report import McReport, TrialResult, write_raw_samples


logger = logging.getLogger(__name__)

CHUNKS_PER_WORKER = 4
SOURCE = "harness"
SWEEP_COLUMNS = [
    "ensemble", "n", "d", "trials", "seed", "mean", "stderr", "mom", "trimmed",
    "closed_form", "asymptotic", "bound", "invalid_count", "elapsed_s",
]


def closed_forms_for(
    spec: EnsembleSpec,
    vol_ratio: Optional[float] = None,
) -> Tuple[Optional[ClosedFormValue], Optional[ClosedFormValue], ClosedFormValue]:
    """
    Exact expectation, asymptotic and universal bound for an ensemble.

    Subspace ensembles have an exact value only when their volume ratio is
    given, and no asymptotic.
    """
    bound = upper_bound(spec.n, spec.k, spec.d)
    if spec.kind is EnsembleKind.GAUSSIAN:
        exact = expected_mu_full_gaussian(spec.n, spec.d)
        return exact, asymptotic_full_gaussian(spec.n, spec.d), bound
    if spec.kind is EnsembleKind.GOE:
        return expected_mu_goe(spec.n, spec.d), asymptotic_goe(spec.n, spec.d), bound
    if vol_ratio is None:
        return None, None, bound
    return expected_mu_subspace(spec.k, spec.d, vol_ratio, allow_formal=True), None, bound


def run_trial(spec: EnsembleSpec, seed: int, trial: int) -> TrialResult:
    """
    One trial; any failure is captured on the result instead of raised.
    """
    try:
        report = total_condition(sample(spec, RngKey(seed, trial)))
    except Exception as e:
        error = f"{type(e).__name__}: {e}"
        return TrialResult(trial=trial, mu=math.nan, valid=False, error=error)
    if report.degenerate:
        return TrialResult(trial, math.inf, False, "degenerate determinant form")
    if not math.isfinite(report.total_mu):
        return TrialResult(trial, report.total_mu, False, "infinite condition number")
    return TrialResult(trial=trial, mu=report.total_mu, valid=True)


def run_chunk(spec: EnsembleSpec, seed: int, start: int, stop: int) -> List[TrialResult]:
    return [run_trial(spec, seed, t) for t in range(start, stop)]


def _chunks(trials: int, workers: int) -> List[Tuple[int, int]]:
    count = max(1, min(trials, workers * CHUNKS_PER_WORKER))
    bounds = np.linspace(0, trials, count + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def run_trials(cfg: ExperimentConfig, bus: Optional[EventBus] = None) -> List[TrialResult]:
    """
    All trials of a run, in trial order.
    """
    workers = resolve_workers(cfg.workers)
    chunks = _chunks(cfg.trials, workers)
    results: List[TrialResult] = []

    def collect(batch: List[TrialResult]) -> None:
        results.extend(batch)
        if bus is not None:
            bus.emit(EventType.TRIALS_COMPLETED, SOURCE, completed=len(results), total=cfg.trials)

    if workers == 1:
        for start, stop in chunks:
            collect(run_chunk(cfg.spec, cfg.seed, start, stop))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(run_chunk, cfg.spec, cfg.seed, a, b) for a, b in chunks]
            for future in futures:
                collect(future.result())
    results.sort(key=lambda r: r.trial)
    return results


def run_experiment(
    cfg: ExperimentConfig,
    bus: Optional[EventBus] = None,
    raw_path: Optional[Union[str, Path]] = None,
) -> McReport:
    """
    Estimate E mu(A) over cfg.spec and compare with the closed forms.

    Args:
        cfg: Validated experiment configuration
        bus: Optional event bus for lifecycle events
        raw_path: Optional CSV file receiving one row per trial

    Returns:
        McReport: Estimates over the valid trials

    Raises:
        EmptyInput: If no trial produced a finite condition number
    """
    started = time.perf_counter()
    logger.info(
        f"Starting {cfg.trials} trials of {cfg.spec.kind} "
        f"n={cfg.spec.n} d={cfg.spec.d} seed={cfg.seed}"
    )
    if bus is not None:
        bus.emit(
            EventType.RUN_STARTED, SOURCE,
            ensemble=str(cfg.spec.kind), n=cfg.spec.n, d=cfg.spec.d, trials=cfg.trials,
        )
    results = run_trials(cfg, bus)

    invalid = [r for r in results if not r.valid]
    for r in invalid:
        logger.error(f"Trial {r.trial} invalid: {r.error}")
        if bus is not None:
            bus.emit(EventType.TRIAL_INVALID, SOURCE, trial=r.trial, error=r.error)
    if invalid:
        logger.warning(f"{len(invalid)} of {cfg.trials} trials invalid and excluded")

    finite = [r.mu for r in results if r.valid]
    stats = estimate(finite, min(cfg.mom_blocks, len(finite)) if finite else 1, cfg.trim)
    closed_form, asymptotic, bound = closed_forms_for(cfg.spec, cfg.vol_ratio)

    per_trial_path = None
    if raw_path is not None:
        write_raw_samples(raw_path, results)
        per_trial_path = str(raw_path)

    report = McReport(
        config=cfg,
        n_finite=stats.count,
        invalid_count=len(invalid),
        mean=stats.mean,
        stderr=stats.stderr,
        ci95=stats.ci95,
        mom=stats.mom,
        mom_spread=stats.mom_spread,
        trimmed=stats.trimmed,
        closed_form=closed_form,
        asymptotic=asymptotic,
        bound=bound,
        elapsed_s=time.perf_counter() - started,
        per_trial_path=per_trial_path,
    )
    logger.info(
        f"Finished {cfg.spec.kind} n={cfg.spec.n} d={cfg.spec.d}: mom={report.mom:.6g}, "
        f"mean={report.mean:.6g} +- {report.stderr:.2g} in {report.elapsed_s:.2f}s"
    )
    if bus is not None:
        bus.emit(
            EventType.RUN_COMPLETED, SOURCE,
            mom=report.mom, mean=report.mean, invalid=len(invalid),
        )
    return report


def _value(cf: Optional[ClosedFormValue]) -> float:
    return cf.value if cf is not None else math.nan


def sweep(grid: SweepGrid, bus: Optional[EventBus] = None) -> pd.DataFrame:
    """
    One row per grid cell with estimates, exact value, asymptotic and bound.

    A failing cell is logged and its numeric columns are left NaN; the sweep continues.
    """
    rows = []
    for cell in grid.cells():
        kind, n, d = cell["ensemble"], cell["n"], cell["d"]
        row = {"ensemble": str(kind), "n": n, "d": d, "trials": grid.trials, "seed": grid.seed}
        try:
            report = run_experiment(grid.config_for(kind, n, d), bus)
        except Exception as e:
            logger.error(f"Sweep cell {kind} n={n} d={d} failed: {e}")
            row.update({name: math.nan for name in SWEEP_COLUMNS if name not in row})
        else:
            row.update({
                "mean": report.mean,
                "stderr": report.stderr,
                "mom": report.mom,
                "trimmed": report.trimmed,
                "closed_form": _value(report.closed_form),
                "asymptotic": _value(report.asymptotic),
                "bound": report.bound.value,
                "invalid_count": report.invalid_count,
                "elapsed_s": report.elapsed_s,
            })
        rows.append(row)
        if bus is not None:
            bus.emit(EventType.CELL_COMPLETED, SOURCE, ensemble=str(kind), n=n, d=d)
    return pd.DataFrame(rows, columns=SWEEP_COLUMNS)
