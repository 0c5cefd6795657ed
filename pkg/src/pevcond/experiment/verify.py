"""
Acceptance suite.

Each check returns a CheckResult; ``run_suite`` runs them in order and the CLI
exits with status 0 only when all pass. The ``full`` suite uses the trial
counts and tolerances the closed forms are held to; ``quick`` runs the same
checks with fewer trials and a looser Monte Carlo tolerance.
"""

import logging
import math
import time
from dataclasses import dataclass
from typing import Callable, Dict, List, Optional

import numpy as np
import pandas as pd

from pevcond.closedform.formulas import (
    asymptotic_full_gaussian,
    asymptotic_goe,
    expected_mu_full_gaussian,
    expected_mu_goe,
    expected_mu_goe_direct,
    expected_mu_subspace,
    vol_ratio_full,
    vol_ratio_sym,
)
from pevcond.conditioning.condition import (
    RootTrackingLost,
    finite_difference_condition,
    local_condition,
    total_condition,
)
from pevcond.core.event_system import EventBus, EventType
from pevcond.core.matpoly import (
    BinaryFormBasis,
    ProjectivePoint,
    apply_coefficient_map,
    orthogonal_transform,
    random_orthogonal_matrix,
    scale_coeffs,
)
from pevcond.ensembles.rng import RngKey
from pevcond.ensembles.sampler import EnsembleSpec, sample
from pevcond.experiment.config import ExperimentConfig
from pevcond.experiment.estimators import estimate
from pevcond.experiment.harness import run_experiment, run_trial
from pevcond.solver.pevsolver import Degenerate, polynomial_eigenvalues


logger = logging.getLogger(__name__)

SUITES = ("quick", "full")
MAX_INVALID_FRACTION = 1e-3
ORACLE_TOL = 1e-4
ORACLE_MIN_SEPARATION = 1e-2
ORACLE_MAX_MU = 1e3
RESIDUAL_TOL = 1e-12
IDENTITY_TOL = 1e-12
SCALE_TOL = 1e-12
ORTHOGONAL_TOL = 1e-10
ANTIPODAL_TOL = 1e-12


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str
    elapsed_s: float = 0.0


@dataclass(frozen=True)
class SuiteSettings:
    """
    Trial counts and Monte Carlo tolerance of one suite.
    """
    mc_tolerance: float
    gaussian_21_trials: int
    gaussian_32_trials: int
    goe_21_trials: int
    goe_31_trials: int
    bound_trials: int
    oracle_instances: int
    solver_instances: int
    invariance_instances: int
    basis_trials: int

    @classmethod
    def for_suite(cls, suite: str) -> "SuiteSettings":
        if suite == "full":
            return cls(0.10, 200_000, 100_000, 200_000, 100_000, 4_000, 200, 1_000, 50, 20_000)
        if suite == "quick":
            return cls(0.15, 20_000, 10_000, 20_000, 10_000, 500, 30, 200, 10, 4_000)
        raise ValueError(f"Unknown suite {suite!r}; choose from {SUITES}")


def _relative_error(value: float, target: float) -> float:
    return abs(value - target) / abs(target)


def _mc_check(
    name: str,
    spec: EnsembleSpec,
    trials: int,
    target: float,
    tolerance: float,
    seed: int,
    workers: Optional[int],
    bus: Optional[EventBus],
) -> CheckResult:
    report = run_experiment(ExperimentConfig(spec, trials, seed, workers=workers), bus)
    error = _relative_error(report.mom, target)
    passed = error <= tolerance and report.invalid_fraction <= MAX_INVALID_FRACTION
    return CheckResult(
        name=name,
        passed=passed,
        detail=(
            f"mom={report.mom:.6g} target={target:.6g} rel.err={error:.3%} "
            f"invalid={report.invalid_count}/{trials}"
        ),
    )


def check_unit_exactness(settings: SuiteSettings, seed: int, **_) -> CheckResult:
    spec = EnsembleSpec.gaussian(1, 1)
    worst = max(abs(run_trial(spec, seed, t).mu - 1.0) for t in range(100))
    exact = expected_mu_full_gaussian(1, 1).value
    passed = worst <= 1e-10 and abs(exact - 1.0) <= 1e-10
    return CheckResult("n=d=1 exactness", passed, f"max|mu-1|={worst:.2e}, closed form={exact!r}")


def _half_integer_gamma(k: int) -> float:
    """
    Gamma(k + 1/2) = (2k)! sqrt(pi) / (4^k k!).
    """
    return math.factorial(2 * k) * math.sqrt(math.pi) / (4 ** k * math.factorial(k))


def check_gaussian_21(settings: SuiteSettings, seed: int, workers=None, bus=None) -> CheckResult:
    return _mc_check(
        "Gaussian n=2 d=1", EnsembleSpec.gaussian(2, 1), settings.gaussian_21_trials,
        1.6 * math.pi, settings.mc_tolerance, seed, workers, bus,
    )


def check_gaussian_32(settings: SuiteSettings, seed: int, workers=None, bus=None) -> CheckResult:
    exact = expected_mu_full_gaussian(3, 2).value
    # pi * Gamma(27/2)/Gamma(13) * Gamma(2)/Gamma(3/2)
    by_hand = math.pi * _half_integer_gamma(13) / math.factorial(12) / _half_integer_gamma(1)
    if _relative_error(exact, by_hand) > IDENTITY_TOL:
        return CheckResult("Gaussian n=3 d=2", False, f"closed form {exact!r} != {by_hand!r}")
    return _mc_check(
        "Gaussian n=3 d=2", EnsembleSpec.gaussian(3, 2), settings.gaussian_32_trials,
        exact, settings.mc_tolerance, seed, workers, bus,
    )


def check_goe(settings: SuiteSettings, seed: int, workers=None, bus=None) -> CheckResult:
    even = expected_mu_goe(2, 1).value
    if _relative_error(even, expected_mu_goe_direct(2, 1).value) > IDENTITY_TOL:
        return CheckResult("GOE n=2,3 d=1", False, "even-n dual-path identity failed")
    first = _mc_check(
        "GOE n=2 d=1", EnsembleSpec.goe(2, 1), settings.goe_21_trials,
        8.0 * math.sqrt(2.0) / 3.0, settings.mc_tolerance, seed, workers, bus,
    )
    second = _mc_check(
        "GOE n=3 d=1", EnsembleSpec.goe(3, 1), settings.goe_31_trials,
        expected_mu_goe(3, 1).value, settings.mc_tolerance, seed, workers, bus,
    )
    return CheckResult(
        "GOE n=2,3 d=1", first.passed and second.passed, f"{first.detail}; {second.detail}"
    )


def check_universal_bound(
    settings: SuiteSettings, seed: int, workers=None, bus=None
) -> CheckResult:
    failures = []
    for spec_of in (EnsembleSpec.gaussian, EnsembleSpec.goe):
        for n in (1, 2, 3, 4):
            for d in (1, 2, 3):
                spec = spec_of(n, d)
                cfg = ExperimentConfig(spec, settings.bound_trials, seed, workers=workers)
                report = run_experiment(cfg, bus)
                limit = report.bound.value * (1.0 + IDENTITY_TOL) + 3.0 * report.stderr
                if report.mean > limit:
                    failures.append(
                        f"{spec.kind} n={n} d={d}: {report.mean:.4g} > {report.bound.value:.4g}"
                    )
                if report.invalid_fraction > MAX_INVALID_FRACTION:
                    failures.append(
                        f"{spec.kind} n={n} d={d}: invalid "
                        f"{report.invalid_count}/{settings.bound_trials}"
                    )
    detail = "; ".join(failures) if failures else "24 cells below bound + 3 stderr"
    return CheckResult("universal bound", not failures, detail)


def check_asymptotics(settings: SuiteSettings, seed: int, **_) -> CheckResult:
    grid = (8, 16, 32, 64)
    gauss = [
        expected_mu_full_gaussian(n, 1).value / asymptotic_full_gaussian(n, 1).value for n in grid
    ]
    goe = [expected_mu_goe(n, 1).value / asymptotic_goe(n, 1).value for n in grid]

    def improving(ratios):
        gaps = [abs(r - 1.0) for r in ratios]
        return all(b < a for a, b in zip(gaps, gaps[1:]))

    passed = (
        abs(gauss[1] - 1.0) <= 0.10 and improving(gauss)
        and abs(goe[1] - 1.0) <= 0.25 and improving(goe)
    )
    detail = (
        "gaussian " + ", ".join(f"{r:.4f}" for r in gauss)
        + "; goe " + ", ".join(f"{r:.4f}" for r in goe)
    )
    return CheckResult("asymptotics", passed, detail)


def _min_separation(points: List[ProjectivePoint]) -> float:
    if len(points) < 2:
        return math.pi / 2
    return min(
        points[i].angular_distance(points[j])
        for i in range(len(points)) for j in range(i + 1, len(points))
    )


def check_oracle(settings: SuiteSettings, seed: int, **_) -> CheckResult:
    checked, worst, skipped = 0, 0.0, 0
    stream = 0
    while checked < settings.oracle_instances and stream < 50 * settings.oracle_instances:
        n, d = 1 + stream % 4, 1 + (stream // 4) % 3
        mp = sample(EnsembleSpec.gaussian(n, d), RngKey(seed, stream))
        stream += 1
        roots = polynomial_eigenvalues(mp)
        if isinstance(roots, Degenerate) or not roots.roots:
            skipped += 1
            continue
        if _min_separation(roots.roots) < ORACLE_MIN_SEPARATION:
            skipped += 1
            continue
        records = [local_condition(mp, pt) for pt in roots.roots]
        if max(r.local_mu for r in records) > ORACLE_MAX_MU:
            skipped += 1
            continue
        try:
            for record in records:
                estimate_fd = finite_difference_condition(mp, record.point)
                worst = max(worst, _relative_error(estimate_fd, record.local_mu))
        except RootTrackingLost:
            skipped += 1
            continue
        checked += 1
    passed = checked >= settings.oracle_instances and worst <= ORACLE_TOL
    return CheckResult(
        "oracle equivalence", passed,
        f"{checked} instances, worst rel.err={worst:.2e}, skipped={skipped}",
    )


def check_solver(settings: SuiteSettings, seed: int, **_) -> CheckResult:
    problems = []
    for stream in range(settings.solver_instances):
        n, d = 1 + stream % 4, 1 + (stream // 4) % 3
        mp = sample(EnsembleSpec.gaussian(n, d), RngKey(seed + 1, stream))
        roots = polynomial_eigenvalues(mp)
        if isinstance(roots, Degenerate):
            problems.append(f"instance {stream}: degenerate")
            continue
        if roots.certified_count != len(roots.roots):
            problems.append(
                f"instance {stream}: certified {roots.certified_count} vs {len(roots.roots)}"
            )
        if len(roots.roots) > n * d:
            problems.append(f"instance {stream}: {len(roots.roots)} roots > nd={n * d}")
        if roots.residuals and max(roots.residuals) > RESIDUAL_TOL:
            problems.append(f"instance {stream}: residual {max(roots.residuals):.2e}")
    detail = f"{settings.solver_instances} instances certified"
    if problems:
        detail = "; ".join(problems[:5])
    return CheckResult("solver certification", not problems, detail)


def check_invariance(settings: SuiteSettings, seed: int, workers=None, **_) -> CheckResult:
    problems = []
    for stream in range(settings.invariance_instances):
        n, d = 1 + stream % 3, 1 + (stream // 3) % 3
        mp = sample(EnsembleSpec.gaussian(n, d), RngKey(seed + 2, stream))
        report = total_condition(mp)
        if report.degenerate or not report.records:
            continue
        rng = RngKey(seed + 3, stream).generator()
        u, v = random_orthogonal_matrix(n, rng), random_orthogonal_matrix(n, rng)
        scaled_mp = scale_coeffs(mp, 7.5)
        rotated_mp = orthogonal_transform(mp, u, v)
        for record in report.records:
            scaled = local_condition(scaled_mp, record.point).local_mu
            rotated = local_condition(rotated_mp, record.point).local_mu
            if _relative_error(scaled, record.local_mu) > SCALE_TOL:
                problems.append(f"scale {stream}")
            if _relative_error(rotated, record.local_mu) > ORTHOGONAL_TOL:
                problems.append(f"orthogonal {stream}")
            flipped = local_condition(mp, record.point.antipode()).local_mu
            if _relative_error(flipped, record.local_mu) > ANTIPODAL_TOL:
                problems.append(f"antipodal {stream}")

    spec = EnsembleSpec.gaussian(2, 1)
    basis = BinaryFormBasis.random_orthogonal(1, RngKey(seed + 4, 0).generator())
    plain = [run_trial(spec, seed + 5, t).mu for t in range(settings.basis_trials)]
    mapped = []
    for t in range(settings.basis_trials):
        try:
            mp = apply_coefficient_map(sample(spec, RngKey(seed + 6, t)), basis)
            mapped.append(total_condition(mp).total_mu)
        except Exception as e:
            logger.error(f"Basis-change trial {t} failed: {e}")
    a = estimate([x for x in plain if math.isfinite(x)])
    b = estimate([x for x in mapped if math.isfinite(x)])
    spread = 3.0 * math.hypot(a.stderr, b.stderr)
    if abs(a.mean - b.mean) > spread:
        problems.append(f"basis change {a.mean:.4g} vs {b.mean:.4g} (3se={spread:.3g})")
    detail = "; ".join(problems[:5]) if problems else f"basis change {a.mean:.4g} vs {b.mean:.4g}"
    return CheckResult("invariance", not problems, detail)


def check_identities(settings: SuiteSettings, seed: int, **_) -> CheckResult:
    problems = []
    for n in range(1, 9):
        for d in range(1, 5):
            direct = expected_mu_full_gaussian(n, d).value
            vol = vol_ratio_full(n).value
            composed = expected_mu_subspace(n * n, d, vol, allow_formal=True).value
            if _relative_error(composed, direct) > IDENTITY_TOL:
                problems.append(f"gaussian n={n} d={d}")
            if n % 2 == 0:
                goe = expected_mu_goe(n, d).value
                if _relative_error(goe, expected_mu_goe_direct(n, d).value) > IDENTITY_TOL:
                    problems.append(f"goe n={n} d={d}")
    for n in (4, 9, 16, 25, 36):
        envelope = abs(vol_ratio_sym(n).value * math.sqrt(math.pi) / (2.0 * math.sqrt(n)) - 1.0)
        if envelope > 0.5 / math.sqrt(n):
            problems.append(f"vol_ratio_sym n={n}")
    detail = "; ".join(problems) or "all identities hold"
    return CheckResult("closed-form identities", not problems, detail)


CHECKS: List[Callable[..., CheckResult]] = [
    check_unit_exactness,
    check_gaussian_21,
    check_gaussian_32,
    check_goe,
    check_universal_bound,
    check_asymptotics,
    check_oracle,
    check_solver,
    check_invariance,
    check_identities,
]


def run_suite(
    suite: str = "quick",
    seed: int = 20240601,
    workers: Optional[int] = None,
    bus: Optional[EventBus] = None,
) -> List[CheckResult]:
    """
    Run every acceptance check; a check that raises is reported as failed.
    """
    settings = SuiteSettings.for_suite(suite)
    results = []
    for check in CHECKS:
        started = time.perf_counter()
        try:
            result = check(settings, seed, workers=workers, bus=bus)
        except Exception as e:
            logger.error(f"Check {check.__name__} raised: {e}")
            result = CheckResult(check.__name__, False, f"{type(e).__name__}: {e}")
        elapsed = time.perf_counter() - started
        result = CheckResult(result.name, result.passed, result.detail, elapsed)
        logger.info(f"{result.name}: {'PASS' if result.passed else 'FAIL'} ({result.detail})")
        if bus is not None:
            bus.emit(EventType.CHECK_COMPLETED, "verify", name=result.name, passed=result.passed)
        results.append(result)
    return results


def results_table(results: List[CheckResult]) -> str:
    frame = pd.DataFrame(
        [
            {"check": r.name, "status": "PASS" if r.passed else "FAIL",
             "seconds": round(r.elapsed_s, 2), "detail": r.detail}
            for r in results
        ]
    )
    return frame.to_string(index=False)


def summary(results: List[CheckResult]) -> Dict[str, int]:
    passed = int(np.sum([r.passed for r in results]))
    return {"passed": passed, "failed": len(results) - passed}
