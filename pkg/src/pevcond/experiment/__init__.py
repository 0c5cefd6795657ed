# Monte Carlo harness, acceptance suite and command line

from pevcond.experiment.config import (
    ConfigError,
    ExperimentConfig,
    SweepGrid,
    resolve_workers,
)

from pevcond.experiment.estimators import (
    EmptyInput,
    Estimates,
    estimate,
    median_of_means,
    trimmed_mean,
)

from pevcond.experiment.report import (
    TrialResult,
    McReport,
    to_json,
    write_json,
    write_raw_samples,
    write_table,
)

from pevcond.experiment.harness import (
    closed_forms_for,
    run_trial,
    run_trials,
    run_experiment,
    sweep,
)

from pevcond.experiment.verify import (
    CheckResult,
    SuiteSettings,
    run_suite,
)

__all__ = [
    # Configuration
    'ConfigError',
    'ExperimentConfig',
    'SweepGrid',
    'resolve_workers',

    # Estimators
    'EmptyInput',
    'Estimates',
    'estimate',
    'median_of_means',
    'trimmed_mean',

    # Reports
    'TrialResult',
    'McReport',
    'to_json',
    'write_json',
    'write_raw_samples',
    'write_table',

    # Harness
    'closed_forms_for',
    'run_trial',
    'run_trials',
    'run_experiment',
    'sweep',

    # Acceptance suite
    'CheckResult',
    'SuiteSettings',
    'run_suite',
]
