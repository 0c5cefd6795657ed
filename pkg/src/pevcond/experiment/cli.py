"""Command line interface: solve, expect, mc, sweep and verify."""

import json
import logging
import sys
from pathlib import Path
from typing import Optional

import click
import numpy as np

from pevcond.conditioning.condition import total_condition
from pevcond.core.event_system import EventBus, InvalidTrialCounter, LoggingListener
from pevcond.core.matpoly import MatrixPolynomial, PevcondError
from pevcond.ensembles.sampler import EnsembleKind, EnsembleSpec
from pevcond.experiment.config import ExperimentConfig, SweepGrid
from pevcond.experiment.harness import closed_forms_for, run_experiment, sweep
from pevcond.experiment.report import to_json, write_json, write_table
from pevcond.experiment.verify import SUITES, results_table, run_suite, summary


logger = logging.getLogger(__name__)

LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]


def _load_json(path: str):
    try:
        return json.loads(Path(path).read_text())
    except (OSError, ValueError) as e:
        raise click.ClickException(f"Cannot read {path}: {e}")


def _event_bus() -> EventBus:
    bus = EventBus()
    bus.register_listener(LoggingListener())
    return bus


@click.group()
@click.option(
    "--log-level",
    type=click.Choice(LOG_LEVELS, case_sensitive=False),
    default="WARNING",
    show_default=True,
    help="Logging threshold.",
)
def main(log_level: str):
    """Real polynomial eigenvalues, their condition numbers and expected condition numbers."""
    logging.basicConfig(
        level=getattr(logging, log_level.upper()),
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )


@main.command()
@click.option("--input", "input_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Matrix polynomial JSON {\"n\", \"d\", \"matrices\"}.")
@click.option("--output", "output_path", default=None, type=click.Path(dir_okay=False),
              help="Write the result here instead of stdout.")
def solve(input_path: str, output_path: Optional[str]):
    """Real eigenvalues of a matrix polynomial with their condition numbers."""
    try:
        mp = MatrixPolynomial.from_dict(_load_json(input_path))
        report = total_condition(mp)
    except PevcondError as e:
        raise click.ClickException(str(e))
    data = report.to_dict()
    if output_path:
        write_json(output_path, data)
    else:
        click.echo(to_json(data), nl=False)


@main.command()
@click.option("--ensemble", type=click.Choice(["gaussian", "goe"]), required=True)
@click.option("--n", type=click.IntRange(min=1), required=True, help="Matrix dimension.")
@click.option("--d", type=click.IntRange(min=1), required=True, help="Degree.")
@click.option("--json", "as_json", is_flag=True, help="Print JSON instead of text.")
def expect(ensemble: str, n: int, d: int, as_json: bool):
    """Exact expectation, asymptotic and universal bound of the total condition number."""
    exact, asymptotic, bound = closed_forms_for(EnsembleSpec(EnsembleKind(ensemble), n, d))
    if as_json:
        click.echo(to_json({
            "ensemble": ensemble,
            "n": n,
            "d": d,
            "exact": exact.to_dict(),
            "asymptotic": asymptotic.to_dict(),
            "bound": bound.to_dict(),
        }), nl=False)
        return
    click.echo(f"exact       {exact.value:.17g}  ({exact.formula_id})")
    click.echo(f"asymptotic  {asymptotic.value:.17g}  ({asymptotic.formula_id})")
    click.echo(f"bound       {bound.value:.17g}  ({bound.formula_id})")


@main.command()
@click.option("--ensemble", type=click.Choice([str(kind) for kind in EnsembleKind]), required=True)
@click.option("--n", type=click.IntRange(min=1), required=True, help="Matrix dimension.")
@click.option("--d", type=click.IntRange(min=1), required=True, help="Degree.")
@click.option("--trials", type=click.IntRange(min=1), required=True)
@click.option("--seed", type=int, required=True)
@click.option("--mom-blocks", type=click.IntRange(min=1), default=None,
              help="Median-of-means blocks [default: ceil(sqrt(trials))].")
@click.option("--trim", type=float, default=0.01, show_default=True, help="Trimmed-mean fraction.")
@click.option("--workers", type=click.IntRange(min=1), default=None,
              help="Worker processes; PEVCOND_WORKERS overrides.")
@click.option("--out", "out_path", default=None, type=click.Path(dir_okay=False),
              help="Report JSON.")
@click.option("--raw", "raw_path", default=None, type=click.Path(dir_okay=False),
              help="Per-trial CSV.")
@click.option("--basis", "basis_path", default=None, type=click.Path(exists=True, dir_okay=False),
              help="Subspace basis JSON, a list of k orthonormal n x n matrices.")
@click.option("--vol-ratio", type=float, default=None, help="Volume ratio of a subspace ensemble.")
def mc(ensemble, n, d, trials, seed, mom_blocks, trim, workers,
       out_path, raw_path, basis_path, vol_ratio):
    """Monte Carlo estimate of the expected total condition number."""
    bus = _event_bus()
    counter = InvalidTrialCounter()
    bus.register_listener(counter)
    try:
        kind = EnsembleKind(ensemble)
        if kind is EnsembleKind.SUBSPACE:
            basis = np.array(_load_json(basis_path), dtype=float) if basis_path else None
            spec = EnsembleSpec.subspace(n, d, basis)
        else:
            if basis_path:
                raise click.BadParameter("--basis is only used with --ensemble subspace")
            spec = EnsembleSpec(kind, n, d)
        cfg = ExperimentConfig(
            spec=spec, trials=trials, seed=seed, mom_blocks=mom_blocks, trim=trim,
            workers=workers, vol_ratio=vol_ratio,
        )
        report = run_experiment(cfg, bus=bus, raw_path=raw_path)
    except (PevcondError, ValueError) as e:
        raise click.ClickException(str(e))
    data = report.to_dict()
    if out_path:
        write_json(out_path, data)
    else:
        click.echo(to_json(data), nl=False)
    if counter.count:
        click.echo(f"{counter.count} invalid trials, first: {counter.messages[0]}", err=True)


@main.command("sweep")
@click.option("--grid", "grid_path", required=True, type=click.Path(exists=True, dir_okay=False),
              help="Grid JSON {\"ensembles\", \"n\", \"d\", \"trials\", \"seed\"}.")
@click.option("--out", "out_path", required=True, type=click.Path(dir_okay=False),
              help="CSV table.")
def sweep_command(grid_path: str, out_path: str):
    """One Monte Carlo run per grid cell, written as a CSV table."""
    try:
        grid = SweepGrid.from_dict(_load_json(grid_path))
    except PevcondError as e:
        raise click.ClickException(str(e))
    table = sweep(grid, bus=_event_bus())
    write_table(out_path, table)
    click.echo(f"{len(table)} rows written to {out_path}")


@main.command()
@click.option("--suite", type=click.Choice(list(SUITES)), default="quick", show_default=True)
@click.option("--seed", type=int, default=20240601, show_default=True)
@click.option("--workers", type=click.IntRange(min=1), default=None,
              help="Worker processes; PEVCOND_WORKERS overrides.")
def verify(suite: str, seed: int, workers: Optional[int]):
    """Run the acceptance suite; exit status 0 iff every check passes."""
    results = run_suite(suite, seed=seed, workers=workers, bus=_event_bus())
    click.echo(results_table(results))
    counts = summary(results)
    click.echo(f"{counts['passed']} passed, {counts['failed']} failed")
    sys.exit(0 if counts["failed"] == 0 else 1)


if __name__ == "__main__":
    main()
