"""Command line interface: single solves, experiments and re-certification."""

import json
import logging
import sys
from dataclasses import replace
from pathlib import Path
from typing import Optional

import click

from beamforming import BeamformerOptions
from bench import certify_stored, records_to_csv, run_experiment, run_single, summary_to_csv
from config import ConfigError, ConfigurationService, atomic_write
from decomposition import DecompositionFailure
from linalg import MatrixDomainError, MatrixInputError, load_matrix
from scenario import ScenarioError
from solver import SolverFailure, SolverInputError, SolverNumericalError

logger = logging.getLogger(__name__)

EXIT_INPUT = 2
EXIT_SOLVER = 3

INPUT_ERRORS = (
    ConfigError, MatrixInputError, MatrixDomainError, ScenarioError, SolverInputError, ValueError
)
SOLVER_ERRORS = (SolverNumericalError, SolverFailure, DecompositionFailure)

LOG_FORMAT = '%(asctime)s - %(levelname)s - %(message)s'
FILE_LOG_FORMAT = '%(asctime)s - %(name)s - %(levelname)s - %(message)s'


def fail(message: str, code: int) -> None:
    click.echo(f"✗ {message}", err=True)
    sys.exit(code)


def setup_logging(verbose: bool, log_file: Optional[str]) -> None:
    """Console logging on stderr; optional file log of the solver at DEBUG."""
    level = logging.DEBUG if verbose else logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT, force=True)

    if log_file:
        handler = logging.FileHandler(log_file, encoding='utf-8')
        handler.setLevel(logging.DEBUG)
        handler.setFormatter(logging.Formatter(FILE_LOG_FORMAT))
        solver_logger = logging.getLogger('solver')
        solver_logger.setLevel(logging.DEBUG)
        solver_logger.addHandler(handler)


def _options(workers: Optional[int], max_iterations: Optional[int]) -> BeamformerOptions:
    opts = BeamformerOptions()
    if workers:
        opts = replace(opts, workers=workers)
    if max_iterations:
        opts = replace(opts, solver=replace(opts.solver, max_iterations=max_iterations))
    return opts


@click.group()
@click.option('--verbose', '-v', is_flag=True, help='Log debug messages to stderr')
@click.option('--log-file', type=click.Path(dir_okay=False), help='Write a solver iteration log to this file')
def main(verbose: bool, log_file: Optional[str]):
    """Worst-case robust adaptive beamforming for general-rank signals."""
    setup_logging(verbose, log_file)


@main.command()
@click.argument('r_hat', type=click.Path(dir_okay=False))
@click.argument('rs_hat', type=click.Path(dir_okay=False))
@click.option('--gamma', type=float, required=True, help='Radius of the interference-plus-noise uncertainty')
@click.option('--eps', type=float, required=True, help='Radius of the signal covariance uncertainty')
@click.option('--workers', type=click.IntRange(min=1), help='Threads for the per-branch inner problems')
@click.option('--max-iterations', type=click.IntRange(min=1), help='Interior-point iteration cap')
@click.option('--json', 'as_json', is_flag=True, help='Print the report as JSON')
@click.option('--save', type=click.Path(dir_okay=False), help='Store the solution for `certify`')
def solve(r_hat: str, rs_hat: str, gamma: float, eps: float, workers: Optional[int],
          max_iterations: Optional[int], as_json: bool, save: Optional[str]):
    """Robust beamformer for the sample covariance R_HAT and presumed signal covariance RS_HAT."""
    try:
        report = run_single(load_matrix(r_hat), load_matrix(rs_hat), gamma, eps,
                            _options(workers, max_iterations))
    except INPUT_ERRORS as e:
        fail(str(e), EXIT_INPUT)
    except SOLVER_ERRORS as e:
        fail(str(e), EXIT_SOLVER)

    if save:
        ConfigurationService().solution_store(save).save(report.to_dict())
        logger.info(f"Solution stored in {save}")

    if as_json:
        click.echo(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        for line in report.to_lines():
            click.echo(line)


@main.command()
@click.option('--config', 'config_path', type=click.Path(dir_okay=False), required=True,
              help='Experiment file')
@click.option('--seed', type=click.IntRange(min=0), help='Base seed (trial k uses seed + k)')
@click.option('--trials', type=click.IntRange(min=1), help='Trials per grid point')
@click.option('--out', type=click.Path(dir_okay=False), help='CSV file (default: stdout)')
@click.option('--full-scale', is_flag=True, help='Use the full-scale trial count of the experiment')
@click.option('--workers', type=click.IntRange(min=1), help='Threads running trials')
@click.option('--timing', is_flag=True, help='Add a wall_time_ms column')
def experiment(config_path: str, seed: Optional[int], trials: Optional[int], out: Optional[str],
               full_scale: bool, workers: Optional[int], timing: bool):
    """Monte Carlo sweep writing one CSV row per (grid point, trial, method)."""
    service = ConfigurationService()
    try:
        config = service.load_experiment(
            config_path, full_scale=full_scale, trials=trials, base_seed=seed, workers=workers
        )
        run = run_experiment(config, timing=timing)
    except INPUT_ERRORS as e:
        fail(str(e), EXIT_INPUT)
    except SOLVER_ERRORS as e:
        fail(str(e), EXIT_SOLVER)

    records = records_to_csv(run.records, timing=timing)
    summary = summary_to_csv(run.summary)
    if out:
        atomic_write(out, records)
        summary_path = Path(out).with_name(Path(out).name + '.summary.csv')
        atomic_write(summary_path, summary)
        click.echo(f"✓ {len(run.records)} records written to {out} (summary: {summary_path})", err=True)
    else:
        click.echo(records, nl=False)
        click.echo('')
        click.echo(summary, nl=False)

    if run.failures:
        click.echo(f"✗ {run.failures} cells failed; see the status column", err=True)


@main.command()
@click.argument('solution', type=click.Path(dir_okay=False))
@click.option('--json', 'as_json', is_flag=True, help='Print the report as JSON')
def certify(solution: str, as_json: bool):
    """Re-check the KKT residuals and certificates of a stored SOLUTION."""
    try:
        report = certify_stored(ConfigurationService().solution_store(solution).load())
    except INPUT_ERRORS as e:
        fail(str(e), EXIT_INPUT)
    except SOLVER_ERRORS as e:
        fail(str(e), EXIT_SOLVER)

    if as_json:
        click.echo(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        for line in report.to_lines():
            click.echo(line)
    if not report.ok:
        sys.exit(EXIT_SOLVER)


if __name__ == '__main__':
    main()
