"""Monte Carlo experiment runner over SNR or angular-spread grids."""

import logging
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Callable, Dict, List, Optional, Tuple

import psutil

from beamforming import (
    BeamformerOptions, UncertaintyModel, algorithm1, optimal_sinr, output_sinr,
    plugin_beamformer, sinr_db
)
from config import ExperimentConfig
from decomposition import DecompositionFailure
from linalg import HermitianMatrix, MatrixDomainError, MatrixInputError
from scenario import Scenario, ScenarioError, simulate_snapshots, trial_seed
from solver import SolverFailure, SolverInputError, SolverNumericalError
from .csv_writer import summarize_records
from .models import CellStatus, ExperimentRun, ResultRecord

logger = logging.getLogger(__name__)

# Failures recorded as a failed cell instead of aborting the run.
CELL_ERRORS = (
    SolverFailure, SolverNumericalError, SolverInputError, DecompositionFailure,
    MatrixDomainError, MatrixInputError, ScenarioError
)


def default_workers() -> int:
    """Physical core count, falling back to 1."""
    return psutil.cpu_count(logical=False) or 1


def process_resources() -> Dict[str, float]:
    """Resident memory and CPU time of the current process."""
    proc = psutil.Process()
    times = proc.cpu_times()
    return {
        'rss_mb': proc.memory_info().rss / 1024 / 1024,
        'cpu_seconds': times.user + times.system
    }


class ExperimentRunner:
    """Runs every (grid point, trial, method) cell of an experiment."""

    def __init__(self, config: ExperimentConfig, opts: Optional[BeamformerOptions] = None,
                 workers: Optional[int] = None, timing: bool = False):
        """
        Initialize the runner.

        Args:
            config: Validated experiment configuration
            opts: Beamformer settings; the solver settings come from the config
            workers: Thread count for trials (defaults to the config, then physical cores)
            timing: Record wall_time_ms per cell
        """
        self.config = config
        base = opts or BeamformerOptions()
        # Trials are the unit of parallelism; branches inside algorithm1 run serially.
        self.opts = replace(base, solver=config.solver, workers=1)
        self.workers = workers or config.workers or default_workers()
        self.timing = timing

    def _scenarios(self) -> List[Tuple[float, Scenario]]:
        """Scenario per grid value with its covariances computed up front."""
        scenarios = []
        for value in self.config.grid:
            scenario = self.config.scenario_at(value)
            # cached_property is not thread safe; fill the caches before fanning out
            _ = (scenario.signal_covariance, scenario.interference_plus_noise,
                 scenario.presumed_signal_covariance, scenario.signal_rank)
            scenarios.append((value, scenario))
        return scenarios

    def _record(self, value: float, scenario: Scenario, trial: int, method: str,
                **fields) -> ResultRecord:
        return ResultRecord(
            experiment=self.config.name,
            grid=self.config.sweep.column,
            grid_value=float(value),
            rs_rank=scenario.signal_rank,
            trial=trial,
            method=method,
            **fields
        )

    def _method(self, method: str, R_hat: HermitianMatrix, scenario: Scenario,
                u: UncertaintyModel) -> Dict[str, object]:
        R_s = scenario.signal_covariance
        R_in = scenario.interference_plus_noise
        Rs_hat = scenario.presumed_signal_covariance

        if method == 'optimal':
            value, _ = optimal_sinr(R_s, R_in)
            return {'output_sinr_db': sinr_db(value)}

        if method == 'plugin':
            w = plugin_beamformer(R_hat, Rs_hat, u.gamma)
            return {'output_sinr_db': sinr_db(output_sinr(w, R_s, R_in))}

        w, diagnostics = algorithm1(R_hat, Rs_hat, u, self.opts)
        certificate = diagnostics.certificate
        applicable = certificate.applicable
        return {
            'output_sinr_db': sinr_db(output_sinr(w, R_s, R_in)),
            'relaxation_value': float(diagnostics.relaxation_value),
            'achieved_value': float(diagnostics.achieved_value),
            'rank_of_W': diagnostics.rank_of_W,
            'thm42': certificate.thm42_holds if applicable else None,
            'cor43': certificate.cor43_holds if applicable else None,
            'cor44': certificate.cor44_holds if applicable else None,
            'constructed': certificate.constructed_optimal
        }

    def run_trial(self, value: float, scenario: Scenario, trial: int) -> List[ResultRecord]:
        """All methods on one trial; every method sees the same sample covariance."""
        seed = trial_seed(self.config.base_seed, trial)
        R_hat = simulate_snapshots(scenario, self.config.snapshots, seed)
        u = UncertaintyModel.from_rules(
            R_hat, scenario.presumed_signal_covariance,
            self.config.gamma_rule.factor, self.config.eps_rule.factor
        )

        records = []
        for method in self.config.methods:
            start = time.perf_counter()
            try:
                fields = self._method(method, R_hat, scenario, u)
                record = self._record(value, scenario, trial, method, **fields)
            except CELL_ERRORS as e:
                logger.warning(f"Cell failed ({self.config.sweep.column}={value}, trial {trial}, {method}): {e}")
                record = self._record(value, scenario, trial, method,
                                      status=CellStatus.FAILED, error_message=str(e))
            if self.timing:
                record.wall_time_ms = (time.perf_counter() - start) * 1000.0
            records.append(record)
        return records

    def run(self, progress: Optional[Callable[[int, int], None]] = None) -> ExperimentRun:
        """
        Run the whole grid.

        Records come back in canonical (grid, trial, method) order regardless of
        the order in which trials finish.
        """
        scenarios = self._scenarios()
        tasks = [
            (index, trial) for index in range(len(scenarios)) for trial in range(self.config.trials)
        ]
        logger.info(
            f"Running '{self.config.name}': {len(tasks)} trials × {len(self.config.methods)} methods "
            f"on {self.workers} workers"
        )

        results: Dict[Tuple[int, int], List[ResultRecord]] = {}

        def execute(task: Tuple[int, int]) -> Tuple[Tuple[int, int], List[ResultRecord]]:
            index, trial = task
            value, scenario = scenarios[index]
            return task, self.run_trial(value, scenario, trial)

        if self.workers > 1 and len(tasks) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as executor:
                for done, (task, records) in enumerate(executor.map(execute, tasks), start=1):
                    results[task] = records
                    if progress:
                        progress(done, len(tasks))
        else:
            for done, task in enumerate(tasks, start=1):
                key, records = execute(task)
                results[key] = records
                if progress:
                    progress(done, len(tasks))

        run = ExperimentRun(experiment=self.config.name)
        for task in sorted(results):
            run.records.extend(results[task])
        run.failures = sum(1 for r in run.records if r.status is CellStatus.FAILED)
        run.summary = summarize_records(run.records)
        run.resources = process_resources()

        for value, scenario in scenarios:
            logger.info(
                f"Finished {self.config.sweep.column}={value} (rank R_s={scenario.signal_rank})"
            )
        logger.info(
            f"Experiment '{self.config.name}' done: {len(run.records)} records, "
            f"{run.failures} failed, RSS {run.resources['rss_mb']:.1f} MB, "
            f"CPU {run.resources['cpu_seconds']:.1f} s"
        )
        return run


def run_experiment(config: ExperimentConfig, opts: Optional[BeamformerOptions] = None,
                   workers: Optional[int] = None, timing: bool = False) -> ExperimentRun:
    """Convenience wrapper around ExperimentRunner.run."""
    return ExperimentRunner(config, opts, workers, timing).run()
