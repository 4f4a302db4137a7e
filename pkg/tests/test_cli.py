"""Tests for the command line interface."""

import csv
import io
import json
import os
import shutil
import tempfile
import unittest
from pathlib import Path
from unittest.mock import patch

from click.testing import CliRunner

from cli.commands import EXIT_INPUT, EXIT_SOLVER, main
from linalg import HermitianMatrix, frob_norm, save_matrix
from solver import SolverFailure, SolverNumericalError
from tests.fixtures.matrices import random_pd, random_psd, rng_for

SCENARIO_TEXT = """\
n_sensors = 4
grid_points = 201
signal.kind = gaussian
signal.central_deg = 30
signal.spread_deg = 4
interferer.1.kind = point
interferer.1.central_deg = -20
interferer.1.power_db = 20
presumed.kind = gaussian
presumed.central_deg = 32
presumed.spread_deg = 5
"""

EXPERIMENT_TEXT = """\
name = cli
scenario = scene.conf
sweep = snr
snr_grid_db = 0
trials = 1
snapshots = 20
base_seed = 2
"""


class CliTestCase(unittest.TestCase):
    """Writes matrix and experiment files into a temporary directory."""

    def setUp(self):
        self.test_dir = Path(tempfile.mkdtemp())
        self.runner = CliRunner()
        rng = rng_for(41)
        self.R_hat = random_pd(rng, 4)
        self.Rs_hat = random_psd(rng, 4, 2)
        self.r_path = self.test_dir / 'r_hat.txt'
        self.rs_path = self.test_dir / 'rs_hat.txt'
        save_matrix(self.R_hat, self.r_path)
        save_matrix(self.Rs_hat, self.rs_path)
        self.gamma = repr(0.1 * frob_norm(self.R_hat))
        self.eps = repr(0.3 * frob_norm(self.Rs_hat))
        env = {k: v for k, v in os.environ.items() if not k.startswith('QMIBF_')}
        self.env_patch = patch.dict(os.environ, env, clear=True)
        self.env_patch.start()

    def tearDown(self):
        self.env_patch.stop()
        shutil.rmtree(self.test_dir)

    def invoke(self, *args):
        return self.runner.invoke(main, [str(a) for a in args])

    def solve_args(self, *extra):
        return ['solve', self.r_path, self.rs_path, '--gamma', self.gamma, '--eps', self.eps, *extra]


class TestSolveCommand(CliTestCase):

    def test_text_report(self):
        result = self.invoke(*self.solve_args())
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn('relaxation_value = ', result.stdout)

    def test_json_report(self):
        result = self.invoke(*self.solve_args('--json'))
        self.assertEqual(result.exit_code, 0, result.output)
        data = json.loads(result.stdout)
        self.assertEqual(len(data['w']), 4)
        self.assertEqual(data['R_hat'].splitlines()[0], '4')

    def test_missing_matrix_file(self):
        result = self.invoke('solve', self.test_dir / 'absent.txt', self.rs_path,
                             '--gamma', '1', '--eps', '1')
        self.assertEqual(result.exit_code, EXIT_INPUT)
        self.assertIn('✗', result.stderr)

    def test_non_positive_radius(self):
        result = self.invoke('solve', self.r_path, self.rs_path, '--gamma', '1', '--eps=0')
        self.assertEqual(result.exit_code, EXIT_INPUT)

    def test_dimension_mismatch(self):
        small = self.test_dir / 'small.txt'
        save_matrix(HermitianMatrix.identity(3), small)
        result = self.invoke('solve', self.r_path, small, '--gamma', '1', '--eps', '1')
        self.assertEqual(result.exit_code, EXIT_INPUT)

    def test_solver_failure_exit_code(self):
        failure = SolverFailure(message='did not converge', iterations=200)
        with patch('cli.commands.run_single', side_effect=failure):
            result = self.invoke(*self.solve_args())
        self.assertEqual(result.exit_code, EXIT_SOLVER)
        self.assertIn('did not converge', result.stderr)

    def test_numerical_breakdown_exit_code(self):
        breakdown = SolverNumericalError(message='non-finite Newton direction', iterations=12)
        with patch('cli.commands.run_single', side_effect=breakdown):
            result = self.invoke(*self.solve_args())
        self.assertEqual(result.exit_code, EXIT_SOLVER)
        self.assertIn('Numerical breakdown', result.stderr)

    def test_linear_algebra_fault_is_not_an_input_error(self):
        """A ValueError from inside the engine exits as a solver failure."""
        fault = ValueError('array must not contain infs or NaNs')
        with patch('solver.relaxation.PrimalDualSolver.solve', side_effect=fault):
            result = self.invoke(*self.solve_args())
        self.assertEqual(result.exit_code, EXIT_SOLVER)
        self.assertIn('infs or NaNs', result.stderr)


class TestCertifyCommand(CliTestCase):

    def save_solution(self) -> Path:
        path = self.test_dir / 'solution.json'
        result = self.invoke(*self.solve_args('--save', path))
        self.assertEqual(result.exit_code, 0, result.output)
        return path

    def test_saved_solution_certifies(self):
        path = self.save_solution()
        result = self.invoke('certify', path, '--json')
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertTrue(json.loads(result.stdout)['ok'])

    def test_tampered_solution(self):
        path = self.save_solution()
        stored = json.loads(path.read_text())
        stored['diagnostics']['achieved_value'] = stored['diagnostics']['achieved_value'] * 2.0 + 1.0
        path.write_text(json.dumps(stored))
        result = self.invoke('certify', path)
        self.assertEqual(result.exit_code, EXIT_SOLVER)

    def test_corrupt_solution_file(self):
        path = self.test_dir / 'broken.json'
        path.write_text('{ not json')
        result = self.invoke('certify', path)
        self.assertEqual(result.exit_code, EXIT_INPUT)

    def test_missing_solution_file(self):
        result = self.invoke('certify', self.test_dir / 'absent.json')
        self.assertEqual(result.exit_code, EXIT_INPUT)


class TestExperimentCommand(CliTestCase):

    def setUp(self):
        super().setUp()
        (self.test_dir / 'scene.conf').write_text(SCENARIO_TEXT)
        self.config_path = self.test_dir / 'cli.conf'
        self.config_path.write_text(EXPERIMENT_TEXT)

    def test_writes_records_and_summary(self):
        out = self.test_dir / 'run.csv'
        result = self.invoke('experiment', '--config', self.config_path, '--out', out)
        self.assertEqual(result.exit_code, 0, result.output)
        self.assertIn('✓ 3 records written', result.stderr)
        rows = list(csv.DictReader(io.StringIO(out.read_text())))
        self.assertEqual([row['method'] for row in rows], ['algorithm1', 'plugin', 'optimal'])
        self.assertTrue(all(row['status'] == 'ok' for row in rows))
        summary = list(csv.DictReader(io.StringIO((self.test_dir / 'run.csv.summary.csv').read_text())))
        self.assertEqual(len(summary), 3)
        self.assertTrue(all(row['count'] == '1' for row in summary))

    def test_stdout_output(self):
        result = self.invoke('experiment', '--config', self.config_path)
        self.assertEqual(result.exit_code, 0, result.output)
        records, summary = result.stdout.split('\n\n')
        self.assertEqual(len(records.splitlines()), 4)
        self.assertTrue(summary.startswith('experiment,'))

    def test_seed_option_is_reproducible(self):
        first = self.invoke('experiment', '--config', self.config_path, '--seed', '9')
        second = self.invoke('experiment', '--config', self.config_path, '--seed', '9')
        self.assertEqual(first.exit_code, 0, first.output)
        self.assertEqual(first.stdout, second.stdout)

    def test_invalid_config(self):
        self.config_path.write_text(EXPERIMENT_TEXT.replace('trials = 1', 'trials = zero'))
        result = self.invoke('experiment', '--config', self.config_path)
        self.assertEqual(result.exit_code, EXIT_INPUT)
        self.assertIn('cli.conf', result.stderr)

    def test_missing_config(self):
        result = self.invoke('experiment', '--config', self.test_dir / 'absent.conf')
        self.assertEqual(result.exit_code, EXIT_INPUT)


if __name__ == '__main__':
    unittest.main()
