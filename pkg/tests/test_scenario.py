"""Tests for array geometry, scattered-source covariances and snapshot simulation."""

import math
import unittest

import numpy as np

from decomposition import numeric_rank
from linalg import HermitianMatrix, frob_norm, is_psd
from scenario import (
    SIGNAL_RANK_TOL, AngularDensity, ArrayGeometry, Scenario, ScenarioError, SourceSpec,
    generate_streams, quadrature_weights, sample_covariance, scattered_covariance,
    simulate_snapshots, steering_vector, trial_seed
)

SPREAD_GRID = [0.15, 1.0, 2.0, 5.0, 9.0, 14.0, 20.0, 25.0, 30.0]


def reference_scenario(grid_points=2001):
    return Scenario(
        geometry=ArrayGeometry(10, 0.5),
        signal=SourceSpec(AngularDensity.gaussian(30.0, 4.0), 0.0),
        interferers=(SourceSpec(AngularDensity.uniform(10.0, 10.0), 30.0),),
        noise_power_db=0.0,
        presumed_signal=AngularDensity.gaussian(34.0, 6.0),
        grid_points=grid_points
    )


class TestSteering(unittest.TestCase):
    """ULA response vectors."""

    def test_broadside_is_all_ones(self):
        np.testing.assert_allclose(steering_vector(0.0), np.ones(10), atol=1e-15)

    def test_thirty_degrees_at_half_wavelength(self):
        """Entry n equals jⁿ."""
        a = steering_vector(30.0, ArrayGeometry(6, 0.5))
        np.testing.assert_allclose(a, 1j ** np.arange(6), atol=1e-12)

    def test_unit_modulus(self):
        for theta in (-90.0, -41.0, 7.5, 63.0, 90.0):
            a = steering_vector(theta, ArrayGeometry(7, 0.5))
            self.assertAlmostEqual(float(np.vdot(a, a).real), 7.0, places=12)

    def test_out_of_range_angle(self):
        with self.assertRaises(ScenarioError):
            steering_vector(91.0)

    def test_geometry_validation(self):
        with self.assertRaises(ScenarioError):
            ArrayGeometry(0, 0.5)
        with self.assertRaises(ScenarioError):
            ArrayGeometry(4, 0.0)


class TestQuadrature(unittest.TestCase):

    def test_simpson_for_odd_counts(self):
        np.testing.assert_array_equal(quadrature_weights(5), [1, 4, 2, 4, 1])

    def test_trapezoid_for_even_counts(self):
        np.testing.assert_array_equal(quadrature_weights(4), [1, 2, 2, 1])

    def test_too_few_nodes(self):
        with self.assertRaises(ScenarioError):
            quadrature_weights(1)


class TestAngularDensity(unittest.TestCase):
    """Density kinds and their supports."""

    def test_gaussian_support_is_four_spreads(self):
        self.assertEqual(AngularDensity.gaussian(30.0, 4.0).support(), (14.0, 46.0))

    def test_uniform_spread_is_half_width(self):
        self.assertEqual(AngularDensity.uniform(10.0, 10.0).support(), (0.0, 20.0))

    def test_support_clipped_to_visible_region(self):
        self.assertEqual(AngularDensity.gaussian(80.0, 5.0).support(), (60.0, 90.0))

    def test_laplacian_peaks_at_centre(self):
        density = AngularDensity.truncated_laplacian(30.0, 0.1, (15.0, 45.0))
        values = density.evaluate(np.array([15.0, 30.0, 45.0]))
        self.assertEqual(values[1], 1.0)
        self.assertLess(values[0], values[1])
        self.assertAlmostEqual(values[0], values[2], places=14)

    def test_fluctuation_is_seeded(self):
        grid = np.linspace(15.0, 45.0, 31)
        first = AngularDensity.truncated_laplacian(30.0, 0.1, (15.0, 45.0), 0.5, seed=7).evaluate(grid)
        second = AngularDensity.truncated_laplacian(30.0, 0.1, (15.0, 45.0), 0.5, seed=7).evaluate(grid)
        other = AngularDensity.truncated_laplacian(30.0, 0.1, (15.0, 45.0), 0.5, seed=8).evaluate(grid)
        np.testing.assert_array_equal(first, second)
        self.assertFalse(np.array_equal(first, other))

    def test_invalid_parameters(self):
        with self.assertRaises(ScenarioError):
            AngularDensity('cauchy', 0.0, 1.0)
        with self.assertRaises(ScenarioError):
            AngularDensity.gaussian(30.0, 0.0)
        with self.assertRaises(ScenarioError):
            AngularDensity('truncated_laplacian', 30.0, scale=0.1)
        with self.assertRaises(ScenarioError):
            AngularDensity.gaussian(95.0, 1.0)


class TestScatteredCovariance(unittest.TestCase):
    """Discretized scattering integrals."""

    def test_point_source_is_rank_one(self):
        geom = ArrayGeometry(8, 0.5)
        R = scattered_covariance(AngularDensity.point(20.0), 3.0, geom)
        a = steering_vector(20.0, geom)
        np.testing.assert_allclose(R.data, 10 ** 0.3 * np.outer(a, a.conj()), atol=1e-12)
        self.assertEqual(numeric_rank(R), 1)

    def test_trace_equals_power_times_sensors(self):
        geom = ArrayGeometry(10, 0.5)
        densities = [
            AngularDensity.gaussian(30.0, 4.0),
            AngularDensity.uniform(10.0, 10.0),
            AngularDensity.truncated_laplacian(30.0, 0.1, (15.0, 45.0), 0.5, seed=7),
            AngularDensity.point(-20.0)
        ]
        for density in densities:
            R = scattered_covariance(density, 20.0, geom)
            self.assertAlmostEqual(R.trace(), 100.0 * 10, delta=1e-8 * 1000.0)
            self.assertTrue(is_psd(R, 1e-10))

    def test_rank_grows_with_spread(self):
        """Uniform densities of half-width 0.15° .. 30° give ranks 2, 3, .., 10."""
        geom = ArrayGeometry(10, 0.5)
        ranks = [
            numeric_rank(scattered_covariance(AngularDensity.uniform(30.0, s), 0.0, geom), SIGNAL_RANK_TOL)
            for s in SPREAD_GRID
        ]
        self.assertEqual(ranks, list(range(2, 11)))

    def test_spread_scenario_ranks(self):
        """The spread sweep scenario reports the same rank sequence through signal_rank."""
        scenario = Scenario(ArrayGeometry(10, 0.5), SourceSpec(AngularDensity.uniform(30.0, 4.0), 10.0))
        self.assertEqual([scenario.with_signal_spread(s).signal_rank for s in SPREAD_GRID], list(range(2, 11)))

    def test_grid_refinement(self):
        """Doubling the grid moves the covariance by less than 1e-6 relative."""
        geom = ArrayGeometry(10, 0.5)
        for density in (AngularDensity.gaussian(30.0, 4.0), AngularDensity.uniform(10.0, 10.0),
                        AngularDensity.truncated_laplacian(30.0, 0.1, (15.0, 45.0))):
            coarse = scattered_covariance(density, 0.0, geom, 2001)
            fine = scattered_covariance(density, 0.0, geom, 4001)
            self.assertLessEqual(frob_norm(coarse - fine) / frob_norm(fine), 1e-6)


class TestScenario(unittest.TestCase):
    """Derived covariances of a full scenario."""

    def test_reference_scenario_covariances(self):
        scenario = reference_scenario()
        self.assertAlmostEqual(scenario.signal_covariance.trace(), 10.0, delta=1e-8)
        self.assertAlmostEqual(scenario.interference_covariance.trace(), 1e4, delta=1e-4)
        self.assertAlmostEqual(scenario.interference_plus_noise.trace(), 1e4 + 10.0, delta=1e-4)
        self.assertAlmostEqual(scenario.presumed_signal_covariance.trace(), 10.0, delta=1e-8)
        for matrix in (scenario.signal_covariance, scenario.interference_plus_noise,
                       scenario.presumed_signal_covariance):
            self.assertTrue(is_psd(matrix, 1e-10))

    def test_presumed_covariance_differs_from_actual(self):
        scenario = reference_scenario()
        self.assertGreater(frob_norm(scenario.signal_covariance - scenario.presumed_signal_covariance), 0.1)

    def test_signal_power_and_spread_updates(self):
        scenario = reference_scenario()
        louder = scenario.with_signal_power_db(10.0)
        self.assertAlmostEqual(louder.signal_covariance.trace(), 100.0, delta=1e-6)
        self.assertAlmostEqual(louder.presumed_signal_covariance.trace(), 100.0, delta=1e-6)
        wider = scenario.with_signal_spread(20.0)
        self.assertEqual(wider.signal.density.spread_deg, 20.0)
        self.assertGreater(wider.signal_rank, scenario.signal_rank)

    def test_missing_signal(self):
        scenario = Scenario(ArrayGeometry(4, 0.5), None)
        self.assertEqual(frob_norm(scenario.signal_covariance), 0.0)
        with self.assertRaises(ScenarioError):
            scenario.with_signal_power_db(0.0)

    def test_to_dict(self):
        data = reference_scenario().to_dict()
        self.assertEqual(data['n_sensors'], 10)
        self.assertEqual(data['interferers'][0]['kind'], 'uniform')
        self.assertEqual(data['presumed_signal']['central_deg'], 34.0)


class TestSnapshots(unittest.TestCase):
    """Seeded snapshot generation."""

    def test_same_seed_same_matrix(self):
        scenario = reference_scenario(grid_points=401)
        first = simulate_snapshots(scenario, 50, 3)
        second = simulate_snapshots(scenario, 50, 3)
        self.assertTrue(np.array_equal(first.data, second.data))
        self.assertFalse(np.array_equal(first.data, simulate_snapshots(scenario, 50, 4).data))

    def test_trial_seed(self):
        self.assertEqual(trial_seed(5, 3), 8)

    def test_invalid_snapshot_count(self):
        with self.assertRaises(ScenarioError):
            simulate_snapshots(reference_scenario(grid_points=401), 0, 1)

    def test_sample_covariance_is_psd(self):
        R_hat = simulate_snapshots(reference_scenario(grid_points=401), 5, 9)
        self.assertTrue(is_psd(R_hat, 1e-10))

    def test_noise_only_converges_to_identity(self):
        scenario = Scenario(ArrayGeometry(10, 0.5), None)
        R_hat = simulate_snapshots(scenario, 100000, 11)
        self.assertLessEqual(frob_norm(R_hat - HermitianMatrix.identity(10)) / math.sqrt(10.0), 0.05)

    def test_expected_trace(self):
        """The mean of tr(R̂) over seeds matches tr(R_s) + tr(R_i+n)."""
        scenario = Scenario(
            geometry=ArrayGeometry(4, 0.5),
            signal=SourceSpec(AngularDensity.gaussian(20.0, 3.0), 5.0),
            interferers=(SourceSpec(AngularDensity.point(-30.0), 10.0),),
            grid_points=401
        )
        expected = scenario.signal_covariance.trace() + scenario.interference_plus_noise.trace()
        traces = np.array([simulate_snapshots(scenario, 20, seed).trace() for seed in range(100)])
        standard_error = float(np.std(traces, ddof=1)) / math.sqrt(traces.size)
        self.assertLessEqual(abs(float(np.mean(traces)) - expected), 4.0 * standard_error)

    def test_streams_are_uncorrelated(self):
        scenario = Scenario(
            geometry=ArrayGeometry(4, 0.5),
            signal=SourceSpec(AngularDensity.gaussian(20.0, 3.0), 0.0),
            interferers=(SourceSpec(AngularDensity.uniform(-30.0, 5.0), 10.0),),
            grid_points=401
        )
        T = 20000
        streams = generate_streams(scenario, T, 12)
        self.assertEqual(streams.n_snapshots, T)
        cross = streams.signal @ streams.interference.conj().T / T
        bound = 5.0 * math.sqrt(scenario.signal_covariance.trace()
                                * scenario.interference_covariance.trace() / T)
        self.assertLessEqual(float(np.linalg.norm(cross)), bound)
        np.testing.assert_allclose(sample_covariance(streams.total).data,
                                   simulate_snapshots(scenario, T, 12).data, atol=1e-12)


if __name__ == '__main__':
    unittest.main()
