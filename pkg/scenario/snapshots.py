"""Snapshot generation and sample covariance estimation."""

import logging

import numpy as np

from linalg import HermitianMatrix, sqrt_psd
from .errors import ScenarioError
from .models import Scenario, SnapshotStreams

logger = logging.getLogger(__name__)


def make_rng(seed: int) -> np.random.Generator:
    """Counter-based Philox generator; one per call, no global state."""
    return np.random.Generator(np.random.Philox(int(seed)))


def trial_seed(base_seed: int, trial: int) -> int:
    return int(base_seed) + int(trial)


def _circular_gaussian(rng: np.random.Generator, n: int, count: int) -> np.ndarray:
    """Unit-variance circular complex Gaussian samples (n × count)."""
    return (rng.standard_normal((n, count)) + 1j * rng.standard_normal((n, count))) / np.sqrt(2.0)


def _colored(rng: np.random.Generator, covariance: HermitianMatrix, count: int) -> np.ndarray:
    root = sqrt_psd(covariance).data
    return root @ _circular_gaussian(rng, covariance.dim, count)


def generate_streams(scenario: Scenario, T: int, seed: int) -> SnapshotStreams:
    """
    Draw independent signal, interference and noise snapshots.

    Each stream is R^(1/2) times a circular complex Gaussian matrix; the draws happen
    in the fixed order signal, interference, noise from one Philox generator.

    Raises:
        ScenarioError: If T < 1
    """
    if int(T) != T or T < 1:
        raise ScenarioError('T', T, 'number of snapshots must be a positive integer')
    rng = make_rng(seed)
    signal = _colored(rng, scenario.signal_covariance, T)
    interference = _colored(rng, scenario.interference_covariance, T)
    noise = np.sqrt(scenario.noise_power) * _circular_gaussian(rng, scenario.n_sensors, T)
    return SnapshotStreams(signal=signal, interference=interference, noise=noise)


def sample_covariance(snapshots: np.ndarray) -> HermitianMatrix:
    """(1/T)·Σ y(t)y(t)ᴴ over the columns of an N × T snapshot matrix."""
    count = snapshots.shape[1]
    return HermitianMatrix(snapshots @ snapshots.conj().T / count)


def simulate_snapshots(scenario: Scenario, T: int, seed: int) -> HermitianMatrix:
    """Sample covariance of T snapshots y(t) = s(t) + i(t) + n(t); deterministic per seed."""
    streams = generate_streams(scenario, T, seed)
    R_hat = sample_covariance(streams.total)
    logger.debug(f"Simulated {T} snapshots with seed {seed}")
    return R_hat
