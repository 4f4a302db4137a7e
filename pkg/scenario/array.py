"""Steering vectors and scattered-source covariances for a uniform linear array."""

import logging
from typing import Optional

import numpy as np

from linalg import HermitianMatrix
from .errors import ScenarioError
from .models import AngularDensity, ArrayGeometry, DEFAULT_GRID_POINTS, db_to_power

logger = logging.getLogger(__name__)


def steering_vector(theta_deg: float, geom: Optional[ArrayGeometry] = None) -> np.ndarray:
    """
    ULA response a(θ) with entries exp(j·2π·spacing·n·sin θ), n = 0..N−1.

    Raises:
        ScenarioError: If |θ| > 90°
    """
    geom = geom or ArrayGeometry()
    if not -90.0 <= theta_deg <= 90.0:
        raise ScenarioError('theta_deg', theta_deg, 'angle must lie in [-90, 90] degrees')
    return steering_matrix(np.array([theta_deg]), geom)[:, 0]


def steering_matrix(theta_deg: np.ndarray, geom: ArrayGeometry) -> np.ndarray:
    """Steering vectors for a grid of angles, one column per angle (N × G)."""
    n = np.arange(geom.n_sensors)[:, None]
    phase = 2.0 * np.pi * geom.spacing_wavelengths * n * np.sin(np.radians(theta_deg))[None, :]
    return np.exp(1j * phase)


def quadrature_weights(count: int) -> np.ndarray:
    """Composite Simpson weights for an odd node count, trapezoid weights otherwise."""
    if count < 2:
        raise ScenarioError('grid_points', count, 'must be at least 2')
    weights = np.ones(count)
    if count % 2 == 1 and count >= 3:
        weights[1:-1:2] = 4.0
        weights[2:-1:2] = 2.0
    else:
        weights[1:-1] = 2.0
    return weights


def scattered_covariance(density: AngularDensity, power_db: float,
                         geom: Optional[ArrayGeometry] = None,
                         grid_points: int = DEFAULT_GRID_POINTS) -> HermitianMatrix:
    """
    Covariance σ²·∫ρ(θ) a(θ)a(θ)ᴴ dθ of an incoherently scattered source.

    The integral is discretized on a uniform grid over the density support with
    weights renormalized to unit mass, so tr(R) = σ²·N.

    Raises:
        ScenarioError: On an empty support or a density with no mass on the grid
    """
    geom = geom or ArrayGeometry()
    power = db_to_power(power_db)
    if density.kind == 'point':
        a = steering_vector(density.central_angle_deg, geom)
        return HermitianMatrix(power * np.outer(a, a.conj()))

    lo, hi = density.support()
    grid = np.linspace(lo, hi, grid_points)
    weights = density.evaluate(grid) * quadrature_weights(grid_points)
    mass = float(np.sum(weights))
    if not mass > 0.0:
        raise ScenarioError('density', density.kind, 'density has no mass on its support')
    weights = weights / mass

    steering = steering_matrix(grid, geom)
    covariance = (steering * weights) @ steering.conj().T
    logger.debug(f"Scattered covariance ({density.kind}, centre {density.central_angle_deg}°) on {grid_points} nodes")
    return HermitianMatrix(power * covariance)
