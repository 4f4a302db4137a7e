"""Uniform linear array scenarios with incoherently scattered sources."""

from .errors import ScenarioError
from .models import (
    ArrayGeometry,
    AngularDensity,
    SourceSpec,
    Scenario,
    SnapshotStreams,
    DENSITY_KINDS,
    DEFAULT_GRID_POINTS,
    SIGNAL_RANK_TOL,
    db_to_power
)
from .array import steering_vector, steering_matrix, quadrature_weights, scattered_covariance
from .snapshots import (
    make_rng,
    trial_seed,
    generate_streams,
    sample_covariance,
    simulate_snapshots
)

__all__ = [
    'ScenarioError',
    'ArrayGeometry',
    'AngularDensity',
    'SourceSpec',
    'Scenario',
    'SnapshotStreams',
    'DENSITY_KINDS',
    'DEFAULT_GRID_POINTS',
    'SIGNAL_RANK_TOL',
    'db_to_power',
    'steering_vector',
    'steering_matrix',
    'quadrature_weights',
    'scattered_covariance',
    'make_rng',
    'trial_seed',
    'generate_streams',
    'sample_covariance',
    'simulate_snapshots'
]
