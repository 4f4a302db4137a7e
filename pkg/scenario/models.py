"""Data models for the simulated array environment."""

from dataclasses import dataclass, replace
from functools import cached_property
from typing import Any, Dict, Optional, Tuple

import numpy as np

from decomposition import numeric_rank
from linalg import HermitianMatrix
from .errors import ScenarioError

DENSITY_KINDS = ('gaussian', 'uniform', 'truncated_laplacian', 'point')

# Gaussian support is truncated at this many standard deviations.
GAUSSIAN_SUPPORT_SPREADS = 4.0
FLUCTUATION_KNOTS = 16
DEFAULT_GRID_POINTS = 2001
# Eigenvalues above this fraction of λ₁ count toward the rank of a synthesized R_s.
# With a uniform density of half-width s over the spread grid 0.15° .. 30° the ranks
# are 2 .. 10 for any threshold in about [4e-9, 2.4e-8].
SIGNAL_RANK_TOL = 1e-8


def db_to_power(db: float) -> float:
    return 10.0 ** (db / 10.0)


@dataclass(frozen=True)
class ArrayGeometry:
    """Uniform linear array of omnidirectional sensors."""
    n_sensors: int = 10
    spacing_wavelengths: float = 0.5

    def __post_init__(self):
        if int(self.n_sensors) != self.n_sensors or self.n_sensors < 1:
            raise ScenarioError('n_sensors', self.n_sensors, 'must be a positive integer')
        if not self.spacing_wavelengths > 0.0:
            raise ScenarioError('spacing_wavelengths', self.spacing_wavelengths, 'must be positive')


@dataclass(frozen=True)
class AngularDensity:
    """Angular power density of an incoherently scattered source.

    `spread_deg` is the standard deviation for gaussian and the half-width for
    uniform. For truncated_laplacian, `scale` is the Laplacian scale in radians and
    `support_deg` is required; `fluctuation` is the log-amplitude of a seeded random
    ripple multiplying the density.
    """
    kind: str
    central_angle_deg: float
    spread_deg: float = 0.0
    scale: float = 0.0
    support_deg: Optional[Tuple[float, float]] = None
    fluctuation: float = 0.0
    fluctuation_seed: int = 0

    def __post_init__(self):
        if self.kind not in DENSITY_KINDS:
            raise ScenarioError('kind', self.kind, f"must be one of {', '.join(DENSITY_KINDS)}")
        if not -90.0 <= self.central_angle_deg <= 90.0:
            raise ScenarioError('central_angle_deg', self.central_angle_deg, 'must lie in [-90, 90]')
        if self.kind in ('gaussian', 'uniform') and not self.spread_deg > 0.0:
            raise ScenarioError('spread_deg', self.spread_deg, f"{self.kind} density needs a positive spread")
        if self.kind == 'truncated_laplacian':
            if not self.scale > 0.0:
                raise ScenarioError('scale', self.scale, 'Laplacian scale must be positive')
            if self.support_deg is None:
                raise ScenarioError('support_deg', None, 'truncated Laplacian needs an explicit support')
        if self.fluctuation < 0.0:
            raise ScenarioError('fluctuation', self.fluctuation, 'must be nonnegative')
        if self.support_deg is not None:
            object.__setattr__(self, 'support_deg', tuple(float(x) for x in self.support_deg))

    @classmethod
    def gaussian(cls, central_deg: float, spread_deg: float) -> 'AngularDensity':
        return cls('gaussian', central_deg, spread_deg=spread_deg)

    @classmethod
    def uniform(cls, central_deg: float, half_width_deg: float) -> 'AngularDensity':
        return cls('uniform', central_deg, spread_deg=half_width_deg)

    @classmethod
    def truncated_laplacian(cls, central_deg: float, scale: float, support_deg: Tuple[float, float],
                            fluctuation: float = 0.0, seed: int = 0) -> 'AngularDensity':
        return cls('truncated_laplacian', central_deg, scale=scale, support_deg=support_deg,
                   fluctuation=fluctuation, fluctuation_seed=seed)

    @classmethod
    def point(cls, angle_deg: float) -> 'AngularDensity':
        return cls('point', angle_deg)

    def support(self) -> Tuple[float, float]:
        """Closed angular interval in degrees, clipped to [−90°, 90°]."""
        c = self.central_angle_deg
        if self.kind == 'point':
            return c, c
        if self.support_deg is not None:
            lo, hi = self.support_deg
        elif self.kind == 'gaussian':
            lo, hi = c - GAUSSIAN_SUPPORT_SPREADS * self.spread_deg, c + GAUSSIAN_SUPPORT_SPREADS * self.spread_deg
        else:
            lo, hi = c - self.spread_deg, c + self.spread_deg
        lo, hi = max(-90.0, lo), min(90.0, hi)
        if not hi > lo:
            raise ScenarioError('support_deg', (lo, hi), 'angular support is empty')
        return lo, hi

    def evaluate(self, theta_deg: np.ndarray) -> np.ndarray:
        """Unnormalized density values on a grid inside the support."""
        theta = np.asarray(theta_deg, dtype=float)
        c = self.central_angle_deg
        if self.kind == 'gaussian':
            values = np.exp(-0.5 * ((theta - c) / self.spread_deg) ** 2)
        elif self.kind == 'uniform':
            values = np.ones_like(theta)
        elif self.kind == 'truncated_laplacian':
            values = np.exp(-np.abs(np.radians(theta - c)) / self.scale)
        else:
            values = (theta == c).astype(float)
        if self.fluctuation > 0.0:
            values = values * self._ripple(theta)
        return values

    def _ripple(self, theta: np.ndarray) -> np.ndarray:
        lo, hi = self.support()
        rng = np.random.Generator(np.random.Philox(self.fluctuation_seed))
        knots = np.linspace(lo, hi, FLUCTUATION_KNOTS)
        log_gain = self.fluctuation * rng.standard_normal(FLUCTUATION_KNOTS)
        return np.exp(np.interp(theta, knots, log_gain))

    def with_spread(self, spread_deg: float) -> 'AngularDensity':
        return replace(self, spread_deg=spread_deg)

    def to_dict(self) -> Dict[str, Any]:
        data = {'kind': self.kind, 'central_deg': self.central_angle_deg}
        if self.kind in ('gaussian', 'uniform'):
            data['spread_deg'] = self.spread_deg
        if self.kind == 'truncated_laplacian':
            data['scale'] = self.scale
        if self.support_deg is not None:
            data['support_deg'] = list(self.support_deg)
        if self.fluctuation > 0.0:
            data['fluctuation'] = self.fluctuation
            data['fluctuation_seed'] = self.fluctuation_seed
        return data


@dataclass(frozen=True)
class SourceSpec:
    """A scattered source: angular density plus power in dB (relative to unit noise)."""
    density: AngularDensity
    power_db: float

    @property
    def power(self) -> float:
        return db_to_power(self.power_db)


@dataclass(frozen=True)
class Scenario:
    """Signal, interferers and noise seen by the array.

    The presumed signal covariance uses `presumed_signal` with the actual signal power.
    Covariances are computed on first access and cached.
    """
    geometry: ArrayGeometry
    signal: Optional[SourceSpec]
    interferers: Tuple[SourceSpec, ...] = ()
    noise_power_db: float = 0.0
    presumed_signal: Optional[AngularDensity] = None
    grid_points: int = DEFAULT_GRID_POINTS

    def __post_init__(self):
        object.__setattr__(self, 'interferers', tuple(self.interferers))
        if self.grid_points < 2:
            raise ScenarioError('grid_points', self.grid_points, 'must be at least 2')

    @property
    def n_sensors(self) -> int:
        return self.geometry.n_sensors

    @property
    def noise_power(self) -> float:
        return db_to_power(self.noise_power_db)

    def _covariance(self, density: AngularDensity, power_db: float) -> HermitianMatrix:
        from .array import scattered_covariance
        return scattered_covariance(density, power_db, self.geometry, self.grid_points)

    @cached_property
    def signal_covariance(self) -> HermitianMatrix:
        if self.signal is None:
            return HermitianMatrix.zeros(self.n_sensors)
        return self._covariance(self.signal.density, self.signal.power_db)

    @cached_property
    def interference_covariance(self) -> HermitianMatrix:
        total = np.zeros((self.n_sensors, self.n_sensors), dtype=np.complex128)
        for source in self.interferers:
            total = total + self._covariance(source.density, source.power_db).data
        return HermitianMatrix(total)

    @cached_property
    def interference_plus_noise(self) -> HermitianMatrix:
        return self.interference_covariance + self.noise_power * HermitianMatrix.identity(self.n_sensors)

    @cached_property
    def presumed_signal_covariance(self) -> HermitianMatrix:
        if self.signal is None:
            return HermitianMatrix.zeros(self.n_sensors)
        density = self.presumed_signal or self.signal.density
        return self._covariance(density, self.signal.power_db)

    @cached_property
    def signal_rank(self) -> int:
        return numeric_rank(self.signal_covariance, SIGNAL_RANK_TOL)

    def with_signal_power_db(self, power_db: float) -> 'Scenario':
        if self.signal is None:
            raise ScenarioError('signal', None, 'scenario has no signal source')
        return replace(self, signal=replace(self.signal, power_db=power_db))

    def with_signal_spread(self, spread_deg: float) -> 'Scenario':
        """Same scenario with the actual signal density widened or narrowed."""
        if self.signal is None:
            raise ScenarioError('signal', None, 'scenario has no signal source')
        density = self.signal.density.with_spread(spread_deg)
        return replace(self, signal=replace(self.signal, density=density))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n_sensors': self.geometry.n_sensors,
            'spacing_wavelengths': self.geometry.spacing_wavelengths,
            'signal': None if self.signal is None else {
                **self.signal.density.to_dict(), 'power_db': self.signal.power_db
            },
            'interferers': [
                {**s.density.to_dict(), 'power_db': s.power_db} for s in self.interferers
            ],
            'noise_power_db': self.noise_power_db,
            'presumed_signal': None if self.presumed_signal is None else self.presumed_signal.to_dict(),
            'grid_points': self.grid_points
        }


@dataclass
class SnapshotStreams:
    """Independent signal, interference and noise snapshot matrices (N × T)."""
    signal: np.ndarray
    interference: np.ndarray
    noise: np.ndarray

    @property
    def total(self) -> np.ndarray:
        return self.signal + self.interference + self.noise

    @property
    def n_snapshots(self) -> int:
        return self.noise.shape[1]
