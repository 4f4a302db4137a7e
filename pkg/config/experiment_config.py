"""Configuration models for scenarios and Monte Carlo experiments."""

import re
from dataclasses import dataclass, field, asdict
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

from scenario import AngularDensity, ArrayGeometry, Scenario, SourceSpec, DEFAULT_GRID_POINTS
from solver import SolverOptions


class SweepKind(Enum):
    """Grid swept by an experiment."""
    SNR = "snr"
    SPREAD = "spread"

    @property
    def column(self) -> str:
        return 'snr_db' if self is SweepKind.SNR else 'spread_deg'


METHODS = ('algorithm1', 'plugin', 'optimal')

# "<factor>" or "<factor> * norm(<matrix>)"
RULE_PATTERN = re.compile(
    r'^\s*(?P<factor>[-+]?(\d+(\.\d*)?|\.\d+)([eE][-+]?\d+)?)\s*(\*\s*norm\(\s*(?P<matrix>\w+)\s*\))?\s*$'
)


@dataclass
class ScalingRule:
    """Uncertainty radius as a multiple of a Frobenius norm: factor·‖matrix‖."""
    factor: float
    matrix: str

    @classmethod
    def parse(cls, text: str, default_matrix: str) -> 'ScalingRule':
        match = RULE_PATTERN.match(text)
        if not match:
            raise ValueError(f"expected '<factor> * norm({default_matrix})', got '{text}'")
        matrix = match.group('matrix') or default_matrix
        if matrix != default_matrix:
            raise ValueError(f"rule must scale norm({default_matrix}), not norm({matrix})")
        return cls(factor=float(match.group('factor')), matrix=matrix)

    def __str__(self):
        return f"{self.factor!r} * norm({self.matrix})"


@dataclass
class DensityConfig:
    """Angular density fields as read from a scenario file."""
    kind: str
    central_deg: float
    spread_deg: float = 0.0
    scale: float = 0.0
    support_deg: Optional[Tuple[float, float]] = None
    fluctuation: float = 0.0
    fluctuation_seed: int = 0

    def to_density(self) -> AngularDensity:
        return AngularDensity(
            kind=self.kind,
            central_angle_deg=self.central_deg,
            spread_deg=self.spread_deg,
            scale=self.scale,
            support_deg=self.support_deg,
            fluctuation=self.fluctuation,
            fluctuation_seed=self.fluctuation_seed
        )

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        if self.support_deg is not None:
            data['support_deg'] = list(self.support_deg)
        return data

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'DensityConfig':
        support = data.get('support_deg')
        return cls(
            kind=data['kind'],
            central_deg=float(data['central_deg']),
            spread_deg=float(data.get('spread_deg', 0.0)),
            scale=float(data.get('scale', 0.0)),
            support_deg=tuple(support) if support is not None else None,
            fluctuation=float(data.get('fluctuation', 0.0)),
            fluctuation_seed=int(data.get('fluctuation_seed', 0))
        )


@dataclass
class SourceConfig:
    density: DensityConfig
    power_db: float

    def to_source(self) -> SourceSpec:
        return SourceSpec(density=self.density.to_density(), power_db=self.power_db)

    def to_dict(self) -> Dict[str, Any]:
        return {**self.density.to_dict(), 'power_db': self.power_db}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'SourceConfig':
        return cls(density=DensityConfig.from_dict(data), power_db=float(data['power_db']))


@dataclass
class ScenarioConfig:
    """Array, sources and noise of a simulated environment."""
    signal: SourceConfig
    interferers: List[SourceConfig] = field(default_factory=list)
    presumed_signal: Optional[DensityConfig] = None
    n_sensors: int = 10
    spacing_wavelengths: float = 0.5
    noise_power_db: float = 0.0
    grid_points: int = DEFAULT_GRID_POINTS
    source_path: Optional[str] = None

    def to_scenario(self) -> Scenario:
        return Scenario(
            geometry=ArrayGeometry(self.n_sensors, self.spacing_wavelengths),
            signal=self.signal.to_source(),
            interferers=tuple(s.to_source() for s in self.interferers),
            noise_power_db=self.noise_power_db,
            presumed_signal=self.presumed_signal.to_density() if self.presumed_signal else None,
            grid_points=self.grid_points
        )

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n_sensors': self.n_sensors,
            'spacing_wavelengths': self.spacing_wavelengths,
            'noise_power_db': self.noise_power_db,
            'grid_points': self.grid_points,
            'signal': self.signal.to_dict(),
            'interferers': [s.to_dict() for s in self.interferers],
            'presumed_signal': self.presumed_signal.to_dict() if self.presumed_signal else None
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ScenarioConfig':
        presumed = data.get('presumed_signal')
        return cls(
            signal=SourceConfig.from_dict(data['signal']),
            interferers=[SourceConfig.from_dict(s) for s in data.get('interferers', [])],
            presumed_signal=DensityConfig.from_dict(presumed) if presumed else None,
            n_sensors=int(data.get('n_sensors', 10)),
            spacing_wavelengths=float(data.get('spacing_wavelengths', 0.5)),
            noise_power_db=float(data.get('noise_power_db', 0.0)),
            grid_points=int(data.get('grid_points', DEFAULT_GRID_POINTS))
        )


@dataclass
class ExperimentConfig:
    """Monte Carlo sweep over SNR or signal angular spread."""
    name: str
    scenario: ScenarioConfig
    sweep: SweepKind = SweepKind.SNR
    snr_grid_db: List[float] = field(default_factory=lambda: [-10.0, 0.0, 10.0])
    spread_grid_deg: List[float] = field(default_factory=list)
    snr_db: float = 10.0
    trials: int = 20
    full_scale_trials: int = 100
    snapshots: int = 50
    gamma_rule: ScalingRule = field(default_factory=lambda: ScalingRule(0.1, 'R_hat'))
    eps_rule: ScalingRule = field(default_factory=lambda: ScalingRule(0.3, 'Rs_hat'))
    base_seed: int = 0
    methods: List[str] = field(default_factory=lambda: list(METHODS))
    workers: Optional[int] = None
    solver: SolverOptions = field(default_factory=SolverOptions)
    scenario_path: Optional[str] = None
    source_path: Optional[str] = None

    @property
    def grid(self) -> List[float]:
        return list(self.snr_grid_db if self.sweep is SweepKind.SNR else self.spread_grid_deg)

    def scenario_at(self, value: float) -> Scenario:
        """Scenario for one grid point of the sweep."""
        base = self.scenario.to_scenario()
        if self.sweep is SweepKind.SNR:
            return base.with_signal_power_db(value)
        return base.with_signal_power_db(self.snr_db).with_signal_spread(value)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'name': self.name,
            'scenario': self.scenario.to_dict(),
            'scenario_path': self.scenario_path,
            'sweep': self.sweep.value,
            'snr_grid_db': list(self.snr_grid_db),
            'spread_grid_deg': list(self.spread_grid_deg),
            'snr_db': self.snr_db,
            'trials': self.trials,
            'full_scale_trials': self.full_scale_trials,
            'snapshots': self.snapshots,
            'gamma_rule': str(self.gamma_rule),
            'eps_rule': str(self.eps_rule),
            'base_seed': self.base_seed,
            'methods': list(self.methods),
            'workers': self.workers,
            'solver': self.solver.to_dict()
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> 'ExperimentConfig':
        return cls(
            name=data['name'],
            scenario=ScenarioConfig.from_dict(data['scenario']),
            scenario_path=data.get('scenario_path'),
            sweep=SweepKind(data.get('sweep', 'snr')),
            snr_grid_db=[float(x) for x in data.get('snr_grid_db', [-10.0, 0.0, 10.0])],
            spread_grid_deg=[float(x) for x in data.get('spread_grid_deg', [])],
            snr_db=float(data.get('snr_db', 10.0)),
            trials=int(data.get('trials', 20)),
            full_scale_trials=int(data.get('full_scale_trials', 100)),
            snapshots=int(data.get('snapshots', 50)),
            gamma_rule=ScalingRule.parse(data.get('gamma_rule', '0.1'), 'R_hat'),
            eps_rule=ScalingRule.parse(data.get('eps_rule', '0.3'), 'Rs_hat'),
            base_seed=int(data.get('base_seed', 0)),
            methods=list(data.get('methods', METHODS)),
            workers=data.get('workers'),
            solver=SolverOptions.from_dict(data.get('solver', {}))
        )
