"""Configuration management for scenarios, experiments and stored solutions."""

from .errors import ConfigError
from .experiment_config import (
    METHODS,
    SweepKind,
    ScalingRule,
    DensityConfig,
    SourceConfig,
    ScenarioConfig,
    ExperimentConfig
)
from .config_storage import (
    SolutionStore,
    atomic_write,
    parse_key_values,
    load_scenario_config,
    load_experiment_config
)
from .config_validator import ConfigValidator
from .config_service import ConfigurationService, apply_env_overrides

__all__ = [
    'ConfigError',
    'METHODS',
    'SweepKind',
    'ScalingRule',
    'DensityConfig',
    'SourceConfig',
    'ScenarioConfig',
    'ExperimentConfig',
    'SolutionStore',
    'atomic_write',
    'parse_key_values',
    'load_scenario_config',
    'load_experiment_config',
    'ConfigValidator',
    'ConfigurationService',
    'apply_env_overrides'
]
