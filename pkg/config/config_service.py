"""Main configuration management service."""

import logging
import os
from dataclasses import replace
from pathlib import Path
from typing import Any, Dict, Optional, Union

from .config_storage import SolutionStore, load_experiment_config, load_scenario_config
from .config_validator import ConfigValidator
from .experiment_config import ExperimentConfig, ScenarioConfig

logger = logging.getLogger(__name__)

ENV_PREFIX = 'QMIBF_'


def _positive_int(name: str, text: str, minimum: int = 1) -> int:
    try:
        value = int(text)
        if value < minimum:
            raise ValueError(f"must be an integer >= {minimum}")
        return value
    except ValueError as e:
        raise ValueError(f"Invalid value for {name}: '{text}'. {e}") from e


def apply_env_overrides(config: ExperimentConfig,
                        environ: Optional[Dict[str, str]] = None) -> ExperimentConfig:
    """
    Apply environment variable overrides to an experiment configuration.

    Environment variables:
    - QMIBF_TRIALS: Override trial count
    - QMIBF_BASE_SEED: Override base seed
    - QMIBF_WORKERS: Override worker count
    - QMIBF_MAX_ITERATIONS: Override the solver iteration cap

    Raises:
        ValueError: If environment variable values are invalid
    """
    environ = os.environ if environ is None else environ

    if trials := environ.get(f'{ENV_PREFIX}TRIALS'):
        config = replace(config, trials=_positive_int(f'{ENV_PREFIX}TRIALS', trials))

    if seed := environ.get(f'{ENV_PREFIX}BASE_SEED'):
        config = replace(config, base_seed=_positive_int(f'{ENV_PREFIX}BASE_SEED', seed, minimum=0))

    if workers := environ.get(f'{ENV_PREFIX}WORKERS'):
        config = replace(config, workers=_positive_int(f'{ENV_PREFIX}WORKERS', workers))

    if iterations := environ.get(f'{ENV_PREFIX}MAX_ITERATIONS'):
        cap = _positive_int(f'{ENV_PREFIX}MAX_ITERATIONS', iterations)
        config = replace(config, solver=replace(config.solver, max_iterations=cap))

    return config


class ConfigurationService:
    """High-level configuration API used by the command line."""

    def __init__(self, environ: Optional[Dict[str, str]] = None):
        """
        Initialize configuration service.

        Args:
            environ: Environment mapping for overrides (defaults to os.environ)
        """
        self.environ = os.environ if environ is None else environ
        self.validator = ConfigValidator()

    def load_scenario(self, path: Union[str, Path]) -> ScenarioConfig:
        """
        Load and validate a scenario file.

        Raises:
            ConfigError: If the file does not parse
            ValueError: If the scenario is invalid
        """
        config = load_scenario_config(path)
        is_valid, errors = self.validator.validate_scenario(config)
        if not is_valid:
            raise ValueError(f"Invalid configuration: {', '.join(errors)}")
        return config

    def load_experiment(self, path: Union[str, Path], full_scale: bool = False,
                        **overrides: Any) -> ExperimentConfig:
        """
        Load an experiment with overrides applied in order file < environment < arguments.

        Args:
            path: Experiment file
            full_scale: Use full_scale_trials instead of trials
            **overrides: Non-None values for trials, base_seed or workers

        Raises:
            ConfigError: If a file does not parse
            ValueError: If an override or the final configuration is invalid
        """
        config = load_experiment_config(path)
        if full_scale:
            config = replace(config, trials=config.full_scale_trials)
        config = apply_env_overrides(config, self.environ)

        updates = {key: value for key, value in overrides.items() if value is not None}
        unknown = set(updates) - {'trials', 'base_seed', 'workers'}
        if unknown:
            raise ValueError(f"Unknown overrides: {', '.join(sorted(unknown))}")
        if updates:
            config = replace(config, **updates)

        is_valid, errors = self.validator.validate_experiment(config)
        if not is_valid:
            raise ValueError(f"Invalid configuration: {', '.join(errors)}")

        logger.info(
            f"Experiment '{config.name}': {config.sweep.value} sweep over {len(config.grid)} points, "
            f"{config.trials} trials, methods {', '.join(config.methods)}"
        )
        return config

    def solution_store(self, path: Union[str, Path]) -> SolutionStore:
        return SolutionStore(path)
