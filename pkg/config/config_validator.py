"""Configuration validation."""

from typing import List, Tuple

from scenario import DENSITY_KINDS, ScenarioError
from .experiment_config import METHODS, DensityConfig, ExperimentConfig, ScenarioConfig, SweepKind


class ConfigValidator:
    """Validates scenario and experiment configurations."""

    MAX_SENSORS = 64
    MAX_TRIALS = 100000

    def validate_scenario(self, config: ScenarioConfig) -> Tuple[bool, List[str]]:
        """
        Validate a scenario configuration.

        Args:
            config: Configuration to validate

        Returns:
            Tuple of (is_valid, list_of_errors)
        """
        errors = []

        if config.n_sensors < 1:
            errors.append("n_sensors must be positive")
        elif config.n_sensors > self.MAX_SENSORS:
            errors.append(f"n_sensors too large (max {self.MAX_SENSORS})")
        if config.spacing_wavelengths <= 0:
            errors.append("spacing_wavelengths must be positive")
        if config.grid_points < 2:
            errors.append("grid_points must be at least 2")

        errors.extend(self._validate_density('signal', config.signal.density))
        for index, source in enumerate(config.interferers, start=1):
            errors.extend(self._validate_density(f'interferer.{index}', source.density))
        if config.presumed_signal is not None:
            errors.extend(self._validate_density('presumed', config.presumed_signal))

        # Angular support, spread and kind checks that need a built density
        if not errors:
            try:
                config.to_scenario()
            except ScenarioError as e:
                errors.append(str(e))

        return len(errors) == 0, errors

    def _validate_density(self, prefix: str, density: DensityConfig) -> List[str]:
        errors = []
        if density.kind not in DENSITY_KINDS:
            errors.append(f"{prefix}.kind must be one of {', '.join(DENSITY_KINDS)}, got '{density.kind}'")
            return errors
        if not -90.0 <= density.central_deg <= 90.0:
            errors.append(f"{prefix}.central_deg must lie in [-90, 90]")
        if density.kind in ('gaussian', 'uniform') and density.spread_deg <= 0:
            errors.append(f"{prefix}.spread_deg must be positive for a {density.kind} density")
        if density.kind == 'truncated_laplacian':
            if density.scale <= 0:
                errors.append(f"{prefix}.scale must be positive")
            if density.support_deg is None:
                errors.append(f"{prefix}.support_deg is required for a truncated Laplacian")
        if density.support_deg is not None and density.support_deg[0] >= density.support_deg[1]:
            errors.append(f"{prefix}.support_deg must be an increasing pair")
        if density.fluctuation < 0:
            errors.append(f"{prefix}.fluctuation cannot be negative")
        return errors

    def validate_experiment(self, config: ExperimentConfig) -> Tuple[bool, List[str]]:
        """
        Validate an experiment configuration, including its scenario.

        Returns:
            Tuple of (is_valid, list_of_errors)
        """
        errors = []

        if not config.name or not config.name.strip():
            errors.append("Experiment name cannot be empty")
        if config.trials < 1:
            errors.append("trials must be at least 1")
        elif config.trials > self.MAX_TRIALS:
            errors.append(f"trials too large (max {self.MAX_TRIALS})")
        if config.full_scale_trials < 1:
            errors.append("full_scale_trials must be at least 1")
        if config.snapshots < 1:
            errors.append("snapshots must be at least 1")
        if config.workers is not None and config.workers < 1:
            errors.append("workers must be at least 1")
        if config.base_seed < 0:
            errors.append("base_seed cannot be negative")

        if not config.grid:
            errors.append(f"{config.sweep.value} sweep needs a nonempty {config.sweep.column} grid")
        if config.sweep is SweepKind.SPREAD:
            kind = config.scenario.signal.density.kind
            if kind not in ('gaussian', 'uniform'):
                errors.append(f"spread sweep needs a gaussian or uniform signal, got '{kind}'")
            if any(value <= 0 for value in config.spread_grid_deg):
                errors.append("spread_grid_deg values must be positive")

        if config.gamma_rule.factor <= 0:
            errors.append("gamma_rule factor must be positive")
        if config.eps_rule.factor <= 0:
            errors.append("eps_rule factor must be positive")

        if not config.methods:
            errors.append("methods cannot be empty")
        seen = set()
        for method in config.methods:
            if method not in METHODS:
                errors.append(f"Unknown method: {method} (expected one of {', '.join(METHODS)})")
            elif method in seen:
                errors.append(f"Duplicate method: {method}")
            seen.add(method)

        if config.solver.max_iterations < 1:
            errors.append("solver.max_iterations must be at least 1")
        if config.solver.feas_tol <= 0 or config.solver.gap_tol <= 0:
            errors.append("solver tolerances must be positive")

        _, scenario_errors = self.validate_scenario(config.scenario)
        errors.extend(scenario_errors)

        return len(errors) == 0, errors
