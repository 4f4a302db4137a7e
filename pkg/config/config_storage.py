"""Configuration persistence: key=value experiment files and stored solutions."""

import json
import logging
import os
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

from filelock import FileLock

from solver import SolverOptions

from .errors import ConfigError
from .experiment_config import (
    DensityConfig, ExperimentConfig, ScalingRule, ScenarioConfig, SourceConfig, SweepKind
)

logger = logging.getLogger(__name__)

# Parsed entries keep their 1-based line number for error reporting.
Entries = Dict[str, Tuple[str, int]]
_REQUIRED = object()

SCENARIO_KEYS = {'n_sensors', 'spacing_wavelengths', 'noise_power_db', 'grid_points'}
DENSITY_KEYS = {
    'kind', 'central_deg', 'spread_deg', 'scale', 'support_deg',
    'fluctuation', 'fluctuation_seed', 'power_db'
}
EXPERIMENT_KEYS = {
    'name', 'scenario', 'sweep', 'snr_grid_db', 'spread_grid_deg', 'snr_db', 'trials',
    'full_scale_trials', 'snapshots', 'gamma_rule', 'eps_rule', 'base_seed', 'methods',
    'workers', 'solver.max_iterations', 'solver.feas_tol', 'solver.gap_tol'
}


def atomic_write(path: Union[str, Path], content: str) -> None:
    """Write text to path under a file lock via a temp file and os.replace."""
    path = Path(path)
    if path.parent and not path.parent.exists():
        path.parent.mkdir(parents=True, exist_ok=True)
    temp_file = path.with_suffix(path.suffix + '.tmp')
    with FileLock(str(path) + '.lock'):
        try:
            with open(temp_file, 'w', encoding='utf-8', newline='') as f:
                f.write(content)
            os.replace(temp_file, path)
        except Exception:
            if temp_file.exists():
                temp_file.unlink()
            raise


def parse_key_values(text: str, path: str = '<string>') -> Entries:
    """
    Parse `key = value` lines; `#` starts a comment, blank lines are skipped.

    Raises:
        ConfigError: On a line without '=', an empty key or a duplicate key
    """
    entries: Entries = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError(path, number, f"expected 'key = value', got '{line}'")
        key, value = (part.strip() for part in line.split('=', 1))
        if not key:
            raise ConfigError(path, number, 'empty key')
        if key in entries:
            raise ConfigError(path, number, f"duplicate key '{key}' (first on line {entries[key][1]})")
        entries[key] = (value, number)
    return entries


def _read_entries(path: Union[str, Path]) -> Entries:
    path = Path(path)
    if not path.exists():
        raise ConfigError(str(path), None, 'file not found')
    return parse_key_values(path.read_text(encoding='utf-8'), str(path))


class _Reader:
    """Typed access to parsed entries, raising ConfigError with the entry's line."""

    def __init__(self, entries: Entries, path: str):
        self.entries = entries
        self.path = path

    def has(self, key: str) -> bool:
        return key in self.entries

    def line(self, key: str) -> Optional[int]:
        return self.entries[key][1] if key in self.entries else None

    def value(self, key: str, convert, what: str, default: Any):
        if key not in self.entries:
            if default is _REQUIRED:
                raise ConfigError(self.path, None, f"missing required key '{key}'")
            return default
        value, number = self.entries[key]
        try:
            return convert(value)
        except (TypeError, ValueError) as e:
            raise ConfigError(self.path, number, f"'{key}' must be {what}: {e}") from e

    def text(self, key: str, default: Any = None):
        return self.value(key, str, 'text', default)

    def real(self, key: str, default: Any = None):
        return self.value(key, float, 'a number', default)

    def integer(self, key: str, default: Any = None):
        return self.value(key, int, 'an integer', default)

    def reals(self, key: str, default: Any = None):
        return self.value(key, _parse_reals, 'a comma-separated list of numbers', default)

    def words(self, key: str, default: Any = None):
        return self.value(key, _parse_words, 'a comma-separated list', default)


def _parse_reals(value: str) -> List[float]:
    items = _parse_words(value)
    if not items:
        raise ValueError('list is empty')
    return [float(item) for item in items]


def _parse_words(value: str) -> List[str]:
    return [item.strip() for item in value.split(',') if item.strip()]


def _density(reader: _Reader, prefix: str) -> DensityConfig:
    support = reader.reals(f'{prefix}.support_deg')
    if support is not None and len(support) != 2:
        raise ConfigError(reader.path, reader.line(f'{prefix}.support_deg'),
                          f"'{prefix}.support_deg' needs exactly two angles")
    return DensityConfig(
        kind=reader.text(f'{prefix}.kind', _REQUIRED),
        central_deg=reader.real(f'{prefix}.central_deg', _REQUIRED),
        spread_deg=reader.real(f'{prefix}.spread_deg', 0.0),
        scale=reader.real(f'{prefix}.scale', 0.0),
        support_deg=tuple(support) if support is not None else None,
        fluctuation=reader.real(f'{prefix}.fluctuation', 0.0),
        fluctuation_seed=reader.integer(f'{prefix}.fluctuation_seed', 0)
    )


def _check_keys(reader: _Reader, allowed) -> None:
    for key, (_, number) in reader.entries.items():
        if key in allowed:
            continue
        head, _, rest = key.partition('.')
        if head in ('signal', 'presumed') and rest in DENSITY_KEYS:
            continue
        if head == 'interferer':
            index, _, field_name = rest.partition('.')
            if index.isdigit() and field_name in DENSITY_KEYS:
                continue
        raise ConfigError(reader.path, number, f"unknown key '{key}'")


def scenario_from_entries(entries: Entries, path: str) -> ScenarioConfig:
    """Build a ScenarioConfig from parsed entries of a scenario file."""
    reader = _Reader(entries, path)
    _check_keys(reader, SCENARIO_KEYS)

    signal = SourceConfig(_density(reader, 'signal'), reader.real('signal.power_db', 0.0))
    indices = sorted({
        int(key.split('.')[1]) for key in entries
        if key.startswith('interferer.') and key.split('.')[1].isdigit()
    })
    interferers = [
        SourceConfig(_density(reader, f'interferer.{i}'), reader.real(f'interferer.{i}.power_db', _REQUIRED))
        for i in indices
    ]
    presumed = _density(reader, 'presumed') if reader.has('presumed.kind') else None

    return ScenarioConfig(
        signal=signal,
        interferers=interferers,
        presumed_signal=presumed,
        n_sensors=reader.integer('n_sensors', 10),
        spacing_wavelengths=reader.real('spacing_wavelengths', 0.5),
        noise_power_db=reader.real('noise_power_db', 0.0),
        grid_points=reader.integer('grid_points', 2001),
        source_path=path
    )


def load_scenario_config(path: Union[str, Path]) -> ScenarioConfig:
    """
    Load a scenario file.

    Raises:
        ConfigError: If the file is missing or a line does not parse
    """
    return scenario_from_entries(_read_entries(path), str(path))


def load_experiment_config(path: Union[str, Path]) -> ExperimentConfig:
    """
    Load an experiment file and the scenario file it names.

    A relative `scenario` path is resolved against the experiment file's directory.

    Raises:
        ConfigError: If either file is missing or a line does not parse
    """
    path = Path(path)
    reader = _Reader(_read_entries(path), str(path))
    _check_keys(reader, EXPERIMENT_KEYS)

    scenario_name = reader.text('scenario', _REQUIRED)
    scenario_path = Path(scenario_name)
    if not scenario_path.is_absolute():
        scenario_path = path.parent / scenario_path
    scenario = load_scenario_config(scenario_path)

    def rule(key: str, default: ScalingRule, matrix: str) -> ScalingRule:
        return reader.value(key, lambda v: ScalingRule.parse(v, matrix), f"'c * norm({matrix})'", default)

    defaults = ExperimentConfig(name='', scenario=scenario)
    solver = SolverOptions().to_dict()
    for key in ('max_iterations', 'feas_tol', 'gap_tol'):
        convert = reader.integer if key == 'max_iterations' else reader.real
        solver[key] = convert(f'solver.{key}', solver[key])

    sweep = reader.value('sweep', SweepKind, "'snr' or 'spread'", SweepKind.SNR)
    config = ExperimentConfig(
        name=reader.text('name', path.stem),
        scenario=scenario,
        sweep=sweep,
        snr_grid_db=reader.reals('snr_grid_db', defaults.snr_grid_db),
        spread_grid_deg=reader.reals('spread_grid_deg', defaults.spread_grid_deg),
        snr_db=reader.real('snr_db', defaults.snr_db),
        trials=reader.integer('trials', defaults.trials),
        full_scale_trials=reader.integer('full_scale_trials', defaults.full_scale_trials),
        snapshots=reader.integer('snapshots', defaults.snapshots),
        gamma_rule=rule('gamma_rule', defaults.gamma_rule, 'R_hat'),
        eps_rule=rule('eps_rule', defaults.eps_rule, 'Rs_hat'),
        base_seed=reader.integer('base_seed', defaults.base_seed),
        methods=reader.words('methods', defaults.methods),
        workers=reader.integer('workers', None),
        scenario_path=str(scenario_path),
        solver=SolverOptions.from_dict(solver),
        source_path=str(path)
    )
    logger.debug(f"Loaded experiment '{config.name}' from {path} (scenario {scenario_path})")
    return config


class SolutionStore:
    """Stores solve reports as JSON files for later re-certification."""

    def __init__(self, path: Union[str, Path]):
        self.path = Path(path)

    def save(self, report: Dict[str, Any]) -> None:
        atomic_write(self.path, json.dumps(report, indent=2, sort_keys=True) + '\n')

    def load(self) -> Dict[str, Any]:
        """
        Raises:
            ConfigError: If the file is missing or is not valid JSON
        """
        if not self.path.exists():
            raise ConfigError(str(self.path), None, 'stored solution not found')
        with FileLock(str(self.path) + '.lock'):
            text = self.path.read_text(encoding='utf-8')
        try:
            return json.loads(text)
        except json.JSONDecodeError as e:
            raise ConfigError(str(self.path), e.lineno, f"invalid JSON: {e.msg}") from e
