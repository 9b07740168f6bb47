"""
Experiment Configuration Module

A dataclass tree loaded from a YAML file, validated on load and then
overridden by command-line flags. The resolved configuration is embedded
in every report and its digest identifies runs in the registry.
"""

import hashlib
import json
import logging
from dataclasses import asdict, dataclass, field, fields, replace
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import yaml

from src.core.exceptions import ConfigError
from src.utils.calculations import BandRule

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path("config/default.yaml")

SLOPE_KINDS = ('fibonacci', 'explicit', 'synthesized', 'random')
MODULES = ('all', 'cf', 'words', 'complexity', 'spectral', 'jarnik')
FORMATS = ('csv', 'json')


@dataclass
class SlopeConfig:
    kind: str = 'fibonacci'
    entries: List[int] = field(default_factory=list)
    alpha: float = 2.0
    c: float = 1.0
    seed: int = 0
    depth: int = 40
    q_cap: Optional[int] = None
    max_entry: int = 5


@dataclass
class GridConfig:
    t: List[float] = field(default_factory=lambda: [0.6, 0.75, 0.9, 1.0, 1.5])
    r_offsets: List[float] = field(default_factory=lambda: [-0.15, 0.0, 0.15])
    r: List[float] = field(default_factory=list)
    n_range: List[int] = field(default_factory=lambda: [1, 4])
    depth: Optional[int] = None
    alphas: List[float] = field(default_factory=lambda: [1.5, 2.0, 3.0])
    levels: Optional[int] = None


@dataclass
class BudgetConfig:
    word_budget: int = 10 ** 6
    p_cap: int = 10 ** 6
    horizon: int = 10 ** 4
    max_factor_length: int = 200
    brute_n_max: int = 120


@dataclass
class VerdictConfig:
    band_low: float = 0.01
    band_high: float = 100.0
    max_ratio: float = 100.0
    slope_tolerance: float = 0.1

    def to_rule(self) -> BandRule:
        return BandRule(self.band_low, self.band_high, self.max_ratio, self.slope_tolerance)


@dataclass
class DimensionConfig:
    c1: float = 0.5
    c2: float = 2.0
    depth: int = 8
    samples: int = 1000
    free_levels: int = 7
    beta: float = 3.0
    lebesgue_depth: int = 25
    lebesgue_samples: int = 1000


@dataclass
class OutputConfig:
    directory: str = 'output'
    format: str = 'json'
    log_file: str = 'sturmian.log'
    registry: str = 'data/runs.db'


@dataclass
class ExperimentConfig:
    """
    Resolved experiment configuration.

    Args:
        slope: How the slope is built
        module: Which module the sweep exercises
        alpha: Exponent the analyses test against
        grids: Parameter grids
        budgets: Word, power and horizon budgets
        verdict: Banding rule thresholds
        dimension: Cover and measure probe settings
        output: Output locations
        seed: Master seed for sampling
        workers: Worker processes for sweeps
    """
    slope: SlopeConfig = field(default_factory=SlopeConfig)
    module: str = 'all'
    alpha: float = 2.0
    grids: GridConfig = field(default_factory=GridConfig)
    budgets: BudgetConfig = field(default_factory=BudgetConfig)
    verdict: VerdictConfig = field(default_factory=VerdictConfig)
    dimension: DimensionConfig = field(default_factory=DimensionConfig)
    output: OutputConfig = field(default_factory=OutputConfig)
    seed: int = 0
    workers: int = 1

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> 'ExperimentConfig':
        sections = {
            'slope': SlopeConfig, 'grids': GridConfig, 'budgets': BudgetConfig,
            'verdict': VerdictConfig, 'dimension': DimensionConfig, 'output': OutputConfig,
        }
        payload = dict(payload or {})
        _reject_unknown(cls, payload, 'config')
        kwargs = {}
        for name, value in payload.items():
            if name in sections:
                section = value or {}
                if not isinstance(section, dict):
                    raise ConfigError(f"Section '{name}' must be a mapping")
                _reject_unknown(sections[name], section, name)
                kwargs[name] = sections[name](**section)
            else:
                kwargs[name] = value
        config = cls(**kwargs)
        config.validate()
        return config

    def to_yaml(self) -> str:
        return yaml.safe_dump(self.to_dict(), sort_keys=False)

    def digest(self) -> str:
        """Short stable hash of the resolved configuration."""
        text = json.dumps(self.to_dict(), sort_keys=True)
        return hashlib.sha256(text.encode('utf-8')).hexdigest()[:16]

    def validate(self) -> None:
        """
        Raise ConfigError on the first invalid setting.
        """
        slope = self.slope
        if slope.kind not in SLOPE_KINDS:
            raise ConfigError(f"Unknown slope kind '{slope.kind}', expected one of {SLOPE_KINDS}")
        if slope.kind == 'explicit':
            if not slope.entries:
                raise ConfigError("Explicit slopes need a non-empty entry list")
            bad = [i + 1 for i, a in enumerate(slope.entries) if int(a) < 1]
            if bad:
                raise ConfigError(f"Continued fraction entries must be >= 1, offending positions: {bad[:5]}")
        if slope.depth < 2 or slope.max_entry < 1:
            raise ConfigError("Slope depth must be >= 2 and max_entry >= 1")
        if slope.kind == 'synthesized' and (slope.alpha <= 1 or slope.c <= 0):
            raise ConfigError(f"Synthesized slopes need alpha > 1 and c > 0, got {slope.alpha}, {slope.c}")

        if self.module not in MODULES:
            raise ConfigError(f"Unknown module '{self.module}', expected one of {MODULES}")
        if self.alpha < 1:
            raise ConfigError(f"alpha must be >= 1, got {self.alpha}")

        grids = self.grids
        if not grids.t or any(t <= 0 for t in grids.t):
            raise ConfigError("The t grid must be non-empty with positive values")
        if not grids.r and not grids.r_offsets:
            raise ConfigError("Either an r grid or r offsets are required")
        if any(r <= 0 for r in grids.r):
            raise ConfigError("r values must be positive")
        if not grids.alphas or any(a <= 1 for a in grids.alphas):
            raise ConfigError("The alpha grid must be non-empty with values > 1")
        if len(grids.n_range) != 2 or not 0 <= grids.n_range[0] <= grids.n_range[1]:
            raise ConfigError(f"n_range must be [low, high] with 0 <= low <= high, got {grids.n_range}")

        for name, value in asdict(self.budgets).items():
            if int(value) <= 0:
                raise ConfigError(f"Budget '{name}' must be positive, got {value}")

        try:
            self.verdict.to_rule()
        except ValueError as e:
            raise ConfigError(str(e)) from e

        dim = self.dimension
        if not 0 < dim.c1 <= dim.c2:
            raise ConfigError(f"Need 0 < c1 <= c2, got {dim.c1}, {dim.c2}")
        if dim.depth < 1 or dim.samples < 1:
            raise ConfigError("Dimension depth and samples must be positive")
        if not 0 <= dim.free_levels < dim.depth:
            raise ConfigError(f"free_levels must lie in 0..{dim.depth - 1}, got {dim.free_levels}")
        if dim.lebesgue_depth < 1 or dim.lebesgue_samples < 0:
            raise ConfigError("Lebesgue depth must be positive and samples non-negative")

        if self.output.format not in FORMATS:
            raise ConfigError(f"Output format must be one of {FORMATS}")
        if self.workers < 1:
            raise ConfigError(f"workers must be >= 1, got {self.workers}")


def _reject_unknown(cls, payload: Dict, where: str) -> None:
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(payload) - known)
    if unknown:
        raise ConfigError(f"Unknown keys in {where}: {unknown}")


def load_config(path: Optional[Union[str, Path]] = None) -> ExperimentConfig:
    """
    Load and validate a YAML configuration.

    Args:
        path: YAML file; the default file is used when it exists, built-in
            defaults otherwise

    Returns:
        ExperimentConfig
    """
    if path is None:
        if not DEFAULT_CONFIG_PATH.exists():
            logger.info("No configuration file found, using built-in defaults")
            return ExperimentConfig()
        path = DEFAULT_CONFIG_PATH
    path = Path(path)
    if not path.exists():
        raise ConfigError(f"Configuration file {path} does not exist")
    try:
        payload = yaml.safe_load(path.read_text(encoding='utf-8'))
    except yaml.YAMLError as e:
        raise ConfigError(f"Could not parse {path}: {e}") from e
    if payload is not None and not isinstance(payload, dict):
        raise ConfigError(f"{path} must contain a mapping")
    config = ExperimentConfig.from_dict(payload or {})
    logger.info(f"Loaded configuration from {path}")
    return config


def parse_float_list(text: str) -> List[float]:
    try:
        values = [float(v) for v in text.split(',') if v.strip()]
    except ValueError as e:
        raise ConfigError(f"Could not parse number list '{text}'") from e
    if not values:
        raise ConfigError(f"Empty number list '{text}'")
    return values


def parse_slope(text: str) -> Dict[str, Any]:
    """'fibonacci', 'synthesized', 'random' or a comma-separated entry list."""
    text = text.strip()
    if text in SLOPE_KINDS:
        return {'kind': text}
    try:
        entries = [int(v) for v in text.split(',') if v.strip()]
    except ValueError as e:
        raise ConfigError(f"Could not parse slope '{text}'") from e
    return {'kind': 'explicit', 'entries': entries}


def apply_overrides(config: ExperimentConfig, overrides: Dict[str, Any]) -> ExperimentConfig:
    """
    Return a copy of config with command-line overrides applied and validated.

    Recognised keys: slope, alpha, c, t, r_grid, depth, budget, seed, out,
    format, workers, module. None values are ignored.
    """
    slope = replace(config.slope)
    grids = replace(config.grids)
    budgets = replace(config.budgets)
    output = replace(config.output)
    top: Dict[str, Any] = {}

    value = overrides.get('slope')
    if value is not None:
        for key, item in parse_slope(value).items():
            setattr(slope, key, item)
    if overrides.get('alpha') is not None:
        top['alpha'] = float(overrides['alpha'])
        slope.alpha = float(overrides['alpha'])
    if overrides.get('c') is not None:
        slope.c = float(overrides['c'])
    if overrides.get('t') is not None:
        grids.t = parse_float_list(overrides['t'])
    if overrides.get('r_grid') is not None:
        grids.r = parse_float_list(overrides['r_grid'])
    if overrides.get('depth') is not None:
        slope.depth = int(overrides['depth'])
    if overrides.get('budget') is not None:
        budgets.word_budget = int(overrides['budget'])
    if overrides.get('seed') is not None:
        top['seed'] = int(overrides['seed'])
        slope.seed = int(overrides['seed'])
    if overrides.get('out') is not None:
        output.directory = str(overrides['out'])
    if overrides.get('format') is not None:
        output.format = overrides['format']
    if overrides.get('workers') is not None:
        top['workers'] = int(overrides['workers'])
    if overrides.get('module') is not None:
        top['module'] = overrides['module']

    resolved = replace(config, slope=slope, grids=grids, budgets=budgets, output=output, **top)
    resolved.validate()
    return resolved


def main():
    """Print the resolved default configuration."""
    config = load_config()
    print(config.to_yaml())
    print(f"digest: {config.digest()}")


if __name__ == "__main__":
    main()
