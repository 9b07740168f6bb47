"""
Tests for configuration loading, validation and command-line overrides.
"""

from pathlib import Path

import pytest
import yaml

from src.core.exceptions import ConfigError
from src.utils.config import (ExperimentConfig, apply_overrides, load_config, parse_float_list,
                              parse_slope)

DEFAULT_FILE = Path(__file__).parent.parent / 'config' / 'default.yaml'


def test_default_file_matches_builtin_defaults():
    assert load_config(DEFAULT_FILE) == ExperimentConfig()


def test_missing_default_file_falls_back(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    assert load_config() == ExperimentConfig()


def test_missing_explicit_file(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / 'absent.yaml')


def test_malformed_files(tmp_path):
    broken = tmp_path / 'broken.yaml'
    broken.write_text('grids: [', encoding='utf-8')
    with pytest.raises(ConfigError):
        load_config(broken)
    listing = tmp_path / 'listing.yaml'
    listing.write_text('- 1\n- 2\n', encoding='utf-8')
    with pytest.raises(ConfigError):
        load_config(listing)


def test_unknown_keys_rejected():
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({'colour': 'blue'})
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict({'budgets': {'memory': 5}})


@pytest.mark.parametrize('payload', [
    {'slope': {'kind': 'mystery'}},
    {'slope': {'kind': 'explicit', 'entries': [2, 0, 1]}},
    {'slope': {'kind': 'explicit'}},
    {'alpha': 0.5},
    {'grids': {'t': []}},
    {'grids': {'n_range': [3, 1]}},
    {'budgets': {'word_budget': 0}},
    {'verdict': {'band_low': 5.0, 'band_high': 1.0}},
    {'dimension': {'c1': 3.0, 'c2': 1.0}},
    {'dimension': {'depth': 8, 'free_levels': 8}},
    {'output': {'format': 'xml'}},
    {'workers': 0},
])
def test_invalid_settings(payload):
    with pytest.raises(ConfigError):
        ExperimentConfig.from_dict(payload)


def test_yaml_round_trip():
    config = ExperimentConfig.from_dict({'slope': {'kind': 'synthesized', 'alpha': 1.5}, 'seed': 4})
    assert ExperimentConfig.from_dict(yaml.safe_load(config.to_yaml())) == config


def test_digest_tracks_content():
    base = ExperimentConfig()
    assert base.digest() == ExperimentConfig().digest()
    assert base.digest() != ExperimentConfig.from_dict({'seed': 1}).digest()


def test_parsers():
    assert parse_float_list('0.5, 1,2') == [0.5, 1.0, 2.0]
    with pytest.raises(ConfigError):
        parse_float_list('')
    with pytest.raises(ConfigError):
        parse_float_list('a,b')
    assert parse_slope('fibonacci') == {'kind': 'fibonacci'}
    assert parse_slope('2,1,1') == {'kind': 'explicit', 'entries': [2, 1, 1]}


def test_overrides():
    config = apply_overrides(ExperimentConfig(), {
        'slope': 'synthesized', 'alpha': 1.5, 'c': 2.0, 't': '0.75,1.5', 'r_grid': '0.2,0.4',
        'depth': 12, 'budget': 5000, 'seed': 9, 'out': 'elsewhere', 'format': 'csv',
        'workers': 2, 'module': 'spectral', 'verbose': True,
    })
    assert config.slope.kind == 'synthesized'
    assert config.alpha == config.slope.alpha == 1.5
    assert config.slope.c == 2.0
    assert config.grids.t == [0.75, 1.5]
    assert config.grids.r == [0.2, 0.4]
    assert config.slope.depth == 12
    assert config.budgets.word_budget == 5000
    assert config.seed == config.slope.seed == 9
    assert config.output.directory == 'elsewhere'
    assert config.output.format == 'csv'
    assert (config.workers, config.module) == (2, 'spectral')


def test_overrides_leave_original_untouched():
    base = ExperimentConfig()
    apply_overrides(base, {'budget': 10, 'slope': '3,2'})
    assert base == ExperimentConfig()


def test_invalid_override():
    with pytest.raises(ConfigError):
        apply_overrides(ExperimentConfig(), {'slope': '2,0,1'})
